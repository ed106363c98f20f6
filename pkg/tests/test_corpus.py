import itertools

import networkx as nx

from corpus import connected_graphs


def nx_count(n: int, max_edges: int) -> int:
    """Connected loopless multigraphs on n vertices up to isomorphism, via networkx."""
    pairs = list(itertools.combinations(range(n), 2))
    reps: dict = {}
    for m in range(n - 1, max_edges + 1):
        for ms in itertools.combinations_with_replacement(pairs, m):
            g = nx.Graph()
            g.add_nodes_from(range(n))
            for p in set(ms):
                g.add_edge(*p, w=ms.count(p))
            if not nx.is_connected(g):
                continue
            key = (m, nx.weisfeiler_lehman_graph_hash(g, edge_attr="w"))
            bucket = reps.setdefault(key, [])
            if not any(nx.is_isomorphic(g, h, edge_match=lambda a, b: a["w"] == b["w"]) for h in bucket):
                bucket.append(g)
    return sum(map(len, reps.values()))


def test_corpus_matches_networkx_enumeration():
    graphs = connected_graphs(5, 8)
    by_n = {}
    for g in graphs:
        by_n[len(g.vertices)] = by_n.get(len(g.vertices), 0) + 1
    assert by_n == {n: nx_count(n, 8) for n in range(2, 6)} == {2: 8, 3: 32, 4: 138, 5: 326}
    assert all(g.number_of_edges() <= 8 for g in graphs)
