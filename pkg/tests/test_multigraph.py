from collections import Counter
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from corpus import connected_graphs
from oracles import enum_cut_value, nx_cut_value, nx_graph
from strategies import graph_with_terminals, multigraphs
from tpack.errors import DomainError, InfeasibleError
from tpack.multigraph import (
    Cut,
    MultiGraph,
    boundary_size,
    contract,
    degree,
    edge_disjoint_paths,
    max_flow,
    min_cut,
    simplify_walk,
    sort_key,
)
from tpack.zoo import cycle, parallel, path_graph, star


def path_abcd():
    return MultiGraph("abcd", [("ab", "a", "b"), ("bc", "b", "c"), ("cd", "c", "d")])


def c4():
    return MultiGraph("abcd", [("ab", "a", "b"), ("bc", "b", "c"), ("cd", "c", "d"), ("da", "d", "a")])


class TestConstruction:
    def test_rejects_loops(self):
        with pytest.raises(DomainError, match="loop"):
            MultiGraph(["a"], [("x", "a", "a")])

    def test_rejects_duplicate_ids(self):
        with pytest.raises(DomainError, match="duplicate"):
            MultiGraph("ab", [("x", "a", "b"), ("x", "b", "a")])

    def test_adjacency_sorted_by_edge_id(self):
        g = MultiGraph("ab", [("e10", "a", "b"), ("e2", "a", "b"), ("e1", "a", "b")])
        assert [e for e, _ in g.incident("a")] == ["e1", "e2", "e10"]

    def test_natural_order_mixes_ints_and_strings(self):
        assert sorted(["v10", 3, "v2", 1], key=sort_key) == [1, 3, "v2", "v10"]

    def test_unknown_vertex(self):
        with pytest.raises(DomainError):
            degree(path_abcd(), "z")


class TestDegreeAndBoundary:
    def test_examples(self):
        assert degree(MultiGraph("abc", [("x", "a", "b"), ("y", "b", "c")]), "b") == 2
        assert degree(parallel(3), "u") == 3
        assert degree(star(3), "c") == 3

    def test_boundary_examples(self):
        g = cycle(4)
        assert boundary_size(g, {"v0", "v1"}) == 2
        assert boundary_size(g, {"v0"}) == 2
        assert boundary_size(parallel(3), {"u"}) == 3

    @given(multigraphs())
    def test_handshake(self, g):
        assert sum(degree(g, v) for v in g.vertices) == 2 * g.number_of_edges()

    @given(multigraphs())
    def test_singleton_boundary_is_degree(self, g):
        for v in g.vertices:
            assert boundary_size(g, {v}) == degree(g, v)


class TestMinCut:
    def test_examples(self):
        assert min_cut(path_abcd(), {"a"}, {"d"})[1] == 1
        assert min_cut(parallel(3), {"u"}, {"v"})[1] == 3
        # oracle: enumeration over all vertex sets
        assert enum_cut_value(c4(), {"a"}, {"c"}) == 2
        assert min_cut(c4(), {"a"}, {"c"})[1] == 2

    def test_overlapping_sets(self):
        with pytest.raises(DomainError):
            min_cut(c4(), {"a"}, {"a", "c"})

    def test_disconnected_gives_zero(self):
        g = MultiGraph("abcd", [("x", "a", "b"), ("y", "c", "d")])
        cut, val = min_cut(g, {"a"}, {"d"})
        assert val == 0 and cut.edges == frozenset()

    def test_side_a_is_closest_to_sources(self):
        cut, _ = min_cut(path_abcd(), {"a"}, {"d"})
        assert cut.side_a == {"a"} and cut.edges == {"ab"}

    @given(graph_with_terminals())
    def test_matches_networkx(self, inst):
        g, t = inst
        ts = sorted(t, key=sort_key)
        x, y = set(ts[:1]), set(ts[1:])
        cut, val = min_cut(g, x, y)
        assert val == nx_cut_value(g, x, y)
        assert cut.size == val
        assert x <= cut.side_a and y <= cut.side_b
        assert cut == Cut.from_side(g, cut.side_a)

    @given(graph_with_terminals())
    def test_deterministic(self, inst):
        g, t = inst
        ts = sorted(t, key=sort_key)
        assert min_cut(g, ts[:1], ts[1:]) == min_cut(MultiGraph(g.vertices, g.edge_list()), ts[:1], ts[1:])

    def test_duality_on_corpus(self):
        # every pair of single vertices on the exhaustive corpus
        checked = 0
        for g in connected_graphs():
            for a, b in combinations(g.vertices, 2):
                _, val = min_cut(g, {a}, {b})
                assert val == enum_cut_value(g, {a}, {b})
                assert len(edge_disjoint_paths(g, {a}, {b}, val)) == val
                with pytest.raises(InfeasibleError):
                    edge_disjoint_paths(g, {a}, {b}, val + 1)
                checked += 1
        assert checked > 2000


class TestPaths:
    def test_single_path(self):
        g = path_graph(3)
        (p,) = edge_disjoint_paths(g, {"v0"}, {"v2"}, 1)
        assert p.vertices == ("v0", "v1", "v2")

    def test_parallel_edges(self):
        ps = edge_disjoint_paths(parallel(3), {"u"}, {"v"}, 3)
        assert sorted(p.edges for p in ps) == [("e1",), ("e2",), ("e3",)]

    def test_cycle_arcs(self):
        ps = edge_disjoint_paths(c4(), {"a"}, {"c"}, 2)
        assert {p.vertices for p in ps} == {("a", "b", "c"), ("a", "d", "c")}

    def test_infeasible_carries_cut(self):
        with pytest.raises(InfeasibleError) as exc:
            edge_disjoint_paths(c4(), {"a"}, {"c"}, 3)
        assert exc.value.cut.size == 2

    @given(graph_with_terminals(min_terminals=2), st.data())
    def test_paths_are_valid(self, inst, data):
        g, t = inst
        ts = sorted(t, key=sort_key)
        k = data.draw(st.integers(1, len(ts) - 1))
        s, y = set(ts[:k]), set(ts[k:])
        val = max_flow(g, s, y).value
        ps = edge_disjoint_paths(g, s, y, val)
        used = Counter(e for p in ps for e in p.edges)
        assert all(c == 1 for c in used.values())
        for p in ps:
            assert p.is_simple() and p.start in s and p.end in y
            assert not (set(p.vertices[1:]) & s) and not (set(p.vertices[:-1]) & y)
            for e, a, b in zip(p.edges, p.vertices, p.vertices[1:]):
                assert set(g.endpoints(e)) == {a, b}

    def test_simplify_walk(self):
        p = simplify_walk(["a", "b", "c", "b", "d"], ["x", "y", "z", "w"])
        assert p.vertices == ("a", "b", "d") and p.edges == ("x", "w")


class TestContract:
    def test_c4_adjacent_pair(self):
        m = contract(c4(), [{"a", "b"}], ["vc"])
        # oracle: networkx contraction without self loops, compared as edge multisets
        h = nx.contracted_nodes(nx_graph(c4()), "a", "b", self_loops=False)
        expected = Counter(frozenset({"vc" if x == "a" else x for x in (u, v)}) for u, v, _ in h.edges(keys=True))
        got = Counter(frozenset(e) for e in m.minor.edges.values())
        assert got == expected
        assert len(m.minor) == 3 and m.minor.number_of_edges() == 3

    def test_singleton_class(self):
        m = contract(c4(), [{"a"}], ["a"])
        assert m.minor == c4()
        assert dict(m.edge_correspondence) == {e: e for e in c4().edges}

    def test_internal_parallels_dropped(self):
        g = MultiGraph("uvw", [("p", "u", "v"), ("q", "u", "v"), ("r", "v", "w")])
        m = contract(g, [{"u", "v"}], ["x"])
        assert m.minor.edge_list() == [("r", "x", "w")]

    def test_errors(self):
        with pytest.raises(DomainError):
            contract(c4(), [{"a", "b"}, {"b", "c"}])
        with pytest.raises(DomainError):
            contract(c4(), [{"a", "c"}])

    @given(multigraphs(connected=True, min_vertices=3), st.data())
    def test_edge_correspondence_preserves_classes(self, g, data):
        v = data.draw(st.sampled_from(list(g.vertices)))
        nb = {w for _, w in g.incident(v)}
        cls = {v} | set(list(sorted(nb, key=sort_key))[:1])
        m = contract(g, [cls])
        originals = list(m.edge_correspondence.values())
        assert len(originals) == len(set(originals))
        for me, oe in m.edge_correspondence.items():
            u, w = g.endpoints(oe)
            assert set(m.minor.endpoints(me)) == {m.class_map[u], m.class_map[w]}
