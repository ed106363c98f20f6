"""Exhaustive corpus of small connected loopless multigraphs, up to isomorphism."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations

from tpack.multigraph import MultiGraph

MAX_VERTICES = 5
MAX_EDGES = 8


def _canonical(n: int, multiset: tuple) -> tuple:
    best = None
    for perm in permutations(range(n)):
        image = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in multiset))
        if best is None or image < best:
            best = image
    return best


def _connected(n: int, multiset: tuple) -> bool:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in multiset:
        parent[find(a)] = find(b)
    return len({find(a) for a in range(n)}) == 1


@lru_cache(maxsize=None)
def edge_multisets(n: int, max_edges: int = MAX_EDGES) -> tuple:
    """Canonical edge multisets on ``n`` labelled vertices, all sizes <= max_edges."""
    pairs = list(combinations(range(n), 2))
    level = {()}
    every = [()]
    for _ in range(max_edges):
        nxt = set()
        for ms in level:
            for p in pairs:
                nxt.add(_canonical(n, tuple(sorted(ms + (p,)))))
        every.extend(sorted(nxt))
        level = nxt
    return tuple(every)


def to_graph(n: int, multiset: tuple) -> MultiGraph:
    return MultiGraph([f"v{i}" for i in range(n)], [(i, f"v{a}", f"v{b}") for i, (a, b) in enumerate(multiset)])


@lru_cache(maxsize=None)
def connected_graphs(max_vertices: int = MAX_VERTICES, max_edges: int = MAX_EDGES) -> tuple:
    out = []
    for n in range(2, max_vertices + 1):
        for ms in edge_multisets(n, max_edges):
            if len(ms) >= n - 1 and _connected(n, ms):
                out.append(to_graph(n, ms))
    return tuple(out)


def terminal_sets(g: MultiGraph):
    vs = g.vertices
    for k in range(2, len(vs) + 1):
        yield from (frozenset(c) for c in combinations(vs, k))
