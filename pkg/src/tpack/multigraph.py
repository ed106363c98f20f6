"""Finite loopless multigraphs with stable edge ids, unit-capacity flows and cuts.

Every undirected edge has capacity one in either direction. Max-flow is the
plain augmenting-path method with breadth-first search; the search starts from
all sources at once (an implicit super-source) and stops at the first sink it
meets (an implicit super-sink), so neither auxiliary vertex ever shows up in a
returned cut. Incident edges are always scanned in ascending edge-id order,
which makes every flow, cut and path decomposition reproducible.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import ConsistencyError, DomainError, InfeasibleError

Vertex = Hashable
EdgeId = Hashable

_DIGITS = re.compile(r"(\d+)")


def sort_key(x) -> tuple:
    """Total order over int and string ids; digit runs compare numerically."""
    if isinstance(x, int) and not isinstance(x, bool):
        return (0, (x,), "")
    s = str(x)
    parts = _DIGITS.split(s)
    return (1, tuple(int(p) if i % 2 else p for i, p in enumerate(parts)), s)


def ordered(items: Iterable) -> list:
    return sorted(items, key=sort_key)


class MultiGraph:
    """Immutable loopless multigraph. Parallel edges are distinct edge ids."""

    __slots__ = ("_vertices", "_vertex_set", "_edges", "_adj")

    def __init__(self, vertices: Iterable[Vertex] = (), edges: Iterable[Sequence] = ()):
        verts = set(vertices)
        emap: dict = {}
        for eid, u, v in edges:
            if eid in emap:
                raise DomainError(f"duplicate edge id {eid!r}")
            if u == v:
                raise DomainError(f"edge {eid!r} is a loop at vertex {u!r}")
            emap[eid] = (u, v)
            verts.add(u)
            verts.add(v)
        self._vertices = tuple(ordered(verts))
        self._vertex_set = frozenset(verts)
        self._edges = {eid: emap[eid] for eid in ordered(emap)}
        adj: dict = {v: [] for v in self._vertices}
        for eid, (u, v) in self._edges.items():
            adj[u].append((eid, v))
            adj[v].append((eid, u))
        self._adj = {v: tuple(lst) for v, lst in adj.items()}

    # -- basic access -------------------------------------------------------
    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def edges(self) -> Mapping:
        """Edge id -> (u, v), in ascending edge-id order."""
        return self._edges

    def edge_list(self) -> list[tuple]:
        return [(eid, u, v) for eid, (u, v) in self._edges.items()]

    def __contains__(self, v) -> bool:
        return v in self._vertex_set

    def __len__(self) -> int:
        return len(self._vertices)

    def number_of_edges(self) -> int:
        return len(self._edges)

    def endpoints(self, eid) -> tuple:
        return self._edges[eid]

    def other_end(self, eid, v):
        a, b = self._edges[eid]
        if v == a:
            return b
        if v == b:
            return a
        raise DomainError(f"vertex {v!r} is not an endpoint of edge {eid!r}")

    def incident(self, v) -> tuple:
        """(edge id, neighbour) pairs at ``v`` in ascending edge-id order."""
        self._check(v)
        return self._adj[v]

    def degree(self, v) -> int:
        self._check(v)
        return len(self._adj[v])

    def _check(self, v):
        if v not in self._vertex_set:
            raise DomainError(f"unknown vertex {v!r}")

    # -- derived graphs -----------------------------------------------------
    def subgraph(self, vertices: Iterable[Vertex]) -> "MultiGraph":
        keep = set(vertices)
        for v in keep:
            self._check(v)
        return MultiGraph(keep, [(e, u, v) for e, (u, v) in self._edges.items() if u in keep and v in keep])

    def without_edges(self, eids: Iterable[EdgeId]) -> "MultiGraph":
        drop = set(eids)
        return MultiGraph(self._vertices, [(e, u, v) for e, (u, v) in self._edges.items() if e not in drop])

    def without_vertices(self, vertices: Iterable[Vertex]) -> "MultiGraph":
        drop = set(vertices)
        return self.subgraph(v for v in self._vertices if v not in drop)

    def components(self) -> list[tuple]:
        """Connected components as sorted vertex tuples, ordered by least vertex."""
        seen: set = set()
        comps = []
        for s in self._vertices:
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for _, y in self._adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        queue.append(y)
            comps.append(tuple(ordered(comp)))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._vertices, tuple(self._edges.items())))

    def __repr__(self) -> str:
        return f"MultiGraph(|V|={len(self._vertices)}, |E|={len(self._edges)})"


@dataclass(frozen=True)
class Cut:
    """An edge cut together with the vertex bipartition that induces it."""

    edges: frozenset
    side_a: frozenset
    side_b: frozenset

    @property
    def size(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list:
        return ordered(self.edges)

    @classmethod
    def from_side(cls, g: MultiGraph, side_a: Iterable[Vertex]) -> "Cut":
        a = frozenset(side_a)
        b = frozenset(v for v in g.vertices if v not in a)
        crossing = frozenset(e for e, (u, v) in g.edges.items() if (u in a) != (v in a))
        return cls(crossing, a, b)


@dataclass(frozen=True)
class Path:
    """A walk stored as its vertex sequence and the edge ids between them."""

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        if len(self.vertices) != len(self.edges) + 1:
            raise DomainError("path needs exactly one more vertex than edges")

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.edges)

    def reversed(self) -> "Path":
        return Path(self.vertices[::-1], self.edges[::-1])

    def is_simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)


def simplify_walk(vertices: Sequence, edges: Sequence) -> Path:
    """Cut closed sub-walks out of a walk. Endpoints and edge order survive."""
    vs = [vertices[0]]
    es: list = []
    pos = {vertices[0]: 0}
    for e, w in zip(edges, vertices[1:]):
        if w in pos:
            k = pos[w]
            for x in vs[k + 1:]:
                del pos[x]
            del vs[k + 1:]
            del es[k:]
        else:
            pos[w] = len(vs)
            vs.append(w)
            es.append(e)
    return Path(tuple(vs), tuple(es))


# -- operations ---------------------------------------------------------------

def degree(g: MultiGraph, v: Vertex) -> int:
    return g.degree(v)


def boundary_size(g: MultiGraph, x: Iterable[Vertex]) -> int:
    """Number of edges with exactly one endpoint in ``x``."""
    xs = set(x)
    for v in xs:
        g._check(v)
    return sum(1 for u, v in g.edges.values() if (u in xs) != (v in xs))


@dataclass(frozen=True)
class FlowResult:
    value: int
    flow: Mapping  # edge id -> +1 (u->v as stored) or -1 (v->u)
    reachable: frozenset  # residual-reachable set of the sources

    def cut(self, g: MultiGraph) -> Cut:
        return Cut.from_side(g, self.reachable)


def _check_terminals(g: MultiGraph, x, y) -> tuple[frozenset, frozenset]:
    xs, ys = frozenset(x), frozenset(y)
    for v in xs | ys:
        g._check(v)
    if not xs or not ys:
        raise DomainError("both terminal sets must be nonempty")
    common = xs & ys
    if common:
        raise DomainError(f"terminal sets intersect in {ordered(common)!r}")
    return xs, ys


def max_flow(g: MultiGraph, x: Iterable[Vertex], y: Iterable[Vertex], limit: int | None = None) -> FlowResult:
    """Unit-capacity max flow from set ``x`` to set ``y``.

    With ``limit`` the augmentation stops early once that value is reached;
    ``reachable`` is then only meaningful if the returned value is below it.
    """
    xs, ys = _check_terminals(g, x, y)
    edges = g.edges
    adj = g._adj
    flow: dict = {}
    starts = ordered(xs)
    value = 0
    while True:
        parent: dict = {s: None for s in starts}
        queue = deque(starts)
        hit = None
        while queue and hit is None:
            a = queue.popleft()
            for eid, b in adj[a]:
                if b in parent:
                    continue
                f = flow.get(eid, 0)
                if (f < 1) if edges[eid][0] == a else (f > -1):
                    parent[b] = (eid, a)
                    if b in ys:
                        hit = b
                        break
                    queue.append(b)
        if hit is None:
            return FlowResult(value, {e: f for e, f in flow.items() if f}, frozenset(parent))
        b = hit
        while parent[b] is not None:
            eid, a = parent[b]
            flow[eid] = flow.get(eid, 0) + (1 if edges[eid][0] == a else -1)
            b = a
        value += 1
        if limit is not None and value >= limit:
            return FlowResult(value, {e: f for e, f in flow.items() if f}, frozenset())


def min_cut(g: MultiGraph, x: Iterable[Vertex], y: Iterable[Vertex]) -> tuple[Cut, int]:
    """Minimum edge cut separating ``x`` from ``y``.

    ``side_a`` is the residual-reachable set of ``x`` after a maximum flow,
    i.e. the minimum cut closest to ``x``.
    """
    res = max_flow(g, x, y)
    cut = res.cut(g)
    if cut.size != res.value:
        raise ConsistencyError("cut size differs from flow value")
    return cut, res.value


def decompose_flow(g: MultiGraph, res: FlowResult, x: Iterable[Vertex], y: Iterable[Vertex]) -> list[Path]:
    """Split a source-to-sink flow into ``res.value`` edge-disjoint simple paths."""
    ys = frozenset(y)
    out: dict = {}
    for eid in g.edges:
        f = res.flow.get(eid, 0)
        if not f:
            continue
        u, v = g.edges[eid]
        a, b = (u, v) if f > 0 else (v, u)
        out.setdefault(a, []).append((eid, b))
    cursor = {a: 0 for a in out}
    paths = []
    for s in ordered(x):
        while cursor.get(s, 0) < len(out.get(s, ())):
            vs, es = [s], []
            cur = s
            while cur not in ys:
                i = cursor.get(cur, 0)
                arcs = out.get(cur, ())
                if i >= len(arcs):
                    raise ConsistencyError(f"flow is not conserved at {cur!r}")
                cursor[cur] = i + 1
                eid, nxt = arcs[i]
                es.append(eid)
                vs.append(nxt)
                cur = nxt
            paths.append(simplify_walk(vs, es))
    if len(paths) != res.value:
        raise ConsistencyError(f"decomposed {len(paths)} paths from a flow of value {res.value}")
    return paths


def edge_disjoint_paths(g: MultiGraph, s: Iterable[Vertex], y: Iterable[Vertex], k: int) -> list[Path]:
    """``k`` edge-disjoint paths from ``s`` to ``y``.

    Paths start in ``s``, end in ``y`` and meet neither set in between.
    Raises InfeasibleError carrying a minimum cut if fewer than ``k`` exist.
    """
    s, y = frozenset(s), frozenset(y)
    if k < 0:
        raise DomainError("k must be nonnegative")
    if k == 0:
        _check_terminals(g, s, y)
        return []
    res = max_flow(g, s, y, limit=k)
    if res.value < k:
        cut = res.cut(g)
        raise InfeasibleError(f"only {res.value} edge-disjoint paths exist, {k} requested", cut=cut, value=res.value)
    return decompose_flow(g, res, s, y)


@dataclass(frozen=True)
class ContractionMinor:
    minor: MultiGraph
    class_map: Mapping  # original vertex -> minor vertex
    super_vertices: frozenset
    edge_correspondence: Mapping  # minor edge id -> original edge id

    def members(self, w) -> list:
        return ordered(v for v, img in self.class_map.items() if img == w)


def contract(g: MultiGraph, classes: Sequence[Iterable[Vertex]], names: Sequence[Vertex] | None = None) -> ContractionMinor:
    """Contract disjoint connected vertex sets, keeping parallel edges.

    Edges inside a class disappear; every other edge keeps its id. Classes of
    size one are renamed only if a name is given for them.
    """
    classes = [frozenset(c) for c in classes]
    if names is None:
        names = [f"~c{i}" for i in range(len(classes))]
    if len(names) != len(classes):
        raise DomainError("one name per class is required")
    seen: set = set()
    class_map = {v: v for v in g.vertices}
    for c, name in zip(classes, names):
        if not c:
            raise DomainError("cannot contract an empty class")
        for v in c:
            g._check(v)
        if seen & c:
            raise DomainError(f"classes overlap in {ordered(seen & c)!r}")
        seen |= c
        if len(g.subgraph(c).components()) != 1:
            raise DomainError(f"class {ordered(c)!r} does not induce a connected subgraph")
        for v in c:
            class_map[v] = name
    outside = set(g.vertices) - seen
    for name in names:
        if name in outside:
            raise DomainError(f"contraction name {name!r} collides with an existing vertex")
    if len(set(names)) != len(names):
        raise DomainError("contraction names must be distinct")
    edges = []
    for eid, (u, v) in g.edges.items():
        a, b = class_map[u], class_map[v]
        if a != b:
            edges.append((eid, a, b))
    minor = MultiGraph(set(class_map.values()), edges)
    return ContractionMinor(
        minor=minor,
        class_map=class_map,
        super_vertices=frozenset(names),
        edge_correspondence={eid: eid for eid, _, _ in edges},
    )
