"""Edge-disjoint rays from a finite vertex set into a declared end.

The rays are grown as a chain of minimum cuts. Stage zero runs a max flow in a
window from the sources to the end's super-vertex, takes the minimum cut
closest to the end and cuts every flow path just after its (unique) cut edge.
Each later stage works in a larger window on the end's side of the previous
cut only, entering through the previous cut's edges, so every stage extends
every ray by a segment disjoint from all earlier ones. Super-vertices of other
regions are left out of every network, which keeps each ray inside the end's
component. If some stage cannot route all rays, a ConsistencyError is raised;
rays are never returned shorter than requested.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .ends import DEFAULT_R_MAX, End, Presentation, Window, as_presentation, distance_of, window
from .errors import ConsistencyError, DomainError, UnstabilizedError
from .multigraph import Cut, MultiGraph, Path, decompose_flow, max_flow, min_cut, ordered

SOURCE = "~source"
DEFAULT_STALL = 64


@dataclass(frozen=True)
class _Frontier:
    window: Window
    far: frozenset  # window nodes on the end's side of the last cut
    cut: tuple  # last cut's edge ids, one per ray
    ray_of_edge: dict  # last cut edge -> ray index


@dataclass(frozen=True)
class RaySystem:
    source_set: frozenset
    end: str
    rays: tuple  # Path prefixes, each starting at its source vertex
    claimed_size: int
    radius: int
    materialized_depth: int
    frontier: _Frontier | None = field(default=None, compare=False, repr=False)
    presentation: Presentation | None = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.rays)

    def to_json(self) -> dict:
        return {
            "end": self.end,
            "claimed_size": self.claimed_size,
            "materialized_depth": self.materialized_depth,
            "sources": [str(v) for v in ordered(self.source_set)],
            "rays": [{"vertices": [str(v) for v in r.vertices], "edges": [str(e) for e in r.edges]} for r in self.rays],
        }


def _network(w: Window, nodes, end: str) -> MultiGraph:
    x = w.end_regions[end]
    keep = {n for n in nodes if not w.is_region(n) or n == x}
    return w.graph.subgraph(keep)


def _far_nodes(prev: Window, far_prev: frozenset, nxt: Window) -> set:
    """Nodes of ``nxt`` lying on the ``far_prev`` side, tracked through the larger window."""
    r = prev.radius
    inner = {n for n in nxt.graph.vertices if not nxt.is_region(n) and nxt.dist[n] <= r}
    out = {n for n in inner if n in far_prev}
    rest = nxt.graph.subgraph(set(nxt.graph.vertices) - inner)
    for comp in rest.components():
        plain = [n for n in comp if not nxt.is_region(n)]
        if not plain:
            raise ConsistencyError("window component without a plain vertex next to the ball")
        x = min(plain, key=lambda n: (nxt.dist[n], ordered([n])))
        if prev.node_of_vertex(x) in far_prev:
            out.update(comp)
    return out


def _truncate(w: Window, paths: list[Path], cut: frozenset) -> list[tuple[tuple, tuple, object]]:
    """Cut each flow path after its cut edge; vertices are mapped to real vertices."""
    out = []
    for p in paths:
        hits = [i for i, e in enumerate(p.edges) if e in cut]
        if len(hits) != 1:
            raise ConsistencyError("flow path crosses the minimum cut more than once")
        i = hits[0]
        a, b = w.original[p.edges[i]]
        far = a if w.node_of_vertex(a) == p.vertices[i + 1] else b
        vs = tuple(p.vertices[: i + 1]) + (far,)
        out.append((vs, tuple(p.edges[: i + 1]), p.edges[i]))
    return out


def _stage(g: Presentation, end: str, fr: _Frontier, k: int, stall: int) -> tuple[_Frontier, dict]:
    """Advance the frontier once; returns the new frontier and edge -> segment."""
    R = fr.window.radius + 1
    for _ in range(stall):
        w = window(g, R)
        far = _far_nodes(fr.window, fr.far, w)
        x = w.end_regions[end]
        if x not in far:
            raise ConsistencyError(f"end {end!r} left the side of its previous cut")
        net = _network(w, far, end)
        edges = list(net.edge_list())
        for e in fr.cut:
            a, b = w.original[e]
            inside = [w.node_of_vertex(v) for v in (a, b) if w.node_of_vertex(v) in net]
            if len(inside) != 1:
                raise ConsistencyError(f"cut edge {e!r} does not enter the far side exactly once")
            edges.append((e, SOURCE, inside[0]))
        net = MultiGraph(list(net.vertices) + [SOURCE], edges)
        res = max_flow(net, {SOURCE}, {x})
        if res.value != k:
            raise ConsistencyError(f"only {res.value} of {k} rays continue at radius {R}")
        cut, _ = min_cut(net, {x}, {SOURCE})
        if cut.edges == frozenset(fr.cut):
            R += 1
            continue
        segs = _truncate(w, decompose_flow(net, res, {SOURCE}, {x}), cut.edges)
        by_first = {es[0]: (vs, es, last) for vs, es, last in segs}
        nf = _Frontier(w, frozenset(cut.side_a), tuple(ordered(cut.edges)), {})
        return nf, by_first
    raise ConsistencyError(f"ray construction for end {end!r} made no progress up to radius {R}")


def _grow(g, rs_rays: list, fr: _Frontier, end: str, depth: int, stall: int):
    k = len(rs_rays)
    while min((len(vs) for vs, _ in rs_rays), default=depth) < depth:
        nf, segs = _stage(g, end, fr, k, stall)
        new_map = {}
        for e, idx in fr.ray_of_edge.items():
            if e not in segs:
                raise ConsistencyError(f"no continuation through cut edge {e!r}")
            vs, es, last = segs[e]
            ovs, oes = rs_rays[idx]
            rs_rays[idx] = (ovs + vs[2:], oes + es[1:])
            new_map[last] = idx
        fr = replace(nf, ray_of_edge=new_map)
    return rs_rays, fr


def _finish(g, s, end, rays, k, radius, fr) -> RaySystem:
    paths = tuple(Path(vs, es) for vs, es in rays)
    depth = min((len(p.vertices) for p in paths), default=0)
    return RaySystem(frozenset(s), end, paths, k, radius, depth, fr, g)


def stabilized_ray_radius(g: Presentation, s, end: str, r_max: int = DEFAULT_R_MAX) -> tuple[int, int, list]:
    """First radius R where the source-to-end window min cut agrees with R+1."""
    start = max(distance_of(g, v) for v in s)
    seq, prev = [], None
    for R in range(start, r_max + 1):
        w = window(g, R)
        net = _network(w, w.graph.vertices, end)
        val = max_flow(net, set(s), {w.end_regions[end]}).value
        seq.append((R, val))
        if prev is not None and prev[1] == val:
            return prev[0], val, seq
        prev = (R, val)
    raise UnstabilizedError(f"source-to-end cut for {end!r} did not stabilize by radius {r_max}", values=seq)


def max_ray_system(g, s, end, depth: int, r_max: int = DEFAULT_R_MAX, stall: int = DEFAULT_STALL) -> RaySystem:
    """A maximum set of edge-disjoint rays, each with exactly its first vertex in ``s``.

    Every ray is materialized to at least ``depth`` vertices.
    """
    g = as_presentation(g)
    name = end.name if isinstance(end, End) else end
    if name not in g.ends:
        raise DomainError(f"unknown end {name!r}")
    s = frozenset(s)
    if not s:
        raise DomainError("source set must be nonempty")
    R, k, _ = stabilized_ray_radius(g, s, name, r_max)
    w = window(g, R)
    x = w.end_regions[name]
    net = _network(w, w.graph.vertices, name)
    res = max_flow(net, s, {x})
    cut, _ = min_cut(net, {x}, s)
    segs = _truncate(w, decompose_flow(net, res, s, {x}), cut.edges)
    rays = [(vs, es) for vs, es, _ in segs]
    fr = _Frontier(w, frozenset(cut.side_a), tuple(ordered(cut.edges)), {last: i for i, (_, _, last) in enumerate(segs)})
    rays, fr = _grow(g, rays, fr, name, depth, stall)
    return _finish(g, s, name, rays, k, R, fr)


def rays_through_cut(g, w: Window, cut: Cut, far_side, end: str, depth: int, stall: int = DEFAULT_STALL) -> RaySystem:
    """Rays that start with the edges of ``cut`` and then stay on its far side.

    ``far_side`` is the set of window nodes on the end's side; the sources are
    the near endpoints of the cut edges.
    """
    g = as_presentation(g)
    far_side = frozenset(far_side)
    rays, mapping, srcs = [], {}, set()
    for i, e in enumerate(ordered(cut.edges)):
        a, b = w.original[e]
        na, nb = w.node_of_vertex(a), w.node_of_vertex(b)
        if (na in far_side) == (nb in far_side):
            raise ConsistencyError(f"edge {e!r} does not cross the given cut")
        near, far = (a, b) if nb in far_side else (b, a)
        rays.append(((near, far), (e,)))
        mapping[e] = i
        srcs.add(near)
    fr = _Frontier(w, far_side, tuple(ordered(cut.edges)), mapping)
    rays, fr = _grow(g, rays, fr, end, max(depth, 2), stall)
    return _finish(g, srcs, end, rays, len(rays), w.radius, fr)


def extend(rs: RaySystem, depth: int, stall: int = DEFAULT_STALL) -> RaySystem:
    """Deepen a ray system; existing prefixes and the size are unchanged."""
    if rs.frontier is None or rs.presentation is None:
        raise DomainError("ray system carries no frontier to extend from")
    if depth <= rs.materialized_depth:
        return rs
    rays = [(p.vertices, p.edges) for p in rs.rays]
    rays, fr = _grow(rs.presentation, rays, rs.frontier, rs.end, depth, stall)
    return _finish(rs.presentation, rs.source_set, rs.end, rays, rs.claimed_size, rs.radius, fr)


def start_edge_index(rs: RaySystem, f: Cut) -> dict:
    """Cut edge -> the unique ray whose first edge it is."""
    if len(rs.rays) != f.size:
        raise ConsistencyError(f"{len(rs.rays)} rays cannot match a cut of size {f.size}")
    out = {}
    for ray in rs.rays:
        if not ray.edges:
            raise ConsistencyError("empty ray")
        e = ray.edges[0]
        if e not in f.edges or e in out:
            raise ConsistencyError(f"ray starting with {e!r} does not match the cut")
        out[e] = ray
    return out
