"""Locally finite infinite graphs with declared ends, seen through finite windows.

A presentation is a pure adjacency oracle plus a root and one ray per declared
end. ``window(g, r)`` keeps the ball of radius ``r`` around the root and
contracts every infinite component of the rest to one super-vertex, keeping
parallel edges; an end lives in the super-vertex that holds the tail of its
ray. Every window edge is an edge of the infinite graph, so a cut of the
window is a finite cut of the whole graph.

Whether a component beyond the ball is infinite is decided by exploring it up
to ``probe`` further layers; periodic presentations use twice their period.
Checks whose answer needs an unbounded radius report ``unknown`` rather than
guess.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import DomainError, PresentationError, RefusalError, UnstabilizedError
from .multigraph import Cut, MultiGraph, max_flow, min_cut, ordered, sort_key
from .periodic import PeriodicGraph

DEFAULT_R_MAX = 32
DEFAULT_ENUMERATION_LIMIT = 18


@dataclass(frozen=True, order=True)
class End:
    name: str

    def __str__(self) -> str:
        return f"end:{self.name}"


def terminal_label(t) -> str:
    return str(t)


def terminal_key(t) -> tuple:
    if isinstance(t, End):
        return (1, sort_key(t.name))
    return (0, sort_key(t))


@dataclass(frozen=True, eq=False)
class Presentation:
    name: str
    root: object
    adjacency: Callable
    ends: Mapping[str, Callable[[int], object]] = field(default_factory=dict)
    period: int | None = None
    finite_graph: MultiGraph | None = None
    description: dict | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def finite(self) -> bool:
        return self.finite_graph is not None

    def neighbors(self, v) -> tuple:
        nb = self._cache.setdefault("nb", {})
        if v not in nb:
            nb[v] = tuple(sorted(self.adjacency(v), key=lambda p: sort_key(p[0])))
        return nb[v]

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    @classmethod
    def from_graph(cls, g: MultiGraph, root=None, name: str = "finite") -> "Presentation":
        if not len(g):
            raise DomainError("cannot present an empty graph")
        root = g.vertices[0] if root is None else root
        if root not in g:
            raise DomainError(f"root {root!r} is not a vertex")
        return cls(name=name, root=root, adjacency=g.incident, finite_graph=g)

    @classmethod
    def from_periodic(cls, desc: dict) -> "Presentation":
        pg = PeriodicGraph(desc)
        return cls(
            name=pg.name,
            root=pg.root,
            adjacency=pg.neighbors,
            ends={e: pg.ray(e) for e in pg.ends},
            period=pg.period,
            description=pg.desc,
        )


def as_presentation(g) -> Presentation:
    if isinstance(g, Presentation):
        return g
    if isinstance(g, MultiGraph):
        return Presentation.from_graph(g)
    raise DomainError(f"expected a graph or presentation, got {type(g).__name__}")


@dataclass(frozen=True)
class TerminalSpec:
    """Finitely many vertex terminals, a set of declared ends, and optionally a
    rule naming infinitely many further vertex terminals."""

    vertices: frozenset = frozenset()
    ends: tuple = ()
    rule: Callable | None = None
    rule_name: str = ""
    removed: frozenset = frozenset()

    def is_vertex_terminal(self, v) -> bool:
        if v in self.vertices:
            return True
        return self.rule is not None and v not in self.removed and bool(self.rule(v))

    @property
    def finite(self) -> bool:
        return self.rule is None

    def items(self) -> list:
        return ordered(self.vertices) + [End(e) for e in self.ends]

    def contains(self, t) -> bool:
        if isinstance(t, End):
            return t.name in self.ends
        return self.is_vertex_terminal(t)

    def without(self, t) -> "TerminalSpec":
        if isinstance(t, End):
            return TerminalSpec(self.vertices, tuple(e for e in self.ends if e != t.name), self.rule, self.rule_name, self.removed)
        return TerminalSpec(self.vertices - {t}, self.ends, self.rule, self.rule_name, self.removed | {t})

    def describe(self) -> dict:
        out = {"vertices": [terminal_label(v) for v in ordered(self.vertices)], "ends": list(self.ends)}
        if self.rule is not None:
            out["rule"] = self.rule_name or "custom"
        return out

    @classmethod
    def of(cls, items: Iterable) -> "TerminalSpec":
        vs, es = [], []
        for t in items:
            (es if isinstance(t, End) else vs).append(t.name if isinstance(t, End) else t)
        return cls(frozenset(vs), tuple(es))


def as_spec(t) -> TerminalSpec:
    if isinstance(t, TerminalSpec):
        return t
    if isinstance(t, End):
        return TerminalSpec.of([t])
    if isinstance(t, str):
        raise DomainError(f"terminal set given as the string {t!r}; pass a collection or resolve it first")
    return TerminalSpec.of(t)


# -- distances and windows --------------------------------------------------------

def distances(g: Presentation, radius: int) -> dict:
    """Vertex -> distance from the root, for every vertex within ``radius``."""
    st = g._cache.setdefault("bfs", {"dist": {g.root: 0}, "frontier": [g.root], "depth": 0})
    dist = st["dist"]
    while st["depth"] < radius and st["frontier"]:
        nxt = []
        for v in st["frontier"]:
            for _, w in g.neighbors(v):
                if w not in dist:
                    dist[w] = st["depth"] + 1
                    nxt.append(w)
        st["frontier"] = nxt
        st["depth"] += 1
    return {v: d for v, d in dist.items() if d <= radius}


def distance_of(g: Presentation, v, limit: int = 10_000):
    if g.finite:
        d = distances(g, len(g.finite_graph)).get(v)
        return d
    r = 8
    while r <= limit:
        d = distances(g, r).get(v)
        if d is not None:
            return d
        r *= 2
    raise DomainError(f"vertex {v!r} not found within distance {limit} of the root")


def default_probe(g: Presentation) -> int:
    return max(4, 2 * (g.period or 1))


@dataclass(frozen=True)
class Window:
    radius: int
    probe: int
    graph: MultiGraph
    ball: frozenset
    end_regions: Mapping
    nonend_regions: tuple
    members: Mapping
    region_of: Mapping
    dist: Mapping
    original: Mapping  # window edge id -> endpoints in the presented graph

    @property
    def core(self) -> MultiGraph:
        return self.graph.subgraph(self.ball)

    @property
    def super_vertices(self) -> frozenset:
        return frozenset(self.members)

    @property
    def lift(self) -> dict:
        return {e: e for e in self.graph.edges}

    def node_of_vertex(self, v):
        if v in self.region_of:
            return self.region_of[v]
        if v in self.graph and v not in self.members:
            return v
        return None

    def node_of(self, t):
        if isinstance(t, End):
            return self.end_regions[t.name]
        return self.node_of_vertex(t)

    def is_region(self, node) -> bool:
        return node in self.members


def _components(vertices: set, g: Presentation) -> list[list]:
    seen: set = set()
    comps = []
    for s in ordered(vertices):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for _, y in g.neighbors(x):
                if y in vertices and y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        comps.append(comp)
    return comps


def _ray_tail(g: Presentation, name: str, r: int, R: int, probe: int) -> list:
    """Vertices of the end's ray after its last visit to the ball, up to depth R."""
    ray = g.ends[name]
    dist = distances(g, R + probe)
    last_in, i, prev, seen = -1, 0, None, set()
    verts = []
    limit = 50 * (R + probe + 1) + 1000
    stop = None
    while True:
        v = ray(i)
        if v in seen:
            raise PresentationError(f"ray of end {name!r} repeats vertex {v!r}")
        seen.add(v)
        if prev is not None and not any(w == v for _, w in g.neighbors(prev)):
            raise PresentationError(f"ray of end {name!r}: {prev!r} and {v!r} are not adjacent")
        d = dist.get(v)
        verts.append(v)
        if d is not None and d <= r:
            if stop is not None:
                raise PresentationError(f"ray of end {name!r} returns to the ball of radius {r} after reaching depth {R}")
            last_in = i
        if stop is None and (d is None or d >= R):
            stop = i
        if stop is not None and (d is None or i >= stop + probe):
            break
        prev = v
        i += 1
        if i > limit:
            raise PresentationError(f"ray of end {name!r} stays within distance {R} for {limit} steps")
    return verts[last_in + 1: stop + 1]


def window(g, r: int, probe: int | None = None, exclude: Callable | None = None) -> Window:
    """Finite truncation at radius ``r``; ``exclude`` deletes vertices outright."""
    g = as_presentation(g)
    if r < 0:
        raise DomainError("radius must be nonnegative")
    probe = default_probe(g) if probe is None else probe
    key = (r, probe)
    wc = g._cache.setdefault("windows", {})
    if exclude is None and key in wc:
        return wc[key]
    R = r + probe
    gone = (lambda v: False) if exclude is None else exclude

    if g.finite:
        dist = distances(g, len(g.finite_graph))
        keep = {v for v in g.finite_graph.vertices if not gone(v)}
        ball = {v for v in keep if dist.get(v, r + 1) <= r}
        regions: list = []
    else:
        dist = distances(g, R)
        keep = {v for v in dist if not gone(v)}
        ball = {v for v in keep if dist[v] <= r}
        outside = keep - ball
        regions = []
        for comp in _components(outside, g):
            if any(dist[v] >= R for v in comp):
                regions.append(comp)
            # finite pockets beyond the ball stay as ordinary vertices

    comp_index = {}
    for k, comp in enumerate(regions):
        for v in comp:
            comp_index[v] = k
    owners: dict = {k: [] for k in range(len(regions))}
    for name in g.ends:
        tail = _ray_tail(g, name, r, R, probe)
        for v in tail:
            if gone(v):
                raise PresentationError(f"ray of end {name!r} meets excluded vertex {v!r} beyond radius {r}")
        k = comp_index.get(tail[-1])
        if k is None or any(comp_index.get(v) != k for v in tail):
            raise PresentationError(f"ray of end {name!r} escapes its component at radius {r}")
        owners[k].append(name)

    names, members, region_of = {}, {}, {}
    end_regions, nonend = {}, []
    u = 0
    for k, comp in enumerate(regions):
        if owners[k]:
            label = "~" + "+".join(owners[k])
            for e in owners[k]:
                end_regions[e] = label
        else:
            label = f"~u{u}"
            u += 1
            nonend.append(label)
        names[k] = label
        members[label] = frozenset(comp)
        for v in comp:
            region_of[v] = label

    def node(v):
        return region_of.get(v, v)

    edges: dict = {}
    for v in ordered(keep):
        for eid, w in g.neighbors(v):
            if w not in keep:
                continue
            if eid in edges:
                if set(edges[eid][:2]) != {v, w}:
                    raise PresentationError(f"edge id {eid!r} joins different vertex pairs")
                continue
            if not any(e == eid and x == v for e, x in g.neighbors(w)):
                raise PresentationError(f"adjacency is not symmetric at edge {eid!r}")
            edges[eid] = (v, w)
    plain = [v for v in keep if v not in region_of]
    mg = MultiGraph(
        plain + list(members),
        [(eid, node(a), node(b)) for eid, (a, b) in edges.items() if node(a) != node(b)],
    )
    w = Window(
        radius=r,
        probe=probe,
        graph=mg,
        ball=frozenset(ball),
        end_regions=end_regions,
        nonend_regions=tuple(nonend),
        members=members,
        region_of=region_of,
        dist={v: dist[v] for v in keep if v in dist},
        original={eid: edges[eid] for eid in mg.edges},
    )
    if exclude is None:
        wc[key] = w
    return w


def _probe_for(g: Presentation, r: int, spec: TerminalSpec) -> int:
    probe = default_probe(g)
    if g.finite:
        return probe
    for v in spec.vertices:
        d = distance_of(g, v)
        probe = max(probe, d - r + 1)
    return probe


def window_for(g, r: int, spec: TerminalSpec) -> Window:
    """Window whose explored part is deep enough to locate every finite vertex terminal."""
    g = as_presentation(g)
    for e in spec.ends:
        if e not in g.ends:
            raise DomainError(f"unknown end {e!r}")
    return window(g, r, probe=_probe_for(g, r, spec))


def terminal_nodes(w: Window, spec: TerminalSpec) -> set:
    """Window nodes that carry some terminal: terminal vertices, terminal end
    regions, and regions containing terminal vertices."""
    out = set()
    for v in spec.vertices:
        n = w.node_of_vertex(v)
        if n is None:
            raise DomainError(f"terminal {v!r} lies outside the explored window")
        out.add(n)
    for e in spec.ends:
        out.add(w.end_regions[e])
    if spec.rule is not None:
        for n in w.graph.vertices:
            if n not in w.members and spec.is_vertex_terminal(n):
                out.add(n)
    for label, mem in w.members.items():
        if label not in out and any(spec.is_vertex_terminal(v) for v in mem):
            out.add(label)
    return out


# -- verdicts ---------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    status: str
    witness: object = None
    radius: int | None = None
    evidence: tuple = ()
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.status in ("true", "discrete", "even")


def check_discrete(g, t: TerminalSpec, r_max: int = DEFAULT_R_MAX) -> dict:
    """Per terminal: can it be cut off from all other terminals by a finite cut?"""
    g = as_presentation(g)
    spec = as_spec(t)
    out = {}
    for v in ordered(spec.vertices):
        out[v] = Verdict("discrete", detail="vertex terminal")
    for e in spec.ends:
        evidence = []
        only_vertex_witnesses = True
        found = None
        for r in range(r_max + 1):
            w = window_for(g, r, spec)
            x = w.end_regions[e]
            sharing = [o for o in spec.ends if o != e and w.end_regions[o] == x]
            inside = [v for v in ordered(w.members[x]) if spec.is_vertex_terminal(v)]
            if not sharing and not inside:
                edges = frozenset(eid for eid, (a, b) in w.graph.edges.items() if x in (a, b))
                found = Verdict("discrete", witness=Cut.from_side(w.graph, {x}), radius=r,
                                detail=f"region of {e!r} holds no other terminal; cut of size {len(edges)}")
                break
            if inside:
                evidence.append((r, inside[0]))
            else:
                only_vertex_witnesses = False
                evidence.append((r, End(sharing[0])))
        if found is not None:
            out[End(e)] = found
        elif only_vertex_witnesses:
            out[End(e)] = Verdict("not-discrete", radius=r_max, evidence=tuple(evidence),
                                  detail="vertex terminals accumulate at this end at every tested radius")
        else:
            out[End(e)] = Verdict("unknown", radius=r_max, evidence=tuple(evidence), detail="not separated by r_max")
    return out


@dataclass(frozen=True)
class LambdaResult:
    value: int
    cut: Cut
    radius: int
    values: tuple
    window: Window


def _terminal_node(w: Window, t):
    n = w.node_of(t)
    if n is None or (not isinstance(t, End) and w.is_region(n)):
        return None
    return n


def lambda_end(g, t, rest, r_max: int = DEFAULT_R_MAX, r_min: int = 0) -> LambdaResult:
    """Least size of a finite cut between ``t`` and ``rest`` (vertices or ends).

    Window values never increase with the radius; the value is accepted once
    two consecutive radii agree, and the certificate is the smaller window's cut.
    """
    g = as_presentation(g)
    rest = as_spec(rest)
    if rest.contains(t):
        raise DomainError(f"{t} belongs to the rest set")
    both = TerminalSpec(rest.vertices | ({t} if not isinstance(t, End) else frozenset()),
                        rest.ends + ((t.name,) if isinstance(t, End) else ()), rest.rule, rest.rule_name, rest.removed)
    seq, prev = [], None
    for r in range(r_min, r_max + 1):
        w = window_for(g, r, both)
        tn = _terminal_node(w, t)
        rn = terminal_nodes(w, rest)
        if tn is None or tn in rn or not rn:
            prev = None
            continue
        cut, val = min_cut(w.graph, {tn}, rn)
        seq.append((r, val))
        if prev is not None and prev[1] == val:
            return LambdaResult(val, prev[2], prev[0], tuple(seq), prev[3])
        prev = (r, val, cut, w)
    raise UnstabilizedError(f"lambda({t}) did not stabilize by radius {r_max}", values=seq)


@dataclass(frozen=True)
class ParityResult:
    status: str  # even | odd | unknown
    degrees: tuple  # (ball radius, max number of edge-disjoint ball-to-end rays)
    radius: int | None = None


def rays_from_ball(g, r: int, end: str, r_max: int = DEFAULT_R_MAX) -> int | None:
    """Stabilized min cut between the ball of radius ``r`` and the end, or None."""
    g = as_presentation(g)
    src = {v for v, d in distances(g, r).items()}
    prev = None
    for R in range(r + 1, r_max + 1):
        w = window(g, R)
        val = max_flow(w.graph, src, {w.end_regions[end]}).value
        if prev == val:
            return val
        prev = val
    return None


def end_degree_parity(g, end, r_max: int = DEFAULT_R_MAX) -> ParityResult:
    g = as_presentation(g)
    name = end.name if isinstance(end, End) else end
    if name not in g.ends:
        raise DomainError(f"unknown end {name!r}")
    seq = []
    for r in range(r_max):
        d = rays_from_ball(g, r, name, r_max)
        if d is None:
            break
        seq.append((r, d))
        if len(seq) >= 2 and seq[-1][1] % 2 == seq[-2][1] % 2:
            return ParityResult("even" if d % 2 == 0 else "odd", tuple(seq), r)
    return ParityResult("unknown", tuple(seq))


def is_inner_eulerian_with_ends(g, t, r_max: int = DEFAULT_R_MAX) -> Verdict:
    """Even degree at every non-terminal vertex (within ``r_max``) and end."""
    g = as_presentation(g)
    spec = as_spec(t)
    dist = distances(g, r_max) if not g.finite else {v: 0 for v in g.finite_graph.vertices}
    for v in sorted(dist, key=lambda x: (dist[x], sort_key(x))):
        if not spec.is_vertex_terminal(v) and g.degree(v) % 2:
            return Verdict("false", witness=v, radius=r_max, detail=f"vertex {v!r} has odd degree {g.degree(v)}")
    unknown = []
    for e in g.ends:
        if e in spec.ends:
            continue
        p = end_degree_parity(g, e, r_max)
        if p.status == "odd":
            return Verdict("false", witness=End(e), radius=r_max, evidence=p.degrees, detail=f"end {e!r} has odd degree")
        if p.status == "unknown":
            unknown.append(End(e))
    if not g.finite and window(g, r_max).nonend_regions:
        return Verdict("unknown", radius=r_max, detail="window has infinite components without a declared end")
    if unknown:
        return Verdict("unknown", radius=r_max, evidence=tuple(unknown), detail="end parity not certified")
    return Verdict("true", radius=r_max)


def check_cut_parity_premise(g, t, r: int, limit: int = DEFAULT_ENUMERATION_LIMIT, via_inner_eulerian: bool = False,
                             r_max: int = DEFAULT_R_MAX) -> Verdict:
    """Search the window for an odd cut with every terminal on one side.

    A radius-``r`` check only. With ``via_inner_eulerian`` the sufficient
    degree condition is tested instead of enumerating cuts.
    """
    if isinstance(g, MultiGraph) and not isinstance(t, TerminalSpec):
        t = TerminalSpec.of(t)
    g = as_presentation(g)
    spec = as_spec(t)
    if via_inner_eulerian:
        v = is_inner_eulerian_with_ends(g, spec, max(r, r_max))
        return Verdict(v.status, witness=v.witness, radius=v.radius, detail="via inner-Eulerian: " + v.detail)
    w = window_for(g, r, spec)
    nodes = list(w.graph.vertices)
    if len(nodes) > limit:
        raise RefusalError(f"window has {len(nodes)} vertices; cut enumeration is limited to {limit}")
    term = terminal_nodes(w, spec)
    free = [n for n in nodes if n not in term]
    bit = {n: i for i, n in enumerate(free)}
    masks = np.arange(1, 1 << len(free), dtype=np.int64)
    if not term:
        masks = masks[masks != (1 << len(free)) - 1]
    size = np.zeros(len(masks), dtype=np.int64)
    for a, b in w.graph.edges.values():
        ia, ib = bit.get(a), bit.get(b)
        if ia is None and ib is None:
            continue
        xa = (masks >> ia) & 1 if ia is not None else 0
        xb = (masks >> ib) & 1 if ib is not None else 0
        size += xa ^ xb
    odd = np.nonzero(size & 1)[0]
    if len(odd) == 0:
        return Verdict("true", radius=r, detail=f"all {len(masks)} terminal-one-sided cuts of the window are even")
    # smallest odd cut; ties go to the largest terminal-free side, then the least mask
    pops = np.array([bin(int(m)).count("1") for m in masks[odd]])
    pick = int(masks[odd[np.lexsort((masks[odd], -pops, size[odd]))[0]]])
    side = {n for n in free if pick >> bit[n] & 1}
    cut = Cut.from_side(w.graph, side)
    return Verdict("false", witness=cut, radius=r, detail=f"odd cut of size {cut.size} with all terminals on one side")


@dataclass(frozen=True)
class HandshakeResult:
    status: str  # even | odd | unknown
    odd_vertices: tuple
    odd_ends: tuple
    radius: int

    @property
    def total(self) -> int:
        return len(self.odd_vertices) + len(self.odd_ends)


def handshake_check(g, r_max: int = DEFAULT_R_MAX) -> HandshakeResult:
    """Count odd vertices and odd ends; the total must be even when finite."""
    g = as_presentation(g)
    if g.finite:
        odd = tuple(v for v in g.finite_graph.vertices if g.degree(v) % 2)
        return HandshakeResult("even" if len(odd) % 2 == 0 else "odd", odd, (), r_max)
    dist = distances(g, r_max)
    odd = tuple(sorted((v for v in dist if g.degree(v) % 2), key=lambda x: (dist[x], sort_key(x))))
    span = 2 * (g.period or 0)
    tail_odd = [v for v in odd if dist[v] > r_max - span]
    odd_ends, status = [], "even"
    if not g.period or tail_odd:
        status = "unknown"
    for e in g.ends:
        p = end_degree_parity(g, e, r_max)
        if p.status == "odd":
            odd_ends.append(End(e))
        elif p.status == "unknown":
            status = "unknown"
    if window(g, r_max).nonend_regions:
        status = "unknown"
    if status != "unknown":
        status = "even" if (len(odd) + len(odd_ends)) % 2 == 0 else "odd"
    return HandshakeResult(status, odd, tuple(odd_ends), r_max)
