"""Edge-disjoint T-arcs in infinite graphs: paths, rays and double rays.

Pipeline, all inside one window:

1. For the end terminals in declared order, find a smallest cut between the
   end and the remaining terminals of the current minor, choosing the one
   closest to the end; its end side is the component ``C_n``. Earlier
   components are contracted to vertices ``~v0, ~v1, ...`` before each search.
2. Contract every ``C_n`` at once and pack T-paths in the finite result, with
   the contraction vertices standing in for the end terminals.
3. Grow, for each ``n``, rays that start with the edges of ``F_n`` and stay
   inside ``C_n``.
4. Turn each path into an arc: an edge at a contraction vertex becomes the ray
   starting in that edge, and a single edge between two contraction vertices
   becomes a double ray.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .ends import (
    DEFAULT_ENUMERATION_LIMIT,
    DEFAULT_R_MAX,
    End,
    TerminalSpec,
    Verdict,
    Window,
    as_presentation,
    as_spec,
    check_cut_parity_premise,
    check_discrete,
    distance_of,
    distances,
    is_inner_eulerian_with_ends,
    lambda_end,
    terminal_key,
    terminal_label,
    terminal_nodes,
    window,
    window_for,
)
from .errors import ConsistencyError, DomainError, PreconditionError
from .multigraph import ContractionMinor, Cut, MultiGraph, contract, max_flow, min_cut, ordered
from .packing import PackingCertificate, PathSystem, Violation, brute_force_pack, pack_tpaths
from .rays import rays_through_cut, start_edge_index

DEFAULT_DEPTH = 20


@dataclass(frozen=True)
class Arc:
    kind: str  # path | ray | double-ray
    vertices: tuple
    edges: tuple
    endpoints: tuple  # two terminals; a vertex or an End each

    @property
    def materialized_depth(self) -> int:
        return len(self.vertices)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "endpoints": [terminal_label(x) for x in self.endpoints],
            "vertices": [str(v) for v in self.vertices],
            "edges": [str(e) for e in self.edges],
            "materialized_depth": self.materialized_depth,
        }


@dataclass(frozen=True)
class ArcSystem:
    arcs: tuple
    per_terminal_counts: Mapping

    def __len__(self) -> int:
        return len(self.arcs)

    def to_json(self) -> dict:
        return {
            "arcs": [a.to_json() for a in self.arcs],
            "counts": {terminal_label(t): c for t, c in self.per_terminal_counts.items()},
        }


@dataclass(frozen=True)
class PipelineState:
    end_enumeration: tuple
    cuts: tuple  # F_n as cuts of the window
    components: tuple  # C_n as sets of window nodes
    stage_minors: tuple  # G_n
    stage_terminals: tuple  # T_n as nodes of G_n
    final_minor: ContractionMinor  # G_kappa
    terminal_image: Mapping  # terminal -> node of G_kappa
    ray_systems: Mapping  # n -> RaySystem
    finite_packing: PathSystem
    certificate: PackingCertificate
    lambdas: Mapping  # terminal -> int
    radius: int
    window: Window = field(repr=False)
    premise: Verdict | None = None

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "ends": list(self.end_enumeration),
            "cuts": [[str(e) for e in c.sorted_edges()] for c in self.cuts],
            "components": [[str(v) for v in ordered(c)] for c in self.components],
            "terminal_map": {terminal_label(t): str(n) for t, n in self.terminal_image.items()},
            "premise": None if self.premise is None else {"status": self.premise.status, "detail": self.premise.detail},
            "rays": {self.end_enumeration[n]: rs.to_json() for n, rs in self.ray_systems.items()},
        }


def contraction_name(n: int) -> str:
    return f"~v{n}"


def _finite_spec(spec: TerminalSpec):
    if not spec.finite:
        raise DomainError("arc assembly needs a finite terminal set; infinite terminal rules are only for checks and mu")


def _require_discrete(g, spec: TerminalSpec, r_max: int):
    if not spec.ends:
        return
    verdicts = check_discrete(g, spec, r_max)
    for t, v in verdicts.items():
        if isinstance(t, End) and v.status != "discrete":
            raise PreconditionError(f"terminal {t} is {v.status} by radius {r_max}", witness=terminal_label(t), kind="discreteness")


def _separate(w: Window, spec: TerminalSpec):
    term = terminal_nodes(w, spec)
    vertex_nodes = {w.node_of_vertex(v) for v in spec.vertices}
    cuts, comps, minors, tsets = [], [], [], []
    for n, name in enumerate(spec.ends):
        x = w.end_regions[name]
        cm = contract(w.graph, comps, [contraction_name(i) for i in range(len(comps))])
        if cm.class_map.get(x, x) != x:
            raise ConsistencyError(f"end {name!r} lies inside an earlier component")
        t_n = {cm.class_map[v] for v in term} | set(cm.super_vertices)
        rest = t_n - {x}
        if x in (term - {x}) or any(w.end_regions[o] == x for o in spec.ends if o != name):
            raise PreconditionError(f"end {name!r} shares its region with another terminal at radius {w.radius}",
                                    witness=terminal_label(End(name)), kind="discreteness")
        if not rest:
            raise DomainError("at least two terminals are needed")
        cut, _ = min_cut(cm.minor, {x}, rest)
        comp = frozenset(cut.side_a)
        if comp & vertex_nodes:
            raise ConsistencyError(f"a vertex terminal fell inside the component of {name!r}")
        cuts.append(Cut.from_side(w.graph, comp))
        comps.append(comp)
        minors.append(cm)
        tsets.append(frozenset(t_n))
    return cuts, comps, minors, tsets


def compute_separating_cuts(g, t, r: int, r_max: int = DEFAULT_R_MAX):
    """Cuts F_n with their components C_n, plus the stage minors G_n."""
    g = as_presentation(g)
    spec = as_spec(t)
    _require_discrete(g, spec, max(r, r_max))
    _finite_spec(spec)
    w = window_for(g, r, spec)
    cuts, comps, minors, _ = _separate(w, spec)
    return list(zip(cuts, comps)), minors


def build_final_minor(w: Window, spec: TerminalSpec, comps) -> tuple[ContractionMinor, dict]:
    """Contract all components at once; returns G_kappa and terminal -> node."""
    cm = contract(w.graph, list(comps), [contraction_name(i) for i in range(len(comps))])
    image = {}
    for v in ordered(spec.vertices):
        node = cm.class_map[w.node_of_vertex(v)]
        if node in cm.super_vertices:
            raise ConsistencyError(f"vertex terminal {v!r} lies inside a contracted component")
        image[v] = node
    for n, name in enumerate(spec.ends):
        image[End(name)] = contraction_name(n)
    return cm, image


def lambda_values(g, spec: TerminalSpec, r_max: int = DEFAULT_R_MAX) -> dict:
    """Terminal -> LambdaResult for every terminal of a finite spec."""
    items = spec.items()
    if len(items) < 2:
        raise DomainError("lambda needs at least two terminals")
    return {t: lambda_end(g, t, spec.without(t), r_max) for t in items}


def _premise(g, spec: TerminalSpec, r: int, mode: str, limit: int, r_max: int) -> Verdict:
    if mode not in ("auto", "cuts", "inner-eulerian"):
        raise DomainError(f"unknown premise mode {mode!r}")
    if mode == "auto":
        size = len(window_for(g, r, spec).graph)
        mode = "cuts" if size <= limit else "inner-eulerian"
    if mode == "cuts":
        return check_cut_parity_premise(g, spec, r, limit=limit)
    v = is_inner_eulerian_with_ends(g, spec, max(r, r_max))
    return Verdict(v.status, v.witness, v.radius, v.evidence, "inner-Eulerian with ends: " + v.detail)


def _route_inside(g, members: frozenset, p, q, used: set):
    """Shortest walk from p to q inside a region, avoiding used edges."""
    parent = {p: None}
    queue = deque([p])
    while queue:
        a = queue.popleft()
        if a == q:
            break
        for eid, b in g.neighbors(a):
            if b in members and b not in parent and eid not in used:
                parent[b] = (eid, a)
                queue.append(b)
    if q not in parent:
        raise ConsistencyError("cannot route a path through a contracted region inside the window")
    vs, es = [q], []
    while parent[vs[-1]] is not None:
        eid, a = parent[vs[-1]]
        es.append(eid)
        vs.append(a)
    return vs[::-1], es[::-1]


def _materialize(g, w: Window, cm: ContractionMinor, vs: tuple, es: tuple, used: set):
    """Replace region nodes inside a minor path by real vertices."""
    out_v, out_e = [vs[0]], []
    for i in range(1, len(vs)):
        e = es[i - 1]
        a, b = w.original[e]
        node = vs[i]
        if i < len(vs) - 1 and w.is_region(node):
            members = w.members[node]
            entry = a if a in members else b
            ea, eb = w.original[es[i]]
            exit_ = ea if ea in members else eb
            rv, re_ = _route_inside(g, members, entry, exit_, used)
            used.update(re_)
            out_e.append(e)
            out_v.extend(rv)
            out_e.extend(re_)
        elif i < len(vs) - 1:
            out_e.append(e)
            out_v.append(node)
        else:
            out_e.append(e)
            out_v.append(node)
    return out_v, out_e


def _arc_of(path_vs, path_es, ends_of: dict, image_inv: dict, index: dict) -> Arc:
    a, b = path_vs[0], path_vs[-1]
    ta, tb = image_inv[a], image_inv[b]
    na, nb = ends_of.get(a), ends_of.get(b)
    if len(path_es) == 1:
        e = path_es[0]
        if na is not None and nb is not None:
            ra, rb = index[na][e], index[nb][e]
            return Arc("double-ray", tuple(ra.vertices[::-1]) + tuple(rb.vertices[2:]),
                       tuple(ra.edges[::-1]) + tuple(rb.edges[1:]), (ta, tb))
        if na is not None:
            ray = index[na][e]
            return Arc("ray", tuple(ray.vertices), tuple(ray.edges), (tb, ta))
        if nb is not None:
            ray = index[nb][e]
            return Arc("ray", tuple(ray.vertices), tuple(ray.edges), (ta, tb))
        return Arc("path", tuple(path_vs), tuple(path_es), (ta, tb))
    if na is not None:
        ray = index[na][path_es[0]]
        V, E = list(ray.vertices[::-1]), list(ray.edges[::-1])
    else:
        V, E = [path_vs[0], path_vs[1]], [path_es[0]]
    if V[-1] != path_vs[1]:
        raise ConsistencyError("ray does not start at the path's second vertex")
    V += list(path_vs[2:-1])
    E += list(path_es[1:-1])
    if nb is not None:
        ray = index[nb][path_es[-1]]
        if ray.vertices[0] != V[-1]:
            raise ConsistencyError("ray does not start at the path's penultimate vertex")
        V += list(ray.vertices[1:])
        E += list(ray.edges)
    else:
        V.append(path_vs[-1])
        E.append(path_es[-1])
    if na is not None and nb is not None:
        return Arc("double-ray", tuple(V), tuple(E), (ta, tb))
    if na is not None:
        return Arc("ray", tuple(V[::-1]), tuple(E[::-1]), (tb, ta))
    if nb is not None:
        return Arc("ray", tuple(V), tuple(E), (ta, tb))
    return Arc("path", tuple(V), tuple(E), (ta, tb))


def _counts(arcs, items) -> dict:
    counts = {t: 0 for t in items}
    for a in arcs:
        for x in a.endpoints:
            counts[x] = counts.get(x, 0) + 1
    return dict(sorted(counts.items(), key=lambda kv: terminal_key(kv[0])))


def assemble_arcs(g, t, r: int, depth: int = DEFAULT_DEPTH, mode: str = "auto", r_max: int = DEFAULT_R_MAX,
                  limit: int = DEFAULT_ENUMERATION_LIMIT) -> tuple[ArcSystem, PipelineState]:
    """Edge-disjoint T-arcs with exactly lambda(t) arcs at every terminal t."""
    g = as_presentation(g)
    spec = as_spec(t)
    _require_discrete(g, spec, max(r, r_max))
    _finite_spec(spec)
    items = spec.items()
    if len(items) < 2:
        lambdas, r_eff = {x: 0 for x in items}, r
    else:
        lres = lambda_values(g, spec, r_max)
        lambdas = {x: res.value for x, res in lres.items()}
        r_eff = max([r] + [res.radius for res in lres.values()])
    verdict = _premise(g, spec, r_eff, mode, limit, r_max)
    if verdict.status != "true":
        witness = verdict.witness
        if isinstance(witness, Cut):
            witness = {"edges": [str(e) for e in witness.sorted_edges()],
                       "side": [str(v) for v in ordered(witness.side_a)]}
        elif witness is not None:
            witness = terminal_label(witness)
        raise PreconditionError(f"cut-parity premise not verified ({verdict.status}): {verdict.detail}",
                                witness=witness, kind="premise")
    w = window_for(g, r_eff, spec)
    if len(items) < 2:
        cuts, comps, minors, tsets = [], [], [], []
    else:
        cuts, comps, minors, tsets = _separate(w, spec)
    for n, name in enumerate(spec.ends):
        if cuts[n].size != lambdas[End(name)]:
            raise ConsistencyError(f"cut F_{n} has size {cuts[n].size}, lambda is {lambdas[End(name)]}")
    cm, image = build_final_minor(w, spec, comps)
    t_kappa = set(image.values())
    if spec.rule is not None:
        raise DomainError("infinite terminal rules are not supported here")
    for label, mem in w.members.items():
        if label in cm.minor and any(spec.is_vertex_terminal(v) for v in mem):
            raise PreconditionError(f"region {label} contains vertex terminals", witness=label, kind="discreteness")
    paths, cert = pack_tpaths(cm.minor, t_kappa)

    systems, index = {}, {}
    for n, name in enumerate(spec.ends):
        rs = rays_through_cut(g, w, cuts[n], comps[n], name, depth)
        systems[n] = rs
        index[n] = start_edge_index(rs, cuts[n])
    ends_of = {contraction_name(n): n for n in range(len(spec.ends))}
    image_inv = {node: x for x, node in image.items()}
    used = {e for p in paths for e in p.edges}
    arcs = []
    for p in paths:
        vs, es = _materialize(g, w, cm, p.vertices, p.edges, used)
        arcs.append(_arc_of(vs, es, ends_of, image_inv, index))
    counts = _counts(arcs, items)
    for x in items:
        if counts[x] != lambdas[x]:
            raise ConsistencyError(f"terminal {terminal_label(x)} has {counts[x]} arcs, lambda is {lambdas[x]}")
    state = PipelineState(
        end_enumeration=tuple(spec.ends),
        cuts=tuple(cuts),
        components=tuple(comps),
        stage_minors=tuple(minors),
        stage_terminals=tuple(tsets),
        final_minor=cm,
        terminal_image=image,
        ray_systems=systems,
        finite_packing=paths,
        certificate=cert,
        lambdas=lambdas,
        radius=r_eff,
        window=w,
        premise=verdict,
    )
    return ArcSystem(tuple(arcs), counts), state


# -- verification -----------------------------------------------------------------

def _tail_violation(g, v, end: str, where) -> Violation | None:
    d = distance_of(g, v)
    if d < 1:
        return Violation("wrong-end", f"tail vertex {v!r} is not beyond the ball", where)
    w = window(g, d - 1)
    if w.region_of.get(v) != w.end_regions.get(end):
        return Violation("wrong-end", f"tail at {v!r} is not in the component of end {end!r}", where)
    return None


def verify_arc_system(g, t, a: ArcSystem, state: PipelineState | None = None, r: int | None = None) -> list[Violation]:
    """Every violation of the arc-system laws that is visible in the window."""
    g = as_presentation(g)
    spec = as_spec(t)
    out: list[Violation] = []
    owner: dict = {}
    for i, arc in enumerate(a.arcs):
        for e in arc.edges:
            if e in owner and owner[e] != i:
                out.append(Violation("shared-edge", f"edge {e!r} is used by arcs {owner[e]} and {i}", e))
            owner[e] = i
        for k, e in enumerate(arc.edges):
            x, y = arc.vertices[k], arc.vertices[k + 1]
            if not any(eid == e and z == y for eid, z in g.neighbors(x)):
                out.append(Violation("not-a-walk", f"arc {i}: {e!r} does not join {x!r} and {y!r}", i))
        if len(set(arc.vertices)) != len(arc.vertices) or len(set(arc.edges)) != len(arc.edges):
            out.append(Violation("not-simple", f"arc {i} repeats a vertex", i))
        p, q = arc.endpoints
        for x in (p, q):
            if not spec.contains(x):
                out.append(Violation("bad-endpoint", f"arc {i} ends in non-terminal {terminal_label(x)}", i))
        kinds = {"path": (False, False), "ray": (False, True), "double-ray": (True, True)}
        if arc.kind not in kinds:
            out.append(Violation("bad-kind", f"arc {i} has kind {arc.kind!r}", i))
            continue
        pe, qe = kinds[arc.kind]
        if isinstance(p, End) != pe or isinstance(q, End) != qe:
            out.append(Violation("bad-endpoint", f"arc {i}: endpoints do not fit kind {arc.kind}", i))
            continue
        if arc.kind == "double-ray" and p == q:
            out.append(Violation("same-end", f"double ray {i} has both tails in {terminal_label(p)}", i))
        if not pe and arc.vertices[0] != p:
            out.append(Violation("bad-endpoint", f"arc {i} does not start at {p!r}", i))
        if not qe and arc.vertices[-1] != q:
            out.append(Violation("bad-endpoint", f"arc {i} does not end at {q!r}", i))
        inner = arc.vertices[(0 if pe else 1): (len(arc.vertices) if qe else -1)]
        for v in inner:
            if spec.is_vertex_terminal(v):
                out.append(Violation("inner-terminal", f"arc {i} passes through terminal {v!r}", i))
        if pe:
            v = _tail_violation(g, arc.vertices[0], p.name, i)
            if v:
                out.append(v)
        if qe:
            v = _tail_violation(g, arc.vertices[-1], q.name, i)
            if v:
                out.append(v)
    counts = _counts(a.arcs, spec.items())
    for x, c in counts.items():
        if a.per_terminal_counts.get(x, 0) != c:
            out.append(Violation("count-mismatch", f"stated count of {terminal_label(x)} is wrong", x))
    if state is not None:
        for x, lam in state.lambdas.items():
            if a.per_terminal_counts.get(x, 0) != lam:
                out.append(Violation("wrong-lambda", f"count {a.per_terminal_counts.get(x, 0)} != lambda {lam} at {terminal_label(x)}", x))
        if 2 * len(a.arcs) != sum(state.lambdas.values()):
            out.append(Violation("count-mismatch", "number of arcs is not half the lambda sum", None))
        w = state.window if r is None or r == state.radius else window_for(g, max(r, state.radius), spec)
        nodes = {x: w.node_of(x) for x in spec.items()}
        for x, node in state.terminal_image.items():
            cut = state.certificate.per_terminal_cuts.get(node)
            if cut is None:
                out.append(Violation("missing-cut", f"no certificate cut for {terminal_label(x)}", x))
                continue
            if cut.size != state.lambdas.get(x):
                out.append(Violation("cut-size", f"certificate for {terminal_label(x)} has size {cut.size}", x))
            rest = {nodes[y] for y in spec.items() if y != x}
            if not set(cut.edges) <= set(w.graph.edges):
                out.append(Violation("cut-not-separating", f"certificate for {terminal_label(x)} leaves the window", x))
                continue
            if rest and max_flow(w.graph.without_edges(cut.edges), {nodes[x]}, rest).value:
                out.append(Violation("cut-not-separating", f"certificate for {terminal_label(x)} does not separate it", x))
    return out


# -- finite-window counts -------------------------------------------------------------

def window_arc_bruteforce(g, t, r: int, max_edges: int = 12) -> int:
    """Exact maximum number of edge-disjoint T-paths in the window at radius ``r``."""
    g = as_presentation(g)
    spec = as_spec(t)
    w = window_for(g, r, spec)
    return brute_force_pack(w.graph, terminal_nodes(w, spec), max_edges=max_edges, per_terminal=False).max_count


@dataclass(frozen=True)
class MuResult:
    value: int
    radius: int
    stabilized: bool
    values: tuple


def _ray_capacity(g, r: int, end: str, exclude, r_max: int) -> int:
    """Stabilized number of edge-disjoint ball-to-end rays avoiding excluded vertices."""
    src_all = distances(g, r)
    prev = None
    for R in range(r + 1, r_max + 1):
        w = window(g, R, exclude=exclude)
        src = {v for v in src_all if v in w.graph and not w.is_region(v)}
        val = max_flow(w.graph, src, {w.end_regions[end]}).value if src else 0
        if prev == val:
            return val
        prev = val
    return prev or 0


def _mu_at(g, t, rest: TerminalSpec, r: int, r_max: int) -> int:
    r_probe = max(r_max, r + 2)
    dist = distances(g, r_probe + 2 * (g.period or 1) + 4) if not g.finite else distances(g, len(g.finite_graph))

    def beyond(v):
        return v != t and rest.is_vertex_terminal(v) and dist.get(v, r + 1) > r

    w = window(g, r, exclude=beyond)
    if isinstance(t, End):
        source_node = None
    else:
        source_node = w.node_of_vertex(t)
        if source_node is None or w.is_region(source_node):
            raise DomainError(f"terminal {t!r} lies outside the ball of radius {r}")
    sinks_v = {v for v in w.graph.vertices if not w.is_region(v) and v != t and rest.is_vertex_terminal(v)}
    edges, extra, sinks = [], [], set()
    for eid, (a, b) in w.graph.edges.items():
        if a in sinks_v and b in sinks_v:
            continue  # joins two sinks; no arc can use it
        ends = []
        for x in (a, b):
            if x in sinks_v:
                leaf = ("~leaf", eid)
                sinks.add(leaf)
                ends.append(leaf)
            else:
                ends.append(x)
        edges.append((eid, ends[0], ends[1]))
    for name in rest.ends:
        cap = _ray_capacity(g, r, name, beyond, r_probe)
        zeta = ("~zeta", name)
        sinks.add(zeta)
        extra += [(("~cap", name, i), w.end_regions[name], zeta) for i in range(cap)]
    if isinstance(t, End):
        cap = _ray_capacity(g, r, t.name, beyond, r_probe)
        source_node = ("~psi", t.name)
        extra += [(("~cap", t.name, i), source_node, w.end_regions[t.name]) for i in range(cap)]
        if cap == 0:
            return 0
    if not sinks:
        return 0
    net = MultiGraph([x for x in w.graph.vertices if x not in sinks_v] + [source_node] + list(sinks), edges + extra)
    return max_flow(net, {source_node}, sinks).value


def mu_estimate(g, t, rest, r: int, r_max: int = DEFAULT_R_MAX) -> MuResult:
    """Edge-disjoint t-to-rest arcs counted in the window at radius ``r``.

    Terminal vertices beyond the ball are deleted and those inside it may only
    end an arc; an end contributes at most as many arcs as there are
    edge-disjoint rays from the ball into it that avoid the deleted vertices.
    ``stabilized`` says whether radius ``r + 1`` gives the same value.
    """
    g = as_presentation(g)
    rest = as_spec(rest)
    if rest.contains(t):
        raise DomainError(f"{terminal_label(t)} belongs to the rest set")
    a = _mu_at(g, t, rest, r, r_max)
    b = _mu_at(g, t, rest, r + 1, r_max)
    return MuResult(a, r, a == b, ((r, a), (r + 1, b)))
