"""Maximum edge-disjoint T-path packings in finite inner-Eulerian multigraphs.

The solver eliminates non-terminal vertices by complete splitting-off. At the
least non-terminal vertex with edges left, the first pair of incident edges (in
ascending edge order) whose replacement by a shortcut keeps every terminal's
edge-connectivity to the other terminals is split; the shortcut remembers the
walk it stands for. Once only terminals remain, a terminal's degree equals its
connectivity value, and every surviving edge unrolls into a T-walk of the
input graph, which is then trimmed to a simple T-path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .errors import BudgetError, ConsistencyError, DomainError, PreconditionError, RefusalError
from .multigraph import Cut, MultiGraph, Path, max_flow, min_cut, ordered, simplify_walk, sort_key

DEFAULT_NODE_BUDGET = 200_000
DEFAULT_BRUTE_FORCE_EDGES = 12


@dataclass(frozen=True)
class PathSystem:
    paths: tuple = ()

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def count_at(self, t) -> int:
        return sum(1 for p in self.paths if t in (p.start, p.end))


@dataclass(frozen=True)
class PackingCertificate:
    lambda_profile: Mapping
    per_terminal_cuts: Mapping

    @property
    def bound(self) -> float:
        return sum(self.lambda_profile.values()) / 2


@dataclass(frozen=True)
class EulerVerdict:
    holds: bool
    witness: object = None


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    where: object = None


def _terminals(g: MultiGraph, t: Iterable) -> frozenset:
    ts = frozenset(t)
    if not ts:
        raise DomainError("terminal set must be nonempty")
    for v in ts:
        if v not in g:
            raise DomainError(f"terminal {v!r} is not a vertex of the graph")
    return ts


def is_inner_eulerian(g: MultiGraph, t: Iterable) -> EulerVerdict:
    ts = _terminals(g, t)
    for v in g.vertices:
        if v not in ts and g.degree(v) % 2:
            return EulerVerdict(False, v)
    return EulerVerdict(True)


def lambda_profile(g: MultiGraph, t: Iterable) -> dict:
    """Terminal -> size of a smallest cut between it and the other terminals."""
    ts = _terminals(g, t)
    if len(ts) < 2:
        raise DomainError("lambda profile needs at least two terminals")
    return {s: min_cut(g, {s}, ts - {s})[1] for s in ordered(ts)}


# -- splitting-off solver -----------------------------------------------------

class _Splitter:
    def __init__(self, g: MultiGraph, terminals: frozenset, target: dict, budget: int):
        self.terminals = terminals
        self.target = target
        self.budget = budget
        self.nodes = 0
        self.vertices = g.vertices
        self.next_id = 0
        # internal id -> (u, v, walk vertices u..v, walk edges)
        self.edges: dict[int, tuple] = {}
        for eid, (u, v) in g.edges.items():
            self.edges[self.next_id] = (u, v, (u, v), (eid,))
            self.next_id += 1
        self.order = [v for v in g.vertices if v not in terminals]

    def graph(self) -> MultiGraph:
        return MultiGraph(self.vertices, [(i, e[0], e[1]) for i, e in self.edges.items()])

    def incident(self, v) -> list[int]:
        return [i for i, e in self.edges.items() if v in (e[0], e[1])]

    def admissible(self) -> bool:
        g = self.graph()
        for s in ordered(self.terminals):
            need = self.target[s]
            if need and max_flow(g, {s}, self.terminals - {s}, limit=need).value < need:
                return False
        return True

    @staticmethod
    def _oriented(edge: tuple, start) -> tuple:
        u, v, vs, es = edge
        if u == start:
            return vs, es
        return vs[::-1], es[::-1]

    def split(self, v, i: int, j: int):
        a, b = self.edges.pop(i), self.edges.pop(j)
        va, ea = self._oriented(a, a[1] if a[0] == v else a[0])  # far end -> v
        vb, eb = self._oriented(b, v)  # v -> far end
        u, w = va[0], vb[-1]
        new = None
        if u != w:
            new = self.next_id
            self.next_id += 1
            self.edges[new] = (u, w, va + vb[1:], ea + eb)
        return (i, a), (j, b), new

    def undo(self, record):
        (i, a), (j, b), new = record
        if new is not None:
            del self.edges[new]
        self.edges[i] = a
        self.edges[j] = b

    def run(self) -> bool:
        v = next((x for x in self.order if self.incident(x)), None)
        if v is None:
            return True
        inc = self.incident(v)
        for i, j in combinations(inc, 2):
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetError(f"splitting-off search exceeded {self.budget} nodes")
            record = self.split(v, i, j)
            if self.admissible() and self.run():
                return True
            self.undo(record)
        return False


def _path_key(p: Path) -> tuple:
    return tuple(sort_key(e) for e in p.edges)


def pack_tpaths(g: MultiGraph, t: Iterable, node_budget: int = DEFAULT_NODE_BUDGET) -> tuple[PathSystem, PackingCertificate]:
    """Maximum system of edge-disjoint T-paths with per-terminal cut certificates.

    Requires every non-terminal vertex to have even degree. Each terminal ends
    exactly as many paths as its connectivity to the remaining terminals.
    """
    ts = _terminals(g, t)
    verdict = is_inner_eulerian(g, ts)
    if not verdict.holds:
        raise PreconditionError(
            f"graph is not inner-Eulerian: non-terminal {verdict.witness!r} has odd degree "
            f"{g.degree(verdict.witness)}",
            witness=verdict.witness,
        )
    if len(ts) < 2:
        (only,) = ts
        return PathSystem(), PackingCertificate({only: 0}, {only: Cut(frozenset(), frozenset(g.vertices), frozenset())})

    paths: list[Path] = []
    for comp in g.components():
        comp_t = ts.intersection(comp)
        if len(comp_t) < 2:
            continue
        sub = g.subgraph(comp)
        target = lambda_profile(sub, comp_t)
        splitter = _Splitter(sub, comp_t, target, node_budget)
        if not splitter.run():
            raise ConsistencyError("no admissible complete splitting found")
        for u, v, vs, es in splitter.edges.values():
            p = simplify_walk(vs, es)
            if sort_key(p.end) < sort_key(p.start):
                p = p.reversed()
            paths.append(p)
    paths.sort(key=_path_key)
    system = PathSystem(tuple(paths))

    lam, cuts = {}, {}
    for s in ordered(ts):
        cut, value = min_cut(g, {s}, ts - {s})
        lam[s], cuts[s] = value, cut
        if system.count_at(s) != value:
            raise ConsistencyError(f"terminal {s!r} ends {system.count_at(s)} paths, expected {value}")
    return system, PackingCertificate(lam, cuts)


# -- brute force oracle ---------------------------------------------------------

def enumerate_tpaths(g: MultiGraph, t: Iterable) -> list[Path]:
    """Every T-path of ``g`` once, oriented from the smaller terminal."""
    ts = _terminals(g, t)
    rank = {v: i for i, v in enumerate(g.vertices)}
    found = []

    def extend(vs: list, es: list, on: set):
        for eid, w in g.incident(vs[-1]):
            if w in on:
                continue
            if w in ts:
                if rank[w] > rank[vs[0]]:
                    found.append(Path(tuple(vs + [w]), tuple(es + [eid])))
                continue
            on.add(w)
            vs.append(w)
            es.append(eid)
            extend(vs, es, on)
            vs.pop()
            es.pop()
            on.discard(w)

    for s in ordered(ts):
        extend([s], [], {s})
    return found


def _max_packing(masks: list[tuple[int, int]], all_mask: int, term_edges: list[tuple[int, int]]) -> list[int]:
    """Exact maximum set of pairwise disjoint edge masks. Returns path indices."""
    best: list[int] = []

    def half_edges(avail: int) -> int:
        return sum((m & avail).bit_count() * mult for m, mult in term_edges)

    def rec(avail: int, cands: list[tuple[int, int]], chosen: list[int]):
        nonlocal best
        if len(chosen) > len(best):
            best = chosen[:]
        if not cands or len(chosen) + half_edges(avail) // 2 <= len(best):
            return
        used = 0
        for _, m in cands:
            used |= m
        low = used & -used
        with_e = [c for c in cands if c[1] & low]
        for idx, m in with_e:
            rest = avail & ~m
            chosen.append(idx)
            rec(rest, [c for c in cands if not c[1] & m], chosen)
            chosen.pop()
        rest = avail & ~low
        rec(rest, [c for c in cands if not c[1] & low], chosen)

    rec(all_mask, masks, [])
    return best


@dataclass(frozen=True)
class BruteForceResult:
    max_count: int
    paths: PathSystem | None
    per_terminal: Mapping = field(default_factory=dict)


def brute_force_pack(g: MultiGraph, t: Iterable, max_edges: int = DEFAULT_BRUTE_FORCE_EDGES, per_terminal: bool = True) -> BruteForceResult:
    """Exhaustive maximum number of edge-disjoint T-paths. No parity assumption.

    ``per_terminal`` maps each terminal to the most T-paths ending there in any
    edge-disjoint system, which by Menger equals its connectivity value.
    """
    ts = _terminals(g, t)
    if g.number_of_edges() > max_edges:
        raise RefusalError(f"brute force refuses {g.number_of_edges()} edges (guard {max_edges})")
    bit = {eid: 1 << i for i, eid in enumerate(g.edges)}
    found = enumerate_tpaths(g, ts) if len(ts) > 1 else []
    masks = []
    for i, p in enumerate(found):
        m = 0
        for e in p.edges:
            m |= bit[e]
        masks.append((i, m))
    all_mask = (1 << g.number_of_edges()) - 1
    term_edges = []
    for s in ts:
        m = 0
        for eid, _ in g.incident(s):
            m |= bit[eid]
        term_edges.append((m, 1))
    best = _max_packing(masks, all_mask, term_edges)
    system = PathSystem(tuple(sorted((found[i] for i in best), key=_path_key)))
    counts = {}
    if per_terminal:
        for s in ordered(ts):
            own = [(i, m) for i, m in masks if s in (found[i].start, found[i].end)]
            inc = 0
            for eid, _ in g.incident(s):
                inc |= bit[eid]
            counts[s] = len(_max_packing(own, all_mask, [(inc, 2)]))
    return BruteForceResult(len(best), system, counts)


# -- verification ----------------------------------------------------------------

def verify_packing(g: MultiGraph, t: Iterable, p: PathSystem, c: PackingCertificate) -> list[Violation]:
    """Every broken path-system or certificate invariant, as a list of violations."""
    out: list[Violation] = []
    ts = frozenset(t)
    for v in ordered(ts):
        if v not in g:
            out.append(Violation("unknown-terminal", f"terminal {v!r} is not a vertex", v))
    if out:
        return out

    owner: dict = {}
    for k, path in enumerate(p.paths):
        if not path.edges:
            out.append(Violation("trivial-path", f"path {k} has no edges", k))
            continue
        for i, eid in enumerate(path.edges):
            if eid not in g.edges:
                out.append(Violation("unknown-edge", f"path {k} uses unknown edge {eid!r}", eid))
                continue
            if set(g.edges[eid]) != {path.vertices[i], path.vertices[i + 1]}:
                out.append(Violation("not-a-walk", f"path {k}: edge {eid!r} does not join {path.vertices[i]!r} and {path.vertices[i + 1]!r}", eid))
            if eid in owner:
                out.append(Violation("shared-edge", f"edge {eid!r} is used by paths {owner[eid]} and {k}", eid))
            else:
                owner[eid] = k
        if not path.is_simple():
            out.append(Violation("not-simple", f"path {k} repeats a vertex", k))
        if path.start not in ts or path.end not in ts or path.start == path.end:
            out.append(Violation("bad-endpoint", f"path {k} does not join two distinct terminals", k))
        inner = [v for v in path.vertices[1:-1] if v in ts]
        if inner:
            out.append(Violation("inner-terminal", f"path {k} passes through terminal {inner[0]!r}", inner[0]))

    if len(ts) < 2:
        return out
    truth = lambda_profile(g, ts)
    for s in ordered(ts):
        lam = c.lambda_profile.get(s)
        if lam != truth[s]:
            out.append(Violation("wrong-lambda", f"certificate claims lambda({s!r}) = {lam}, true value {truth[s]}", s))
        n = p.count_at(s)
        if n != truth[s]:
            out.append(Violation("count-mismatch", f"terminal {s!r} ends {n} paths, lambda is {truth[s]}", s))
        cut = c.per_terminal_cuts.get(s)
        if cut is None:
            out.append(Violation("missing-cut", f"no certificate cut for terminal {s!r}", s))
            continue
        if s not in cut.side_a or not (ts - {s}) <= cut.side_b or cut.side_a & cut.side_b \
                or (cut.side_a | cut.side_b) != set(g.vertices):
            out.append(Violation("cut-not-separating", f"cut for {s!r} does not separate it from the other terminals", s))
        elif cut.edges != Cut.from_side(g, cut.side_a).edges:
            out.append(Violation("cut-edges-mismatch", f"cut for {s!r} is not the edge set between its sides", s))
        if cut.size != truth[s]:
            out.append(Violation("cut-size", f"cut for {s!r} has size {cut.size}, lambda is {truth[s]}", s))
        s_paths = [q for q in p.paths if s in (q.start, q.end)]
        on_paths = set()
        for q in s_paths:
            hits = [e for e in q.edges if e in cut.edges]
            on_paths.update(hits)
            if len(hits) != 1:
                out.append(Violation("cut-not-on-paths", f"cut for {s!r} meets a path at {s!r} in {len(hits)} edges", s))
        if on_paths != set(cut.edges):
            out.append(Violation("cut-not-on-paths", f"cut for {s!r} has edges off its path system", s))
    return out
