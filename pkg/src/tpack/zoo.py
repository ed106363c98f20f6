"""Named graphs: small finite basics and periodic infinite families.

``dup_rung_ladder`` and ``fig3_tree`` are reconstructed from their defining
properties (degrees, ends, cut values) rather than from drawings; the audit
run on every build checks exactly those properties.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .ends import End, Presentation, TerminalSpec, distances, end_degree_parity
from .errors import DomainError
from .multigraph import MultiGraph, ordered


def _int_param(params, name: str, default: int | None, minimum: int) -> int:
    if not params:
        if default is None:
            raise DomainError(f"parameter {name} is required")
        return default
    if len(params) > 1:
        raise DomainError(f"expected one parameter ({name}), got {len(params)}")
    try:
        k = int(params[0])
    except (TypeError, ValueError):
        raise DomainError(f"parameter {name} must be an integer, got {params[0]!r}") from None
    if k < minimum:
        raise DomainError(f"parameter {name} must be at least {minimum}")
    return k


def star(k: int) -> MultiGraph:
    return MultiGraph(["c"], [(f"e{i}", "c", f"l{i}") for i in range(1, k + 1)])


def path_graph(n: int) -> MultiGraph:
    return MultiGraph([f"v{i}" for i in range(n)], [(f"e{i}", f"v{i - 1}", f"v{i}") for i in range(1, n)])


def cycle(n: int) -> MultiGraph:
    return MultiGraph([f"v{i}" for i in range(n)], [(f"e{i}", f"v{i}", f"v{(i + 1) % n}") for i in range(n)])


def parallel(m: int) -> MultiGraph:
    return MultiGraph(["u", "v"], [(f"e{i}", "u", "v") for i in range(1, m + 1)])


RAY = {
    "name": "ray",
    "direction": "forward",
    "period_cell": {"vertices": ["v"], "edges": []},
    "glue": [["e", "v", "v"]],
    "root": "v@0",
    "ends": [{"id": "end", "path": ["v"]}],
    "period": 1,
}

DOUBLE_LADDER = {
    "name": "double_ladder",
    "direction": "both",
    "period_cell": {"vertices": ["a", "b"], "edges": [["r", "a", "b"]]},
    "glue": [["ra", "a", "a"], ["rb", "b", "b"]],
    "root": "a@0",
    "ends": [{"id": "left", "path": ["a"], "step": -1}, {"id": "right", "path": ["a"], "step": 1}],
    "period": 1,
}

# Rail a carries the vertex terminals of the non-discrete example, so the
# declared rays run along rail b and stay clear of them.
DUP_RUNG_LADDER = {
    "name": "dup_rung_ladder",
    "direction": "both",
    "period_cell": {"vertices": ["a", "b"], "edges": [["r1", "a", "b"], ["r2", "a", "b"]]},
    "glue": [["ra", "a", "a"], ["rb", "b", "b"]],
    "root": "a@0",
    "ends": [{"id": "left", "path": ["b"], "step": -1}, {"id": "right", "path": ["b"], "step": 1}],
    "period": 1,
}

FIG3_TREE = {
    "name": "fig3_tree",
    "direction": "forward",
    "period_cell": {"vertices": ["x"], "edges": []},
    "glue": [["g", "x", "x"]],
    "prefix": {
        "vertices": ["c", "l1", "l2", "l3"],
        "edges": [["s1", "c", "l1"], ["s2", "c", "l2"], ["s3", "c", "l3"], ["h", "c", "x@0"]],
    },
    "root": "c",
    "ends": [{"id": "end", "head": ["c"], "path": ["x"]}],
    "period": 1,
}


def _on_rail_a(v) -> bool:
    return isinstance(v, str) and v.startswith("a@")


def _everything(v) -> bool:
    return True


@dataclass(frozen=True)
class ZooEntry:
    name: str
    summary: str
    builder: Callable
    params: str = ""
    infinite: bool = False
    default_terminals: str = ""
    presets: dict = field(default_factory=dict)  # token -> (rule name, predicate)
    properties: dict = field(default_factory=dict)

    def build(self, params=()):
        return self.builder(list(params))


def _periodic(desc):
    return lambda params: _no_params(desc["name"], params) or Presentation.from_periodic(desc)


def _no_params(name, params):
    if params:
        raise DomainError(f"{name} takes no parameters")
    return None


_LADDER_RAIL = {"rail": ("rail a", _on_rail_a)}

REGISTRY: dict[str, ZooEntry] = {
    e.name: e
    for e in [
        ZooEntry("star", "K_{1,k}: centre c, leaves l1..lk", lambda p: star(_int_param(p, "k", 3, 1)), "k",
                 default_terminals="leaves", properties={"degrees": "centre k, leaves 1"}),
        ZooEntry("path", "path on n vertices v0..v{n-1}", lambda p: path_graph(_int_param(p, "n", 3, 1)), "n",
                 default_terminals="leaves"),
        ZooEntry("cycle", "cycle on n vertices", lambda p: cycle(_int_param(p, "n", 4, 2)), "n", default_terminals="all"),
        ZooEntry("parallel", "two vertices u, v joined by m parallel edges", lambda p: parallel(_int_param(p, "m", 2, 1)),
                 "m", default_terminals="all"),
        ZooEntry("ray", "one-way infinite path v@0 v@1 ...", _periodic(RAY), infinite=True, default_terminals="all",
                 presets={"all": ("all vertices", _everything)},
                 properties={"degrees": "root 1, others 2", "ends": 1, "period": 1, "odd": 2}),
        ZooEntry("double_ladder", "two double rays a, b with one rung per cell", _periodic(DOUBLE_LADDER),
                 infinite=True, default_terminals="ends",
                 properties={"degrees": "all 3", "ends": 2, "period": 1}),
        ZooEntry("dup_rung_ladder", "double ladder with every rung doubled; ends declared along rail b",
                 _periodic(DUP_RUNG_LADDER), infinite=True, default_terminals="ends,rail", presets=_LADDER_RAIL,
                 properties={"degrees": "all 4", "ends": 2, "period": 1, "odd": 0}),
        ZooEntry("fig3_tree", "star with three leaves l1..l3 and a ray x@0 x@1 ... at its centre c (reconstruction)",
                 _periodic(FIG3_TREE), infinite=True, default_terminals="leaves",
                 properties={"degrees": "c 4, leaves 1, ray vertices 2", "ends": 1, "period": 1, "odd": 4}),
        ZooEntry("even_ladder", "dup_rung_ladder used with both ends as terminals", _periodic(DUP_RUNG_LADDER),
                 infinite=True, default_terminals="ends", presets=_LADDER_RAIL,
                 properties={"degrees": "all 4", "ends": 2, "period": 1, "odd": 0}),
    ]
}


def names() -> list[str]:
    return list(REGISTRY)


def entry(name: str) -> ZooEntry:
    try:
        return REGISTRY[name]
    except KeyError:
        raise DomainError(f"unknown zoo entry {name!r}; known: {', '.join(REGISTRY)}") from None


def build(name: str, params=()):
    e = entry(name)
    g = e.build(params)
    audit(name, g)
    return g


# -- audit ----------------------------------------------------------------------------

def audit(name: str, g) -> None:
    """Check the documented properties of a freshly built entry."""
    problems = []
    if isinstance(g, MultiGraph):
        degs = {v: g.degree(v) for v in g.vertices}
        if name == "star":
            k = len(g.vertices) - 1
            if degs["c"] != k or any(degs[v] != 1 for v in g.vertices if v != "c"):
                problems.append("star degrees")
        if name in ("cycle",) and any(d != 2 for d in degs.values()):
            problems.append("cycle degrees")
    else:
        r = 4 * (g.period or 1)
        dist = distances(g, r)
        inner = [v for v, d in dist.items() if d < r]
        deg = {v: g.degree(v) for v in inner}
        if name in ("dup_rung_ladder", "even_ladder") and any(d != 4 for d in deg.values()):
            problems.append("ladder vertices must have degree 4")
        if name == "double_ladder" and any(d != 3 for d in deg.values()):
            problems.append("double ladder vertices must have degree 3")
        if name == "fig3_tree":
            if deg["c"] != 4 or any(deg[v] != 1 for v in ("l1", "l2", "l3")):
                problems.append("fig3_tree centre/leaf degrees")
            if any(d % 2 for v, d in deg.items() if v not in ("l1", "l2", "l3")):
                problems.append("fig3_tree non-leaves must be even")
        expected_ends = REGISTRY[name].properties.get("ends")
        if expected_ends is not None and len(g.ends) != expected_ends:
            problems.append("end count")
    if problems:
        raise DomainError(f"zoo entry {name!r} failed its audit: {'; '.join(problems)}")


def describe(name: str, params=()) -> dict:
    e = entry(name)
    g = build(name, params)
    out = {
        "name": e.name,
        "summary": e.summary,
        "parameters": e.params,
        "infinite": e.infinite,
        "default_terminals": e.default_terminals,
        "presets": sorted(set(e.presets) | {"all", "ends", "leaves"}),
        "properties": e.properties,
    }
    if isinstance(g, MultiGraph):
        out["vertices"] = [str(v) for v in g.vertices]
        out["edges"] = [[str(x) for x in row] for row in g.edge_list()]
    else:
        out["description"] = g.description
        out["ends"] = list(g.ends)
        out["end_parity"] = {n: end_degree_parity(g, n).status for n in g.ends}
    return out


# -- terminal shorthand ----------------------------------------------------------

def resolve_terminals(g, spec: str | None, zoo_name: str | None = None) -> TerminalSpec:
    """Parse ``leaves``, ``ends``, ``all``, entry presets and explicit ids.

    Tokens are comma separated; ``end:NAME`` or a bare declared end name
    selects an end. Integer-looking ids match integer vertices of finite graphs.
    """
    e = REGISTRY.get(zoo_name) if zoo_name else None
    if spec is None or spec == "":
        spec = e.default_terminals if e else "all"
    verts, ends_, rule, rule_name = set(), [], None, ""
    pres = dict(e.presets) if e else {}
    for tok in [s.strip() for s in spec.split(",") if s.strip()]:
        if tok == "ends":
            if isinstance(g, MultiGraph):
                continue
            ends_.extend(n for n in g.ends if n not in ends_)
        elif tok == "leaves":
            verts.update(_leaves(g))
        elif tok == "all" and isinstance(g, MultiGraph):
            verts.update(g.vertices)
        elif tok == "all" or tok in pres:
            name, pred = pres.get(tok, ("all vertices", _everything))
            if rule is not None:
                raise DomainError("at most one infinite terminal rule may be given")
            rule, rule_name = pred, name
        elif tok.startswith("end:") or (not isinstance(g, MultiGraph) and tok in g.ends):
            n = tok[4:] if tok.startswith("end:") else tok
            if isinstance(g, MultiGraph) or n not in g.ends:
                raise DomainError(f"unknown end {n!r}")
            if n not in ends_:
                ends_.append(n)
        else:
            verts.add(_vertex(g, tok))
    if not isinstance(g, MultiGraph):
        ends_ = [n for n in g.ends if n in ends_]
    return TerminalSpec(frozenset(verts), tuple(ends_), rule, rule_name)


def _vertex(g, tok: str):
    if isinstance(g, MultiGraph):
        if tok in g:
            return tok
        if tok.lstrip("-").isdigit() and int(tok) in g:
            return int(tok)
        raise DomainError(f"unknown vertex {tok!r}")
    try:
        g.neighbors(tok)
    except DomainError:
        raise DomainError(f"unknown vertex {tok!r}") from None
    return tok


def _leaves(g) -> list:
    if isinstance(g, MultiGraph):
        return [v for v in g.vertices if g.degree(v) == 1]
    # infinite presentations: leaves are the degree-one vertices of the finite prefix
    prefix = (g.description or {}).get("prefix") or {}
    return ordered(v for v in prefix.get("vertices", []) if g.degree(v) == 1)


def terminal_from_token(g, tok: str):
    if tok.startswith("end:"):
        return End(tok[4:])
    if not isinstance(g, MultiGraph) and tok in g.ends:
        return End(tok)
    return _vertex(g, tok)
