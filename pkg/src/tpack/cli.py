"""Command line: every subcommand prints one JSON document.

Exit status: 0 success, 1 usage or input error, 2 a precondition or premise
fails (JSON witness on stderr), 3 a value did not stabilize or a verdict is
unknown.
"""

from __future__ import annotations

import functools
import sys

import click

from . import zoo as zoo_mod
from .arcs import DEFAULT_DEPTH, assemble_arcs, mu_estimate, verify_arc_system
from .ends import (
    DEFAULT_R_MAX,
    TerminalSpec,
    as_presentation,
    check_cut_parity_premise,
    check_discrete,
    distances,
    end_degree_parity,
    handshake_check,
    is_inner_eulerian_with_ends,
    lambda_end,
    terminal_key,
    terminal_label,
    window,
)
from .errors import PreconditionError, RefusalError, TPackError, UnstabilizedError
from .io import dumps, graph_to_json, load_file, to_dot
from .multigraph import Cut, MultiGraph, ordered
from .packing import lambda_profile, pack_tpaths, verify_packing

EXIT_OK, EXIT_USAGE, EXIT_PREMISE, EXIT_UNKNOWN = 0, 1, 2, 3


class Failure(Exception):
    def __init__(self, code: int, payload: dict):
        super().__init__(payload.get("message", ""))
        self.code = code
        self.payload = payload


def _cut_json(c: Cut) -> dict:
    return {"edges": [str(e) for e in c.sorted_edges()], "side": [str(v) for v in ordered(c.side_a)]}


def _witness_json(w):
    if isinstance(w, Cut):
        return _cut_json(w)
    if w is None or isinstance(w, (dict, list, str, int)):
        return w
    return terminal_label(w)


def _emit(obj, out):
    text = dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _input(zoo, params, input_file):
    if (zoo is None) == (input_file is None):
        raise click.UsageError("give exactly one of --zoo or --input")
    if zoo is not None:
        return zoo_mod.build(zoo, params), zoo
    return load_file(input_file), None


def common(f):
    @click.option("--zoo", "zoo", metavar="NAME", help="zoo entry to use as input")
    @click.option("--param", "params", multiple=True, metavar="K", help="zoo parameter (repeatable)")
    @click.option("--input", "input_file", type=click.Path(exists=True, dir_okay=False), help="JSON graph or presentation")
    @click.option("--terminals", "terminals", metavar="SPEC", help="comma list: leaves, ends, all, presets, ids")
    @click.option("--out", "out", type=click.Path(dir_okay=False), help="write JSON here instead of stdout")
    @functools.wraps(f)
    def wrapper(zoo, params, input_file, terminals, out, **kw):
        g, name = _input(zoo, params, input_file)
        spec = zoo_mod.resolve_terminals(g, terminals, name)
        code, payload = f(g, spec, name, **kw)
        _emit(payload, out)
        if code:
            raise Failure(code, {"error": "unknown" if code == EXIT_UNKNOWN else "premise",
                                 "message": f"{f.__name__.removesuffix('_cmd')} did not certify", "report": payload})
    return wrapper


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """T-path packings, ends and arc systems."""


@cli.command()
@common
@click.option("--dot", "dot", type=click.Path(dir_okay=False), help="also write a DOT rendering")
def pack(g, spec, name, dot):
    """Maximum edge-disjoint T-paths in a finite inner-Eulerian graph."""
    if not isinstance(g, MultiGraph):
        raise click.UsageError("pack needs a finite graph; use arcs for infinite presentations")
    t = ordered(spec.vertices)
    paths, cert = pack_tpaths(g, t)
    bad = verify_packing(g, t, paths, cert)
    if bad:
        raise TPackError(f"internal verification failed: {bad[0].message}")
    if dot:
        with open(dot, "w") as fh:
            fh.write(to_dot(g, name or "graph", arcs=[p.edges for p in paths], terminals=t))
    return EXIT_OK, {
        "count": len(paths),
        "paths": [{"vertices": [str(v) for v in p.vertices], "edges": [str(e) for e in p.edges]} for p in paths],
        "counts": {str(v): paths.count_at(v) for v in t},
        "lambda": {str(v): cert.lambda_profile[v] for v in t},
        "certificate": {str(v): [str(e) for e in c.sorted_edges()] for v, c in cert.per_terminal_cuts.items()},
    }


@cli.command()
@common
@click.option("--radius", type=int, default=8, show_default=True)
@click.option("--depth", type=int, default=DEFAULT_DEPTH, show_default=True)
@click.option("--rmax", type=int, default=DEFAULT_R_MAX, show_default=True)
@click.option("--via-inner-eulerian", "via_ie", is_flag=True, help="certify the premise by degrees instead of cut enumeration")
@click.option("--dot", "dot", type=click.Path(dir_okay=False))
def arcs(g, spec, name, radius, depth, rmax, via_ie, dot):
    """Edge-disjoint T-arcs (paths, rays, double rays) with lambda arcs per terminal."""
    a, state = assemble_arcs(g, spec, radius, depth, mode="inner-eulerian" if via_ie else "auto", r_max=rmax)
    bad = verify_arc_system(g, spec, a, state)
    if bad:
        raise TPackError(f"internal verification failed: {bad[0].message}")
    if dot:
        with open(dot, "w") as fh:
            fh.write(to_dot(state.window.graph, name or "window", cuts=[c.edges for c in state.cuts],
                            arcs=[x.edges for x in a.arcs], terminals=[terminal_label(t) for t in spec.vertices]))
    out = a.to_json()
    out["lambda"] = {terminal_label(t): v for t, v in state.lambdas.items()}
    out["pipeline"] = state.to_json()
    return EXIT_OK, out


def _targets(g, spec: TerminalSpec, chosen, radius: int):
    if chosen:
        return [zoo_mod.terminal_from_token(g, chosen)]
    items = spec.items()
    if spec.rule is not None and not isinstance(g, MultiGraph):
        near = distances(g, radius // 2)
        items += [v for v in ordered(near) if spec.is_vertex_terminal(v) and v not in spec.vertices]
    return sorted(items, key=terminal_key)


@cli.command(name="lambda")
@common
@click.argument("terminal", required=False)
@click.option("--radius", type=int, default=8, show_default=True, help="rule terminals within radius/2 are listed")
@click.option("--rmax", type=int, default=DEFAULT_R_MAX, show_default=True)
def lambda_cmd(g, spec, name, terminal, radius, rmax):
    """Least cut between each terminal and the others."""
    if isinstance(g, MultiGraph) and spec.finite and not terminal:
        prof = lambda_profile(g, ordered(spec.vertices))
        return EXIT_OK, {"lambda": {str(v): x for v, x in prof.items()}}
    res = {}
    for t in _targets(g, spec, terminal, radius):
        r = lambda_end(g, t, spec.without(t), rmax)
        res[terminal_label(t)] = {"value": r.value, "radius": r.radius, "cut": _cut_json(r.cut),
                                  "values": [list(x) for x in r.values]}
    return EXIT_OK, {"lambda": res}


@cli.command()
@common
@click.argument("terminal", required=False)
@click.option("--radius", type=int, default=8, show_default=True)
@click.option("--rmax", type=int, default=DEFAULT_R_MAX, show_default=True)
def mu(g, spec, name, terminal, radius, rmax):
    """Edge-disjoint arcs from a terminal to the rest, counted in the window."""
    res, code = {}, EXIT_OK
    for t in _targets(g, spec, terminal, radius):
        m = mu_estimate(g, t, spec.without(t), radius, rmax)
        res[terminal_label(t)] = {"value": m.value, "radius": m.radius, "stabilized": m.stabilized,
                                  "values": [list(x) for x in m.values]}
        if not m.stabilized:
            code = EXIT_UNKNOWN
    return code, {"mu": res}


@cli.command()
@common
@click.option("--radius", type=int, default=4, show_default=True)
@click.option("--rmax", type=int, default=DEFAULT_R_MAX, show_default=True)
@click.option("--via-inner-eulerian", "via_ie", is_flag=True)
def check(g, spec, name, radius, rmax, via_ie):
    """Discreteness, cut-parity premise and inner-Eulerian verdicts."""
    disc = check_discrete(g, spec, rmax)
    try:
        cp = check_cut_parity_premise(g, spec, radius, via_inner_eulerian=via_ie, r_max=rmax)
    except RefusalError as exc:
        cp = None
        refusal = str(exc)
    ie = is_inner_eulerian_with_ends(g, spec, rmax)
    report = {
        "discrete": {terminal_label(t): {"status": v.status, "radius": v.radius, "detail": v.detail}
                     for t, v in sorted(disc.items(), key=lambda kv: terminal_key(kv[0]))},
        "inner_eulerian": {"status": ie.status, "witness": _witness_json(ie.witness), "detail": ie.detail},
        "terminals": spec.describe(),
    }
    if cp is None:
        report["cut_parity"] = {"status": "refused", "detail": refusal}
        premise = ie.status
    else:
        report["cut_parity"] = {"status": cp.status, "radius": cp.radius, "witness": _witness_json(cp.witness),
                                "detail": cp.detail}
        premise = cp.status
    statuses = [v.status for v in disc.values()] + [premise]
    if "not-discrete" in statuses or "false" in statuses:
        return EXIT_PREMISE, report
    if "unknown" in statuses:
        return EXIT_UNKNOWN, report
    return EXIT_OK, report


@cli.command()
@common
@click.option("--rmax", type=int, default=DEFAULT_R_MAX, show_default=True)
def parity(g, spec, name, rmax):
    """Parity of every declared end's degree."""
    p = as_presentation(g)
    res = {}
    for e in p.ends:
        r = end_degree_parity(p, e, rmax)
        res[e] = {"status": r.status, "degrees": [list(x) for x in r.degrees], "radius": r.radius}
    code = EXIT_UNKNOWN if any(v["status"] == "unknown" for v in res.values()) else EXIT_OK
    return code, {"ends": res}


@cli.command()
@common
@click.option("--rmax", type=int, default=DEFAULT_R_MAX, show_default=True)
def handshake(g, spec, name, rmax):
    """Odd vertices plus odd ends: even, or unknown if not certifiable."""
    h = handshake_check(g, rmax)
    out = {"status": h.status, "odd_vertices": [str(v) for v in h.odd_vertices],
           "odd_ends": [e.name for e in h.odd_ends], "total": h.total, "radius": h.radius}
    code = {"even": EXIT_OK, "unknown": EXIT_UNKNOWN}.get(h.status, EXIT_PREMISE)
    return code, out


@cli.command()
@common
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]), default="json", show_default=True)
@click.option("--radius", type=int, default=4, show_default=True, help="window radius for DOT of infinite graphs")
def export(g, spec, name, fmt, radius):
    """Write the input as a JSON graph or presentation, or as DOT."""
    if fmt == "json":
        return EXIT_OK, graph_to_json(g) if isinstance(g, MultiGraph) else g.description
    graph = g if isinstance(g, MultiGraph) else window(g, radius).graph
    return EXIT_OK, {"dot": to_dot(graph, name or "graph", terminals=[terminal_label(t) for t in spec.vertices])}


@cli.group()
def zoo():
    """The built-in graph families."""


@zoo.command(name="list")
def zoo_list():
    _emit({n: {"summary": e.summary, "parameters": e.params, "infinite": e.infinite}
           for n, e in zoo_mod.REGISTRY.items()}, None)


@zoo.command(name="show")
@click.argument("name")
@click.option("--param", "params", multiple=True, metavar="K")
def zoo_show(name, params):
    _emit(zoo_mod.describe(name, params), None)


def _fail(code: int, payload: dict) -> int:
    click.echo(dumps(payload), err=True, nl=False)
    return code


def main(argv=None) -> int:
    """Entry point; returns the exit status instead of raising SystemExit."""
    try:
        rv = cli.main(args=argv, prog_name="tpack", standalone_mode=False)
        return rv if isinstance(rv, int) else EXIT_OK
    except Failure as f:
        return _fail(f.code, f.payload)
    except click.exceptions.Abort:
        return _fail(EXIT_USAGE, {"error": "usage", "message": "aborted"})
    except click.ClickException as exc:
        return _fail(EXIT_USAGE, {"error": "usage", "message": exc.format_message()})
    except PreconditionError as exc:
        return _fail(EXIT_PREMISE, {"error": exc.kind, "message": str(exc), "witness": _witness_json(exc.witness)})
    except UnstabilizedError as exc:
        return _fail(EXIT_UNKNOWN, {"error": "unstabilized", "message": str(exc),
                                    "values": [list(x) for x in (exc.values or [])]})
    except TPackError as exc:
        return _fail(EXIT_USAGE, {"error": type(exc).__name__, "message": str(exc)})
    except OSError as exc:
        return _fail(EXIT_USAGE, {"error": "io", "message": str(exc)})


def run() -> None:
    sys.exit(main())
