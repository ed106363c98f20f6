"""JSON graph and presentation files, and DOT rendering.

A finite graph file::

    {"vertices": ["a", "b", "c"], "edges": [["e1", "a", "b"], ["e2", "b", "c"]]}

Vertex and edge ids may be strings or integers. Any file with a
``period_cell`` key is read as a periodic presentation (see ``tpack.periodic``).
"""

from __future__ import annotations

import json
from pathlib import Path as FilePath

from .ends import Presentation
from .errors import DomainError, PresentationError
from .multigraph import MultiGraph


def _id(x, what: str):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise DomainError(f"{what} ids must be strings or integers, got {x!r}")
    return x


def graph_from_json(data: dict) -> MultiGraph:
    if not isinstance(data, dict) or "edges" not in data:
        raise DomainError("a graph file needs an 'edges' list")
    edges = []
    for row in data["edges"]:
        if not isinstance(row, (list, tuple)) or len(row) != 3:
            raise DomainError(f"edge entries are [id, u, v]; got {row!r}")
        eid, u, v = (_id(row[0], "edge"), _id(row[1], "vertex"), _id(row[2], "vertex"))
        if u == v:
            raise DomainError(f"edge {eid!r} is a loop at vertex {u!r}; loops are not allowed")
        edges.append((eid, u, v))
    return MultiGraph([_id(v, "vertex") for v in data.get("vertices", [])], edges)


def graph_to_json(g: MultiGraph) -> dict:
    return {"vertices": list(g.vertices), "edges": [list(row) for row in g.edge_list()]}


def load(data: dict):
    """A MultiGraph or a periodic Presentation, depending on the content."""
    if isinstance(data, dict) and "period_cell" in data:
        return Presentation.from_periodic(data)
    return graph_from_json(data)


def load_file(path) -> object:
    try:
        data = json.loads(FilePath(path).read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: not valid JSON ({exc})") from None
    try:
        return load(data)
    except PresentationError as exc:
        raise PresentationError(f"{path}: {exc}") from None
    except DomainError as exc:
        raise DomainError(f"{path}: {exc}") from None


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, default=str) + "\n"


_PALETTE = ["blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan", "gold"]


def _q(x) -> str:
    return '"' + str(x).replace('"', '\\"') + '"'


def to_dot(g: MultiGraph, name: str = "G", cuts=(), arcs=(), terminals=()) -> str:
    """Undirected DOT; cut edges are red and dashed, arcs get one colour each."""
    cut_edges = {e for c in cuts for e in c}
    colour = {}
    for i, edges in enumerate(arcs):
        for e in edges:
            colour[e] = _PALETTE[i % len(_PALETTE)]
    term = {str(t) for t in terminals}
    lines = [f"graph {_q(name)} {{"]
    for v in g.vertices:
        attrs = []
        if str(v) in term:
            attrs.append("shape=box")
        if str(v).startswith("~"):
            attrs.append("style=filled fillcolor=lightgrey")
        lines.append(f"  {_q(v)}" + (f" [{' '.join(attrs)}]" if attrs else "") + ";")
    for eid, u, v in g.edge_list():
        attrs = [f"label={_q(eid)}"]
        if eid in colour:
            attrs.append(f"color={colour[eid]} penwidth=2")
        if eid in cut_edges:
            attrs.append("style=dashed fontcolor=red" + ("" if eid in colour else " color=red"))
        lines.append(f"  {_q(u)} -- {_q(v)} [{' '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
