"""Periodic descriptions of locally finite infinite graphs.

A description repeats a finite cell along the integers (``direction: both``)
or the naturals (``direction: forward``). Vertex ``v`` of cell ``i`` is named
``v@i``; cell edge ``e`` in cell ``i`` is ``e@i``; a glue edge ``g = [u, w]``
joins ``u@i`` to ``w@(i+1)`` and is named ``g@i``. An optional finite
``prefix`` attaches extra vertices whose edges may name cell vertices as
``v@i``. Each end is given by a ray: ``head`` (explicit vertices), then
``path`` repeated through cells ``start, start+step, ...``.

    {
      "name": "double_ladder",
      "direction": "both",
      "period_cell": {"vertices": ["a", "b"], "edges": [["r", "a", "b"]]},
      "glue": [["ra", "a", "a"], ["rb", "b", "b"]],
      "root": "a@0",
      "ends": [{"id": "left", "path": ["a"], "step": -1},
               {"id": "right", "path": ["a"], "step": 1}],
      "period": 1
    }
"""

from __future__ import annotations

import copy

from .errors import DomainError, PresentationError


def split_ref(ref: str) -> tuple[str, int] | None:
    if not isinstance(ref, str) or "@" not in ref:
        return None
    name, _, idx = ref.rpartition("@")
    try:
        return name, int(idx)
    except ValueError:
        return None


class PeriodicGraph:
    """Adjacency oracle for a validated periodic description."""

    def __init__(self, desc: dict):
        self.desc = copy.deepcopy(desc)
        self._validate()

    # -- validation -----------------------------------------------------------
    def _validate(self):
        d = self.desc
        for key in ("period_cell", "glue", "root", "ends"):
            if key not in d:
                raise PresentationError(f"periodic description lacks {key!r}")
        self.direction = d.get("direction", "both")
        if self.direction not in ("both", "forward"):
            raise PresentationError(f"direction must be 'both' or 'forward', got {self.direction!r}")
        cell = d["period_cell"]
        self.cell_vertices = list(cell.get("vertices", []))
        if not self.cell_vertices:
            raise PresentationError("period_cell needs at least one vertex")
        prefix = d.get("prefix") or {}
        self.prefix_vertices = list(prefix.get("vertices", []))
        names = self.cell_vertices + self.prefix_vertices
        if len(set(names)) != len(names):
            raise PresentationError("vertex names must be unique")
        for n in names:
            if not isinstance(n, str) or not n or "@" in n or n.startswith("~"):
                raise PresentationError(f"bad vertex name {n!r}: use nonempty strings without '@' or a leading '~'")
        cset = set(self.cell_vertices)
        self.cell_edges = []
        self.glue = []
        seen_ids = set()

        def fresh(eid):
            if not isinstance(eid, str) or not eid or "@" in eid:
                raise PresentationError(f"bad edge id {eid!r}")
            if eid in seen_ids:
                raise PresentationError(f"duplicate edge id {eid!r}")
            seen_ids.add(eid)

        for eid, u, v in cell.get("edges", []):
            fresh(eid)
            if u not in cset or v not in cset:
                raise PresentationError(f"cell edge {eid!r} names a vertex outside the cell")
            if u == v:
                raise PresentationError(f"cell edge {eid!r} is a loop")
            self.cell_edges.append((eid, u, v))
        for eid, u, v in d["glue"]:
            fresh(eid)
            if u not in cset or v not in cset:
                raise PresentationError(f"glue edge {eid!r} names a vertex outside the cell")
            self.glue.append((eid, u, v))
        if not self.glue:
            raise PresentationError("glue must contain at least one edge, otherwise the graph is not connected across cells")
        self.prefix_edges = []
        pset = set(self.prefix_vertices)
        for eid, u, v in prefix.get("edges", []):
            fresh(eid)
            for x in (u, v):
                if x not in pset and not self._valid_cell_ref(x):
                    raise PresentationError(f"prefix edge {eid!r} names unknown vertex {x!r}")
            if u == v:
                raise PresentationError(f"prefix edge {eid!r} is a loop")
            self.prefix_edges.append((eid, u, v))
        if not self.is_vertex(d["root"]):
            raise PresentationError(f"root {d['root']!r} is not a vertex")
        self.root = d["root"]
        self.period = int(d.get("period", 1))
        if self.period < 1:
            raise PresentationError("period must be positive")
        self.ends = {}
        for spec in d["ends"]:
            eid = spec.get("id")
            if not isinstance(eid, str) or not eid or eid in self.ends:
                raise PresentationError(f"bad or duplicate end id {eid!r}")
            path = list(spec.get("path", []))
            step = int(spec.get("step", 1))
            if not path or any(p not in cset for p in path):
                raise PresentationError(f"end {eid!r}: path must list cell vertices")
            if step not in (1, -1) or (self.direction == "forward" and step != 1):
                raise PresentationError(f"end {eid!r}: step must be 1 (or -1 for two-way descriptions)")
            head = list(spec.get("head", []))
            for h in head:
                if not self.is_vertex(h):
                    raise PresentationError(f"end {eid!r}: head vertex {h!r} is unknown")
            self.ends[eid] = (head, path, int(spec.get("start", 0)), step)
        self.name = d.get("name", "periodic")

    def _cell_ok(self, i: int) -> bool:
        return self.direction == "both" or i >= 0

    def _valid_cell_ref(self, x) -> bool:
        ref = split_ref(x)
        return ref is not None and ref[0] in self.cell_vertices and self._cell_ok(ref[1])

    def is_vertex(self, v) -> bool:
        return v in self.prefix_vertices or self._valid_cell_ref(v)

    # -- oracle -----------------------------------------------------------------
    def neighbors(self, v) -> list[tuple[str, str]]:
        if not self.is_vertex(v):
            raise DomainError(f"unknown vertex {v!r}")
        out = []
        for eid, a, b in self.prefix_edges:
            if a == v:
                out.append((eid, b))
            elif b == v:
                out.append((eid, a))
        ref = split_ref(v)
        if ref is not None and v not in self.prefix_vertices:
            name, i = ref
            for eid, a, b in self.cell_edges:
                if a == name:
                    out.append((f"{eid}@{i}", f"{b}@{i}"))
                elif b == name:
                    out.append((f"{eid}@{i}", f"{a}@{i}"))
            for eid, a, b in self.glue:
                if a == name and self._cell_ok(i + 1):
                    out.append((f"{eid}@{i}", f"{b}@{i + 1}"))
                if b == name and self._cell_ok(i - 1):
                    out.append((f"{eid}@{i - 1}", f"{a}@{i - 1}"))
        return out

    def ray(self, end_id: str):
        head, path, start, step = self.ends[end_id]
        n = len(path)

        def at(i: int):
            if i < len(head):
                return head[i]
            k = i - len(head)
            return f"{path[k % n]}@{start + step * (k // n)}"

        return at
