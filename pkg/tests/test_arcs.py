import dataclasses

import pytest
from hypothesis import given, settings

from strategies import eulerian_instances
from tpack.arcs import (
    Arc,
    ArcSystem,
    assemble_arcs,
    build_final_minor,
    compute_separating_cuts,
    contraction_name,
    mu_estimate,
    verify_arc_system,
    window_arc_bruteforce,
)
from tpack.ends import End, TerminalSpec, lambda_end
from tpack.errors import DomainError, PreconditionError
from tpack.packing import pack_tpaths
from tpack.zoo import build, cycle, resolve_terminals, star

LEFT, RIGHT = End("left"), End("right")
BOTH = TerminalSpec(frozenset(), ("left", "right"))


def kinds(a):
    return sorted(x.kind for x in a.arcs)


class TestEvenLadder:
    @pytest.mark.parametrize("r", [10, 14])
    def test_two_double_rays(self, r):
        g = build("even_ladder")
        a, state = assemble_arcs(g, BOTH, r=r)
        assert kinds(a) == ["double-ray", "double-ray"]
        assert dict(a.per_terminal_counts) == {LEFT: 2, RIGHT: 2}
        assert verify_arc_system(g, BOTH, a, state) == []
        for arc in a.arcs:
            assert arc.materialized_depth >= 20

    def test_end_order_does_not_change_counts(self):
        g = build("even_ladder")
        a1, s1 = assemble_arcs(g, BOTH, r=10)
        a2, s2 = assemble_arcs(g, TerminalSpec(frozenset(), ("right", "left")), r=10)
        assert dict(a1.per_terminal_counts) == dict(a2.per_terminal_counts)
        assert s1.end_enumeration == ("left", "right") and s2.end_enumeration == ("right", "left")

    def test_radius_monotone(self):
        g = build("even_ladder")
        counts = {r: dict(assemble_arcs(g, BOTH, r=r)[0].per_terminal_counts) for r in (4, 6, 8, 12)}
        assert len({tuple(sorted(c.items())) for c in counts.values()}) == 1

    def test_mixed_terminals(self):
        g = build("even_ladder")
        t = TerminalSpec(frozenset({"a@0", "b@3"}), ("left", "right"))
        a, state = assemble_arcs(g, t, r=8)
        assert verify_arc_system(g, t, a, state) == []
        # oracle: each count equals the window cut value from the lambda routine
        for x in t.items():
            assert a.per_terminal_counts[x] == lambda_end(g, x, t.without(x)).value

    def test_state_json(self):
        _, state = assemble_arcs(build("even_ladder"), BOTH, r=6)
        js = state.to_json()
        assert js["ends"] == ["left", "right"] and len(js["cuts"]) == 2
        assert js["terminal_map"] == {"end:left": "~v0", "end:right": "~v1"}


class TestVerifier:
    def setup_method(self):
        self.g = build("even_ladder")
        self.a, self.state = assemble_arcs(self.g, BOTH, r=6)

    def test_drop_an_arc(self):
        a = ArcSystem(self.a.arcs[:1], self.a.per_terminal_counts)
        kinds_ = {v.kind for v in verify_arc_system(self.g, BOTH, a, self.state)}
        assert "count-mismatch" in kinds_

    def test_wrong_lambda(self):
        a = ArcSystem(self.a.arcs[:1], {LEFT: 1, RIGHT: 1})
        kinds_ = {v.kind for v in verify_arc_system(self.g, BOTH, a, self.state)}
        assert "wrong-lambda" in kinds_

    def test_swapped_ends(self):
        arc = self.a.arcs[0]
        bad = dataclasses.replace(arc, endpoints=(arc.endpoints[0], arc.endpoints[0]))
        a = ArcSystem((bad,) + self.a.arcs[1:], self.a.per_terminal_counts)
        kinds_ = {v.kind for v in verify_arc_system(self.g, BOTH, a)}
        assert {"same-end", "wrong-end"} <= kinds_

    def test_shared_edge_and_broken_walk(self):
        a0 = self.a.arcs[0]
        twin = dataclasses.replace(a0)
        kinds_ = {v.kind for v in verify_arc_system(self.g, BOTH, ArcSystem((a0, twin), {LEFT: 2, RIGHT: 2}))}
        assert "shared-edge" in kinds_
        broken = Arc("double-ray", a0.vertices, a0.edges[::-1], a0.endpoints)
        kinds_ = {v.kind for v in verify_arc_system(self.g, BOTH, ArcSystem((broken,), {LEFT: 1, RIGHT: 1}))}
        assert "not-a-walk" in kinds_

    def test_finite_inner_terminal(self):
        g = star(4)
        t = ["c", "l1", "l2"]
        arc = Arc("path", ("l1", "c", "l2"), ("e1", "e2"), ("l1", "l2"))
        kinds_ = {v.kind for v in verify_arc_system(g, t, ArcSystem((arc,), {"c": 0, "l1": 1, "l2": 1}))}
        assert "inner-terminal" in kinds_


class TestFinite:
    @settings(max_examples=40, deadline=None)
    @given(eulerian_instances())
    def test_degenerates_to_pack_tpaths(self, inst):
        g, t = inst
        a, state = assemble_arcs(g, t, r=0)
        paths, _ = pack_tpaths(g, t)
        assert len(a) == len(paths)
        assert all(x.kind == "path" for x in a.arcs)
        assert verify_arc_system(g, t, a, state) == []

    def test_star4(self):
        t = ["l1", "l2", "l3", "l4"]
        a, _ = assemble_arcs(star(4), t, r=0)
        assert len(a) == 2 and set(a.per_terminal_counts.values()) == {1}

    def test_singleton(self):
        a, _ = assemble_arcs(cycle(3), ["v0"], r=0)
        assert len(a) == 0


class TestRefusals:
    def test_fig3_premise(self):
        g = build("fig3_tree")
        with pytest.raises(PreconditionError) as exc:
            assemble_arcs(g, resolve_terminals(g, "leaves", "fig3_tree"), r=3)
        assert exc.value.kind == "premise" and exc.value.witness["edges"] == ["h"]

    def test_fig3_window_bruteforce(self):
        g = build("fig3_tree")
        t = resolve_terminals(g, "leaves", "fig3_tree")
        assert [window_arc_bruteforce(g, t, r) for r in (1, 2, 3)] == [1, 1, 1]

    def test_not_discrete(self):
        g = build("dup_rung_ladder")
        with pytest.raises(PreconditionError) as exc:
            assemble_arcs(g, resolve_terminals(g, "ends,rail", "dup_rung_ladder"), r=4, r_max=6)
        assert exc.value.kind == "discreteness"

    def test_infinite_rule(self):
        g = build("even_ladder")
        with pytest.raises(DomainError, match="finite terminal set"):
            assemble_arcs(g, resolve_terminals(g, "rail", "even_ladder"), r=4)

    def test_string_terminals(self):
        with pytest.raises(DomainError):
            assemble_arcs(build("even_ladder"), "ends", r=4)

    def test_star3(self):
        with pytest.raises(PreconditionError):
            assemble_arcs(star(3), ["l1", "l2", "l3"], r=0)


class TestSeparatingCuts:
    def test_two_ends(self):
        g = build("even_ladder")
        pairs, minors = compute_separating_cuts(g, BOTH, r=4)
        assert [c.size for c, _ in pairs] == [2, 2]
        (_, c0), (_, c1) = pairs
        assert not c0 & c1
        assert "~left" in c0 and "~right" in c1
        assert contraction_name(0) in minors[1].minor

    def test_single_end(self):
        g = build("even_ladder")
        t = TerminalSpec(frozenset({"a@0"}), ("right",))
        pairs, _ = compute_separating_cuts(g, t, r=4)
        assert len(pairs) == 1 and pairs[0][0].size == lambda_end(g, RIGHT, ["a@0"]).value

    def test_no_ends(self):
        pairs, minors = compute_separating_cuts(star(4), ["l1", "l2"], r=0)
        assert pairs == [] and minors == []

    def test_final_minor(self):
        g = build("even_ladder")
        t = TerminalSpec(frozenset({"a@0"}), ("left", "right"))
        a, state = assemble_arcs(g, t, r=6)
        cm, image = build_final_minor(state.window, t, state.components)
        assert image == {"a@0": "a@0", LEFT: "~v0", RIGHT: "~v1"}
        assert set(cm.super_vertices) == {"~v0", "~v1"}
        assert cm.minor.degree("~v0") == state.cuts[0].size


class TestMu:
    @pytest.mark.parametrize("r", [8, 10])
    def test_example_12(self, r):
        g = build("dup_rung_ladder")
        t = resolve_terminals(g, "ends,rail", "dup_rung_ladder")
        v = mu_estimate(g, "a@0", t.without("a@0"), r)
        e = mu_estimate(g, LEFT, t.without(LEFT), r)
        assert (v.value, e.value) == (4, 1)
        assert v.stabilized and e.stabilized

    def test_double_ladder_end(self):
        g = build("double_ladder")
        assert mu_estimate(g, RIGHT, [LEFT], 6).value == 2

    def test_rest_must_exclude_t(self):
        with pytest.raises(DomainError):
            mu_estimate(build("double_ladder"), RIGHT, [RIGHT, LEFT], 3)
