from dataclasses import replace

import pytest
from hypothesis import given

from oracles import nx_cut_value
from strategies import eulerian_instances, graph_with_terminals
from tpack.errors import DomainError, PreconditionError, RefusalError
from tpack.multigraph import Cut, MultiGraph, Path
from tpack.packing import (
    PathSystem,
    brute_force_pack,
    enumerate_tpaths,
    is_inner_eulerian,
    lambda_profile,
    pack_tpaths,
    verify_packing,
)
from tpack.zoo import cycle, parallel, path_graph, star

LEAVES3 = ["l1", "l2", "l3"]
LEAVES4 = ["l1", "l2", "l3", "l4"]


class TestInnerEulerian:
    def test_star3_fails_at_centre(self):
        v = is_inner_eulerian(star(3), LEAVES3)
        assert not v.holds and v.witness == "c"

    def test_star4_and_path(self):
        assert is_inner_eulerian(star(4), LEAVES4).holds
        assert is_inner_eulerian(path_graph(3), ["v0", "v2"]).holds


class TestLambda:
    def test_examples(self):
        assert lambda_profile(star(4), LEAVES4) == {l: 1 for l in LEAVES4}
        assert lambda_profile(cycle(4), ["v0", "v2"]) == {"v0": 2, "v2": 2}
        assert lambda_profile(parallel(3), ["u", "v"]) == {"u": 3, "v": 3}

    def test_singleton_rejected(self):
        with pytest.raises(DomainError):
            lambda_profile(star(2), ["l1"])

    @given(graph_with_terminals())
    def test_matches_networkx(self, inst):
        g, t = inst
        prof = lambda_profile(g, t)
        for s in t:
            assert prof[s] == nx_cut_value(g, {s}, t - {s})


class TestPack:
    def test_path(self):
        p, _ = pack_tpaths(path_graph(3), ["v0", "v2"])
        assert [q.vertices for q in p] == [("v0", "v1", "v2")]

    def test_star4(self):
        g = star(4)
        p, c = pack_tpaths(g, LEAVES4)
        assert len(p) == brute_force_pack(g, LEAVES4).max_count == 2
        assert c.bound == 2
        assert verify_packing(g, LEAVES4, p, c) == []

    def test_c4_opposite(self):
        g = cycle(4)
        p, c = pack_tpaths(g, ["v0", "v2"])
        assert len(p) == brute_force_pack(g, ["v0", "v2"]).max_count == 2
        assert {q.vertices for q in p} == {("v0", "v1", "v2"), ("v0", "v3", "v2")}

    def test_star3_rejected_with_centre(self):
        with pytest.raises(PreconditionError) as exc:
            pack_tpaths(star(3), LEAVES3)
        assert exc.value.witness == "c"

    def test_singleton_gives_empty_packing(self):
        p, _ = pack_tpaths(cycle(3), ["v0"])
        assert len(p) == 0

    def test_disconnected_components(self):
        g = MultiGraph("abcd", [("x", "a", "b"), ("y", "c", "d")])
        p, c = pack_tpaths(g, "abcd")
        assert len(p) == 2 and verify_packing(g, "abcd", p, c) == []

    @given(eulerian_instances())
    def test_structural_law_and_verification(self, inst):
        g, t = inst
        p, c = pack_tpaths(g, t)
        prof = lambda_profile(g, t)
        assert 2 * len(p) == sum(prof.values())
        for s in t:
            assert p.count_at(s) == prof[s]
        assert verify_packing(g, t, p, c) == []

    @given(eulerian_instances())
    def test_deterministic(self, inst):
        g, t = inst
        assert pack_tpaths(g, t) == pack_tpaths(MultiGraph(g.vertices, g.edge_list()), set(t))


class TestBruteForce:
    def test_examples(self):
        r = brute_force_pack(star(3), LEAVES3)
        assert r.max_count == 1 and r.per_terminal == {l: 1 for l in LEAVES3}
        assert brute_force_pack(star(4), LEAVES4).max_count == 2
        assert brute_force_pack(path_graph(2), ["v0", "v1"]).max_count == 1

    def test_guard(self):
        with pytest.raises(RefusalError):
            brute_force_pack(parallel(13), ["u", "v"])
        assert brute_force_pack(parallel(13), ["u", "v"], max_edges=13).max_count == 13

    def test_enumeration_small(self):
        # the three leaf pairs of K_{1,3}
        assert len(enumerate_tpaths(star(3), LEAVES3)) == 3

    @given(graph_with_terminals(max_vertices=5, max_edges=8))
    def test_upper_bound_and_per_terminal(self, inst):
        g, t = inst
        r = brute_force_pack(g, t)
        prof = lambda_profile(g, t)
        assert 2 * r.max_count <= sum(prof.values())
        assert r.per_terminal == prof  # Menger per terminal


class TestVerify:
    def setup_method(self):
        self.g = star(4)
        self.p, self.c = pack_tpaths(self.g, LEAVES4)

    def test_shared_edge(self):
        a, b = self.p.paths
        bad = PathSystem((a, Path(("l3", "c", "l1"), ("e3", "e1"))))
        kinds = {(v.kind, v.where) for v in verify_packing(self.g, LEAVES4, bad, self.c)}
        assert ("shared-edge", "e1") in kinds

    def test_cut_off_paths(self):
        cut = Cut.from_side(self.g, set(self.g.vertices) - {"l2"})
        cuts = dict(self.c.per_terminal_cuts)
        cuts["l1"] = Cut(cut.edges, frozenset({"l1", "c", "l3", "l4"}) - {"l2"}, frozenset({"l2"}))
        bad = replace(self.c, per_terminal_cuts=cuts)
        kinds = {v.kind for v in verify_packing(self.g, LEAVES4, self.p, bad)}
        assert kinds & {"cut-not-on-paths", "cut-not-separating"}

    def test_certificate_edge_off_system(self):
        cuts = dict(self.c.per_terminal_cuts)
        # a cut around l1 from the far side: same size, but edge set of another path
        cuts["l1"] = Cut(frozenset({"e2"}), frozenset({"l1", "c", "l3", "l4"}), frozenset({"l2"}))
        bad = replace(self.c, per_terminal_cuts=cuts)
        kinds = {v.kind for v in verify_packing(self.g, LEAVES4, self.p, bad)}
        assert "cut-not-on-paths" in kinds or "cut-not-separating" in kinds

    def test_count_mismatch(self):
        bad = PathSystem(self.p.paths[:1])
        kinds = {v.kind for v in verify_packing(self.g, LEAVES4, bad, self.c)}
        assert "count-mismatch" in kinds


def test_splitting_search_never_dead_ends_on_corpus(monkeypatch):
    """Local pair rejections happen, but no split sequence ever has to be undone."""
    import tpack.packing as packing
    from corpus import connected_graphs, terminal_sets

    stats = {"rejected": 0, "dead_ends": 0}
    admissible, run = packing._Splitter.admissible, packing._Splitter.run

    def counting_admissible(self):
        ok = admissible(self)
        stats["rejected"] += not ok
        return ok

    def counting_run(self):
        ok = run(self)
        stats["dead_ends"] += not ok
        return ok

    monkeypatch.setattr(packing._Splitter, "admissible", counting_admissible)
    monkeypatch.setattr(packing._Splitter, "run", counting_run)
    for g in connected_graphs(5, 8):
        for t in terminal_sets(g):
            if packing.is_inner_eulerian(g, t).holds:
                packing.pack_tpaths(g, t)
    assert stats == {"rejected": 981, "dead_ends": 0}
