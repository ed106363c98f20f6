import json

import pytest
from hypothesis import given

from strategies import multigraphs
from tpack.ends import Presentation
from tpack.errors import DomainError, PresentationError
from tpack.io import dumps, graph_from_json, graph_to_json, load, load_file, to_dot
from tpack.zoo import DOUBLE_LADDER, star


def test_loop_is_rejected_by_name():
    with pytest.raises(DomainError, match="'bad'"):
        graph_from_json({"edges": [["ok", "a", "b"], ["bad", "b", "b"]]})


@pytest.mark.parametrize("data", [{}, {"edges": [["e", "a"]]}, {"edges": [["e", "a", 1.5]]}, {"edges": [[True, 1, 2]]}])
def test_malformed(data):
    with pytest.raises(DomainError):
        graph_from_json(data)


@given(multigraphs())
def test_round_trip(g):
    assert graph_from_json(json.loads(dumps(graph_to_json(g)))) == g


def test_presentation_file(tmp_path):
    p = tmp_path / "ladder.json"
    p.write_text(json.dumps(DOUBLE_LADDER))
    g = load_file(p)
    assert isinstance(g, Presentation) and list(g.ends) == ["left", "right"]


def test_bad_files(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    with pytest.raises(DomainError, match="x.json"):
        load_file(p)
    p.write_text(json.dumps({**DOUBLE_LADDER, "glue": []}))
    with pytest.raises(PresentationError, match="x.json"):
        load_file(p)


def test_load_finite():
    g = load({"vertices": ["z"], "edges": [[1, "a", "b"]]})
    assert set(g.vertices) == {"z", "a", "b"} and g.number_of_edges() == 1


def test_dumps_canonical():
    assert dumps({"b": 1, "a": [1]}) == '{\n  "a": [\n    1\n  ],\n  "b": 1\n}\n'


def test_dot():
    dot = to_dot(star(3), "s", cuts=[{"e1"}], arcs=[["e2", "e3"]], terminals=["l1"])
    assert dot.startswith('graph "s" {') and dot.endswith("}\n")
    assert '"l1" [shape=box];' in dot
    assert 'label="e1" style=dashed fontcolor=red color=red' in dot
    assert 'label="e2" color=blue penwidth=2' in dot
