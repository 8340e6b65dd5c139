import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgtemplates import INF, instance_merge, validate
from pgtemplates.io import DocumentError, parse, serialize, to_dict
from pgtemplates.loops import build_cross_correlation, build_matmul, validate_program
from pgtemplates.samples import ex_path, ex_sib, figure_one, random_template


def round_trip(obj):
    text = serialize(obj)
    doc = parse(text)
    assert serialize(doc) == text
    return doc


def test_fixtures_round_trip():
    for pgt in (figure_one(), ex_path(2**70), ex_sib()):
        doc = round_trip(pgt)
        assert doc.kinds is None
        assert validate(doc.pgt) == []


def test_big_parameter_is_a_string():
    data = to_dict(ex_path(2**70))
    assert data["templates"]["children"][0]["parameter"] == str(2**70)


def test_program_round_trip():
    doc = round_trip(build_matmul(2, 3, 2))
    assert validate_program(doc.program) == []
    a1 = next(v for v in json.loads(serialize(doc))["vertices"] if v["id"] == "A1")
    assert a1 == {"id": "A1", "kind": "input", "dims": 2, "sizes": [2, 3]}


def test_ranks_and_kinds_survive():
    lp = build_cross_correlation(4, 2)
    doc = parse(serialize(lp))
    assert doc.kinds == lp.kinds
    assert sorted((e.src, e.dst, e.rank) for e in doc.pgt.edges) == sorted((e.src, e.dst, e.rank) for e in lp.pgt.edges)


def test_dummies_and_infinite_weights():
    merged, _ = instance_merge(figure_one(), "e")
    doc = round_trip(merged)
    assert doc.pgt.dummies == merged.dummies
    assert any(e.weight is INF for e in doc.pgt.edges)
    assert validate(doc.pgt) == []


def test_sibling_specs():
    data = to_dict(ex_sib())
    sib = [e["sibling"] for e in data["edges"] if "sibling" in e]
    assert sib == [{"type": "cyclic_shift", "delta": 1}]


def test_input_order_irrelevant():
    data = to_dict(figure_one())
    data["vertices"].reverse()
    data["edges"].reverse()
    assert serialize(parse(json.dumps(data))) == serialize(figure_one())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_random_round_trip(seed, siblings):
    round_trip(random_template(random.Random(seed), siblings=siblings))


@pytest.mark.parametrize(
    "text",
    [
        "{",
        "[]",
        '{"vertices": [], "edges": []}',
        '{"vertices": [{"id": "a"}], "edges": [], "templates": {"id": "T0", "parameter": 1, "vertices": ["a"], "children": []}}',
        '{"vertices": [{"id": "a"}], "edges": [{"src": "a", "dst": "a", "weight": 2}], '
        '"templates": {"id": "T0", "parameter": "1", "vertices": ["a"], "children": []}}',
        '{"vertices": [{"id": "a"}], "edges": [{"src": "a", "dst": "a", "weight": "-2"}], '
        '"templates": {"id": "T0", "parameter": "1", "vertices": ["a"], "children": []}}',
        '{"vertices": [{"id": "a", "kind": "spoon"}], "edges": [], '
        '"templates": {"id": "T0", "parameter": "1", "vertices": ["a"], "children": []}}',
        '{"vertices": [], "edges": [], "templates": {}, "extra": 1}',
    ],
)
def test_malformed(text):
    with pytest.raises(DocumentError):
        parse(text)
