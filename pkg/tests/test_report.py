import json

from cubulate._order import format_id, sorted_ids
from cubulate.report import FAIL, NOT_APPLICABLE, PASS, Report, combine, jsonable


def test_mixed_ids_sort_deterministically():
    ids = ["b10", "b2", 3, (1, "a"), "a", 1, (0, 5)]
    assert sorted_ids(ids) == [1, 3, "a", "b2", "b10", (0, 5), (1, "a")]


def test_format_id():
    assert format_id((1, (2, "x"))) == "(1,(2,x))"
    assert format_id(frozenset({2, 1})) == "{1,2}"


def test_combine_propagates_failure():
    ok = Report("a", PASS)
    na = Report("b", NOT_APPLICABLE)
    bad = Report("c", FAIL, witnesses=[("x", "y")])
    assert combine("all", [ok, na]).status == PASS
    top = combine("all", [ok, combine("inner", [bad])])
    assert top.failed and top.status == FAIL
    assert list(top.lines()) == ["all: FAIL", "  a: PASS", "  inner: FAIL", "    c: FAIL"]


def test_reports_serialise_with_string_ids():
    rep = Report("r", FAIL, witnesses=[((0, 1), (1, 1))], counts={"n": 2},
                 details={(0, 1): {1, 0}})
    data = json.loads(json.dumps(jsonable(rep)))
    assert data["witnesses"] == [[[0, 1], [1, 1]]]
    assert data["details"] == {"(0,1)": [0, 1]}
    assert "children" not in data
