import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CORPUS, random_two_term
from formal_kuranishi.contraction import build_contraction, validate_contraction
from formal_kuranishi.problem import (
    ParseError,
    example_names,
    example_text,
    load_example,
    load_problem,
    parse_problem,
)

CIRCLE = {
    "name": "circle",
    "degrees": {"-1": ["v", "u"], "-2": ["w"]},
    "differential": [["u", "w", "-1"]],
    "bracket": [{"pair": ["v", "v"], "result": [["w", "2"]]}],
}


def spec_text(**changes) -> str:
    obj = dict(CIRCLE)
    obj.update(changes)
    return json.dumps(obj)


def test_corpus_listing():
    assert example_names() == sorted(CORPUS)
    assert example_text("circle.spec") == example_text("circle")
    with pytest.raises(KeyError):
        example_text("nope")


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_round_trips(name):
    spec = load_example(name)
    again = parse_problem(spec.dumps())
    assert again == spec
    assert again.dumps() == spec.dumps()


def algebra_to_json(g) -> str:
    return json.dumps({
        "name": "random",
        "degrees": {str(j): list(g.space.labels(j)) for j in g.space.degrees},
        "differential": [[s, t, str(c)] for s, col in g.d.columns.items() for t, c in col.items()],
        "bracket": [{"pair": list(p), "result": [[k, str(c)] for k, c in v.items()]}
                    for p, v in g.upper_entries().items()],
    })


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_random_algebras_round_trip(seed):
    g = random_two_term(seed)
    spec = parse_problem(algebra_to_json(g))
    assert spec.to_dgla() == g
    assert parse_problem(spec.dumps()) == spec


def test_bracket_pairs_are_normalized_by_antisymmetry():
    spec = parse_problem(spec_text(
        degrees={"-1": ["v", "u"], "-2": ["w"]},
        bracket=[{"pair": ["u", "v"], "result": [["w", "3"]]}]))
    g = spec.to_dgla()
    assert g.bracket_basis("v", "u") == {"w": 3}
    with pytest.raises(ParseError, match="given twice"):
        parse_problem(spec_text(bracket=[{"pair": ["u", "v"], "result": [["w", 1]]},
                                         {"pair": ["v", "u"], "result": [["w", 1]]}]))


def test_given_contraction_is_used():
    text = spec_text(contraction={
        "homology": {"-1": ["H"]},
        "nabla": [["H", "v", "1"]],
        "pi": [["v", "H", "1"]],
        "h": [["w", "u", "-1"]],
    })
    spec = parse_problem(text)
    g = spec.to_dgla()
    c = spec.to_contraction(g)
    assert validate_contraction(c).ok
    assert c.h.columns == build_contraction(g.complex)[0].h.columns
    assert parse_problem(spec.dumps()) == spec


@pytest.mark.parametrize("text, message", [
    ("{", "<input>:1:2"),
    ('{"name": "x"}', "missing field 'degrees'"),
    ("[]", "top level must be an object"),
    (spec_text(field="R"), "field must be"),
    (spec_text(max_degree=0), "max_degree"),
    (spec_text(colour="red"), "unknown field"),
    (spec_text(degrees={"a": ["v"]}), "not an integer"),
    (spec_text(degrees={"-1": ["v", "v"]}), "duplicate label"),
    (spec_text(differential=[["u", "q", "1"]]), "unknown target label"),
    (spec_text(differential=[["u", "w", 1.5]]), "differential\\[0\\]"),
    (spec_text(bracket=[{"pair": ["v"], "result": []}]), "expected two labels"),
    (spec_text(bracket=[{"pair": ["v", "v"], "result": [["z", 1]]}]), "unknown label"),
])
def test_parse_errors_name_the_location(text, message):
    with pytest.raises(ParseError, match=message):
        parse_problem(text)


def test_load_problem_reports_missing_file(tmp_path):
    with pytest.raises(ParseError, match="missing.spec"):
        load_problem(tmp_path / "missing.spec")
    path = tmp_path / "c.spec"
    path.write_text(spec_text())
    assert load_problem(path).name == "circle"


def test_inconsistent_differential_is_a_value_error():
    spec = parse_problem(json.dumps({
        "name": "bad", "degrees": {"0": ["a"], "-1": ["b"], "-2": ["c"]},
        "differential": [["a", "b", 1], ["b", "c", 1]]}))
    with pytest.raises(ValueError):
        spec.to_dgla()
