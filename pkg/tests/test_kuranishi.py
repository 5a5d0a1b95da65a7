import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_obstructed, random_two_term
from formal_kuranishi.contraction import build_contraction
from formal_kuranishi.kuranishi import (
    analyze,
    classifying_kernel,
    kuranishi_map,
    variable_name,
)
from formal_kuranishi.linalg import Matrix, rank


def test_variable_names():
    assert variable_name("s·[v]") == "v"
    assert variable_name("s·u") == "u"
    assert variable_name("x") == "x"


def test_circle_kuranishi_map(circle):
    g, c = circle
    m = kuranishi_map(g, c)
    assert m.J.format(["v", "u"]) == {"s·w": "u + v^2 + u^2"}
    assert m.F.format(["v", "u"]) == {"s·u": "u + v^2 + u^2", "s·v": "v"}


def test_circle_inverse_and_coalgebra(circle):
    g, c = circle
    r = analyze(g, 6, c)
    assert r.verification.ok
    assert r.inverse.format(["v"]) == {"s·u": "-v^2 - v^4 - 2*v^6", "s·v": "v"}
    assert r.obstructions == []
    assert r.coalgebra.word_length_dims() == [1] * 7
    assert r.cv_kernel.filtration_dims() == list(range(1, 8))


def test_obstruction_series(obstruction):
    g, c = obstruction
    r = analyze(g, 6, c)
    assert r.verification.ok
    [(target, series)] = r.obstructions
    assert target == "s·[y]"
    assert series.format(["x"]) == "1/2*x^2"
    assert r.coalgebra.word_length_dims() == [1, 1, 0, 0, 0, 0, 0]


def test_requires_two_term_algebra(corpus):
    g = corpus["fourterm"].to_dgla()
    with pytest.raises(ValueError):
        analyze(g, 4)
    with pytest.raises(ValueError):
        classifying_kernel(g, 4)


def in_span(vectors, v) -> bool:
    keys = sorted({k for w in vectors + [v] for k in w})
    cols = [[w.get(k, 0) for k in keys] for w in vectors]
    if not keys:
        return True
    base = Matrix.from_columns(cols, len(keys)) if cols else Matrix.zeros(len(keys), 0)
    both = Matrix.from_columns(cols + [[v.get(k, 0) for k in keys]], len(keys))
    return rank(both) == (rank(base) if cols else 0)


def assert_subcoalgebra(r):
    C = r.cochain.coalgebra
    vectors = r.coalgebra.vectors
    for v in vectors:
        slices: dict = {}
        for e, x in v.items():
            for L, R, s in C.splits(e):
                w = slices.setdefault(R, {})
                w[L] = w.get(L, 0) + s * x
        for w in slices.values():
            w = {k: y for k, y in w.items() if y}
            if w:
                assert in_span(vectors, w)


def test_kuranishi_coalgebra_is_subcoalgebra(circle, obstruction):
    for g, c in (circle, obstruction):
        assert_subcoalgebra(analyze(g, 5, c))


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 10_000))
def test_random_obstructed_correspondence_checks(seed):
    g = random_obstructed(seed)
    r = analyze(g, 4)
    assert r.verification.ok, r.verification.to_dict()
    assert r.coalgebra.filtration_dims() == r.cv_kernel.filtration_dims()
    assert_subcoalgebra(r)


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 10_000))
def test_report_dimensions_are_prefix_stable(seed):
    g = random_two_term(seed, max_dim=2)
    c, _ = build_contraction(g.complex)
    small, big = analyze(g, 3, c, verify=False), analyze(g, 5, c, verify=False)
    assert big.coalgebra.filtration_dims()[:4] == small.coalgebra.filtration_dims()
    assert big.inverse.coefficients().keys() >= small.inverse.coefficients().keys()
    for exp, v in small.inverse.coefficients().items():
        assert big.inverse.coefficient(exp) == v
