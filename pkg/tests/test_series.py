from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formal_kuranishi.series import TruncatedSeries, VectorSeries, identity_series

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def series(draw, nvars=2, order=4):
    exps = st.tuples(*[st.integers(0, order)] * nvars)
    return TruncatedSeries(nvars, order, draw(st.dictionaries(exps, rationals, max_size=6)))


def test_format():
    v = TruncatedSeries.variable(1, 6, 0)
    s = (v * v).scale(-1) - v * v * v * v - (v * v * v * v * v * v).scale(2)
    assert s.format(["v"]) == "-v^2 - v^4 - 2*v^6"
    t = TruncatedSeries(2, 3, {(1, 1): Fraction(1, 2), (0, 0): 3})
    assert t.format(["x", "y"]) == "3 + 1/2*x*y"
    assert TruncatedSeries(1, 2).format(["x"]) == "0"


def test_truncation_drops_high_terms():
    v = TruncatedSeries.variable(1, 3, 0)
    assert (v * v * v * v).is_zero()
    assert TruncatedSeries(1, 2, {(3,): 1}).is_zero()
    assert TruncatedSeries(1, 4, {(1,): 1, (4,): 2}).truncate(2) == TruncatedSeries(1, 2, {(1,): 1})
    with pytest.raises(ValueError):
        v + TruncatedSeries.variable(1, 4, 0)
    with pytest.raises(ValueError):
        TruncatedSeries(2, 3, {(1,): 1})


@settings(max_examples=60, deadline=None)
@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()
    one = TruncatedSeries.constant(2, 4, 1)
    assert a * one == a


@settings(max_examples=40, deadline=None)
@given(series(), series())
def test_vector_series_quadratic_substitution(a, b):
    x = VectorSeries(("z1", "z2"), 4, {"p": a, "q": b})
    out = x.apply_quadratic({("p", "q"): {"r": 2}, ("p", "p"): {"r": Fraction(1, 2), "s": 1}})
    assert out.component("r") == (a * b).scale(2) + (a * a).scale(Fraction(1, 2))
    assert out.component("s") == a * a
    twice = x.apply_linear(lambda v: {k: 2 * c for k, c in v.items()})
    assert twice == x + x
    assert VectorSeries.from_coefficients(x.variables, 4, x.coefficients()) == x


def test_identity_series():
    s = identity_series(["a", "b"], 3, ["s·a", "s·b"])
    assert s.coefficient((1, 0)) == {"s·a": 1}
    assert s.format(["a", "b"]) == {"s·a": "a", "s·b": "b"}
