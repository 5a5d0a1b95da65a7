from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formal_kuranishi.linalg import (
    Matrix,
    NoSolution,
    as_rational,
    column_space_basis,
    extend_basis,
    kernel_basis,
    kernel_free_columns,
    rank,
    rref,
    solve,
    sparse_kernel,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    entries = draw(st.lists(st.one_of(st.just(Fraction(0)), rationals), min_size=r * c, max_size=r * c))
    return Matrix(r, c, entries)


def test_as_rational_accepts_exact_inputs():
    assert as_rational("3/6") == Fraction(1, 2)
    assert as_rational(" -2 ") == -2
    assert as_rational(7) == 7
    assert as_rational(Fraction(2, 3)) == Fraction(2, 3)


@pytest.mark.parametrize("bad", [0.5, True, None, [1]])
def test_as_rational_refuses_inexact_or_foreign(bad):
    with pytest.raises(TypeError):
        as_rational(bad)


def test_matrix_basics():
    m = Matrix.from_rows([[1, 2], [3, 4]])
    assert m.shape == (2, 2)
    assert m[1, 0] == 3
    assert m.T == Matrix.from_rows([[1, 3], [2, 4]])
    assert m @ Matrix.identity(2) == m
    assert (m - m).is_zero()
    assert m.apply([1, 1]) == (3, 7)
    assert Matrix.from_columns([[1, 3], [2, 4]], 2) == m
    with pytest.raises(ValueError):
        Matrix.from_rows([[1], [1, 2]])
    with pytest.raises(ValueError):
        m @ Matrix.zeros(3, 1)


def test_rref_known_matrix():
    m = Matrix.from_rows([[0, 2, 4], [1, 1, 1], [1, 3, 5]])
    reduced, pivots, t = rref(m)
    assert pivots == [0, 1]
    assert reduced == Matrix.from_rows([[1, 0, -1], [0, 1, 2], [0, 0, 0]])
    assert t @ m == reduced


def test_kernel_uses_free_columns():
    m = Matrix.from_rows([[1, 2, 3]])
    k = kernel_basis(m)
    assert kernel_free_columns(m) == [1, 2]
    assert k == Matrix.from_columns([[-2, 1, 0], [-3, 0, 1]], 3)


def test_solve_and_no_solution():
    m = Matrix.from_rows([[1, 1], [2, 2]])
    assert solve(m, [1, 2]) == (1, 0)
    with pytest.raises(NoSolution):
        solve(m, [1, 0])


def test_extend_basis_is_greedy():
    base = Matrix.from_columns([[1, 0, 0]], 3)
    cands = Matrix.from_columns([[2, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]], 3)
    assert extend_basis(base, cands) == [1, 3]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel(m):
    k = kernel_basis(m)
    assert rank(m) + k.cols == m.cols
    assert (m @ k).is_zero() if m.rows and k.cols else True
    if k.cols:
        assert rank(k) == k.cols


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_transform_reproduces(m):
    reduced, pivots, t = rref(m)
    assert t @ m == reduced
    basis, idx = column_space_basis(m)
    assert idx == pivots
    assert rank(basis) == len(pivots)


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_finds_preimages(m, data):
    x = data.draw(st.lists(rationals, min_size=m.cols, max_size=m.cols))
    b = m.apply(x)
    y = solve(m, b)
    assert m.apply(y) == b


@settings(max_examples=60, deadline=None)
@given(matrices(max_rows=6, max_cols=7))
def test_sparse_kernel_matches_dense(m):
    cols = [{i: m[i, j] for i in range(m.rows) if m[i, j]} for j in range(m.cols)]
    kernel = sparse_kernel(cols)
    assert len(kernel) == m.cols - rank(m)
    for j, comb in kernel:
        assert comb[j] == 1 and max(comb) == j
        assert all(isinstance(x, Fraction) for x in comb.values())
        for i in range(m.rows):
            assert sum(m[i, c] * x for c, x in comb.items()) == 0
    # prefix property: kernel of the first m columns
    for p in range(m.cols + 1):
        sub = m.submatrix(range(m.rows), range(p))
        assert sum(1 for j, _ in kernel if j < p) == p - rank(sub)
