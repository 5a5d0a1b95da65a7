"""Dense exact linear algebra over the rationals.

Entries are :class:`fractions.Fraction`; nothing here ever rounds.
Pivoting always takes the first nonzero entry in column order so that
every derived basis (kernels, complements, splittings) is reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover - pure-Python fallback
    _mpq = Fraction

Rational = Fraction

__all__ = [
    "Rational",
    "Matrix",
    "NoSolution",
    "as_rational",
    "rref",
    "rank",
    "kernel_basis",
    "solve",
    "column_space_basis",
    "extend_basis",
    "sparse_kernel",
]


class NoSolution(ValueError):
    """Raised by :func:`solve` when the right-hand side is not in the image."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they would smuggle rounding into the pipeline.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


class Matrix:
    """Immutable row-major matrix of Fractions."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        data = tuple(as_rational(x) for x in entries)
        if not data:
            data = (Fraction(0),) * (rows * cols)
        if len(data) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
        self.rows = rows
        self.cols = cols
        self._data = data

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = [list(c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise ValueError("ragged columns")
        return cls(rows, len(columns), [columns[j][i] for i in range(rows) for j in range(len(columns))])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    # access -------------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self._data[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_zero(self) -> bool:
        return not any(self._data)

    # arithmetic ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self._data, other._data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.rows, self.cols, [a - b for a, b in zip(self._data, other._data)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [-a for a in self._data])

    def scale(self, c) -> "Matrix":
        c = as_rational(c)
        return Matrix(self.rows, self.cols, [c * a for a in self._data])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        ocols = [other.column(j) for j in range(other.cols)]
        for i in range(self.rows):
            r = self.row(i)
            for c in ocols:
                out.append(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)))
        return Matrix(self.rows, other.cols, out)

    def apply(self, vector: Sequence) -> tuple[Fraction, ...]:
        if len(vector) != self.cols:
            raise ValueError("vector length does not match column count")
        vec = [as_rational(x) for x in vector]
        return tuple(
            sum((a * b for a, b in zip(self.row(i), vec) if a and b), Fraction(0))
            for i in range(self.rows)
        )

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    T = property(transpose)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return Matrix.from_rows([list(self.row(i)) + list(other.row(i)) for i in range(self.rows)],
                                self.cols + other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return Matrix(self.rows + other.rows, self.cols, self._data + other._data)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def _check_same(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def rref(m: Matrix) -> tuple[Matrix, list[int], Matrix]:
    """Reduced row-echelon form.

    Returns ``(reduced, pivots, transform)`` with ``transform @ m == reduced``.
    """
    a = m.to_rows()
    t = Matrix.identity(m.rows).to_rows()
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        p = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            t[r], t[p] = t[p], t[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        t[r] = [x * inv for x in t[r]]
        for i in range(m.rows):
            f = a[i][c]
            if i != r and f != 0:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                t[i] = [x - f * y for x, y in zip(t[i], t[r])]
        pivots.append(c)
        r += 1
    return Matrix.from_rows(a, m.cols), pivots, Matrix.from_rows(t, m.rows)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Columns spanning ``ker m``; one column per free variable, in column order.

    Each returned column has a 1 at its free variable and 0 at the other free
    variables.
    """
    reduced, pivots, _ = rref(m)
    free = [j for j in range(m.cols) if j not in pivots]
    cols = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -reduced[r, f]
        cols.append(v)
    return Matrix.from_columns(cols, m.cols)


def kernel_free_columns(m: Matrix) -> list[int]:
    """Free-variable indices matching the columns of :func:`kernel_basis`."""
    pivots = rref(m)[1]
    return [j for j in range(m.cols) if j not in pivots]


def solve(m: Matrix, b: Sequence) -> tuple[Fraction, ...]:
    """Particular solution of ``m x = b`` with free variables set to zero."""
    if len(b) != m.rows:
        raise ValueError("right-hand side length does not match row count")
    reduced, pivots, t = rref(m)
    tb = t.apply(b)
    for r in range(len(pivots), m.rows):
        if tb[r] != 0:
            raise NoSolution("right-hand side is not in the image")
    x = [Fraction(0)] * m.cols
    for r, p in enumerate(pivots):
        x[p] = tb[r]
    return tuple(x)


def column_space_basis(m: Matrix) -> tuple[Matrix, list[int]]:
    """Independent columns of ``m`` spanning its image, and their indices."""
    pivots = rref(m)[1]
    return m.submatrix(range(m.rows), pivots), pivots


def extend_basis(base: Matrix, candidates: Matrix) -> list[int]:
    """Indices of the candidate columns that greedily extend ``base`` to a
    basis of ``span(base) + span(candidates)``."""
    if base.rows != candidates.rows:
        raise ValueError("ambient dimension mismatch")
    stacked = base.hstack(candidates) if base.cols else candidates
    pivots = rref(stacked)[1]
    return [p - base.cols for p in pivots if p >= base.cols]


def _height(x) -> int:
    return abs(x.numerator) + x.denominator


def sparse_kernel(columns: Sequence) -> list[tuple[int, dict]]:
    """Kernel of a matrix given by sparse columns ``{row key: value}``.

    Columns are eliminated in order; each column that depends on the earlier
    ones yields ``(index, {column index: coefficient})``, a kernel vector
    whose last nonzero entry is 1 at ``index``. The kernel of the first
    ``m`` columns is therefore spanned by the vectors with ``index < m``.

    Each new pivot is the entry of least height, which keeps coefficient
    growth in check; arithmetic uses gmpy2 rationals when available.
    """
    pivots: list[tuple[object, dict, dict]] = []
    kernel = []
    one = _mpq(1)
    for j, column in enumerate(columns):
        v = {k: _mpq(as_rational(x)) for k, x in column.items() if x}
        comb = {j: one}
        for p, r, c in pivots:
            f = v.get(p)
            if not f:
                continue
            f = f / r[p]
            for k, x in r.items():
                y = v.get(k, 0) - f * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
            for k, x in c.items():
                y = comb.get(k, 0) - f * x
                if y:
                    comb[k] = y
                else:
                    comb.pop(k, None)
        if v:
            pivots.append((min(v, key=lambda k: _height(v[k])), v, comb))
        else:
            kernel.append((j, {k: Fraction(int(x.numerator), int(x.denominator)) for k, x in comb.items()}))
    return kernel
