"""Finitely supported Z-graded vector spaces, homogeneous maps, chain complexes.

Vectors are sparse ``{label: Fraction}`` dictionaries with zero entries
dropped. Labels are unique across the whole space, so a label determines
its degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .linalg import Matrix, as_rational, extend_basis, kernel_basis, kernel_free_columns, rref

SUSPENSION_PREFIX = "s·"

Vector = dict  # {label: Fraction}


# sparse vectors --------------------------------------------------------------

def vec(items: Iterable[tuple[str, object]] | Mapping[str, object] = ()) -> dict:
    if isinstance(items, Mapping):
        items = items.items()
    out: dict = {}
    for k, v in items:
        v = as_rational(v)
        if v:
            out[k] = out.get(k, Fraction(0)) + v
            if not out[k]:
                del out[k]
    return out


def vadd(target: dict, other: Mapping, coeff=1) -> dict:
    """In-place ``target += coeff * other``; returns target."""
    if not coeff:
        return target
    for k, v in other.items():
        x = target.get(k, 0) + coeff * v
        if x:
            target[k] = x
        else:
            target.pop(k, None)
    return target


def vscale(v: Mapping, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vsum(vectors: Iterable[Mapping]) -> dict:
    out: dict = {}
    for v in vectors:
        vadd(out, v)
    return out


def suspend_label(label: str) -> str:
    return SUSPENSION_PREFIX + label


def desuspend_label(label: str) -> str:
    if not label.startswith(SUSPENSION_PREFIX):
        raise ValueError(f"{label!r} is not a suspended label")
    return label[len(SUSPENSION_PREFIX):]


# graded spaces -----------------------------------------------------------------

class GradedSpace:
    """Ordered basis labels per integer degree.

    Iteration order over all labels is by descending degree, then by the
    order the labels were given in; this is the "label order" used wherever
    a canonical ordering of basis elements is needed.
    """

    __slots__ = ("_basis", "_degree_of", "_index", "_order")

    def __init__(self, basis: Mapping[int, Iterable[str]]):
        clean: dict[int, tuple[str, ...]] = {}
        degree_of: dict[str, int] = {}
        for j in sorted(basis, reverse=True):
            labels = tuple(basis[j])
            if not labels:
                continue
            for lab in labels:
                if not isinstance(lab, str) or not lab:
                    raise ValueError(f"basis labels must be nonempty strings, got {lab!r}")
                if lab in degree_of:
                    raise ValueError(f"duplicate basis label {lab!r}")
                degree_of[lab] = int(j)
            clean[int(j)] = labels
        self._basis = clean
        self._degree_of = degree_of
        self._index = {lab: i for labels in clean.values() for i, lab in enumerate(labels)}
        self._order = {lab: n for n, lab in enumerate(lab for d in clean for lab in clean[d])}

    @property
    def basis(self) -> dict[int, tuple[str, ...]]:
        return dict(self._basis)

    @property
    def degrees(self) -> list[int]:
        return list(self._basis)

    def labels(self, j: int | None = None) -> tuple[str, ...]:
        if j is None:
            return tuple(self._order)
        return self._basis.get(j, ())

    def dim(self, j: int | None = None) -> int:
        if j is None:
            return len(self._degree_of)
        return len(self._basis.get(j, ()))

    def degree(self, label: str) -> int:
        return self._degree_of[label]

    def index(self, label: str) -> int:
        """Position of ``label`` within its own degree."""
        return self._index[label]

    def order(self, label: str) -> int:
        """Position of ``label`` in the global label order."""
        return self._order[label]

    def __contains__(self, label: str) -> bool:
        return label in self._degree_of

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedSpace) and self._basis == other._basis

    def __hash__(self) -> int:
        return hash(tuple(self._basis.items()))

    def __repr__(self) -> str:
        return f"GradedSpace({self._basis})"

    def to_coords(self, v: Mapping[str, Fraction], j: int) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.dim(j)
        for k, x in v.items():
            if self._degree_of[k] != j:
                raise ValueError(f"{k!r} is not in degree {j}")
            out[self._index[k]] += x
        return tuple(out)

    def from_coords(self, coords, j: int) -> dict:
        return {lab: as_rational(c) for lab, c in zip(self.labels(j), coords) if c}

    def vector_degree(self, v: Mapping[str, Fraction]) -> int | None:
        degs = {self._degree_of[k] for k in v}
        if len(degs) > 1:
            raise ValueError("vector is not homogeneous")
        return degs.pop() if degs else None

    def shifted(self, k: int, prefix: str = SUSPENSION_PREFIX) -> "GradedSpace":
        return GradedSpace({j + k: [prefix + lab for lab in labs] for j, labs in self._basis.items()})

    def restricted(self, degrees: Iterable[int]) -> "GradedSpace":
        keep = set(degrees)
        return GradedSpace({j: labs for j, labs in self._basis.items() if j in keep})


class GradedMap:
    """Degree-``k`` linear map given by one Matrix block per source degree.

    ``blocks[j]`` maps ``(source, j)`` to ``(target, j + k)``; absent blocks
    are zero.
    """

    __slots__ = ("source", "target", "degree", "_blocks", "_columns")

    def __init__(self, source: GradedSpace, target: GradedSpace, degree: int,
                 blocks: Mapping[int, Matrix] | None = None):
        self.source = source
        self.target = target
        self.degree = degree
        clean = {}
        for j, m in (blocks or {}).items():
            shape = (target.dim(j + degree), source.dim(j))
            if m.shape != shape:
                raise ValueError(f"block at degree {j} has shape {m.shape}, expected {shape}")
            if not m.is_zero():
                clean[j] = m
        self._blocks = clean
        self._columns = None

    @classmethod
    def from_columns(cls, source: GradedSpace, target: GradedSpace, degree: int,
                     columns: Mapping[str, Mapping[str, object]]) -> "GradedMap":
        """Build from ``{source label: target vector}``."""
        blocks = {}
        for j in source.degrees:
            cols = []
            for lab in source.labels(j):
                value = vec(columns.get(lab, {}))
                for t in value:
                    if target.degree(t) != j + degree:
                        raise ValueError(f"{lab!r} -> {t!r} does not have degree {degree}")
                cols.append(target.to_coords(value, j + degree) if value else
                            (Fraction(0),) * target.dim(j + degree))
            blocks[j] = Matrix.from_columns(cols, target.dim(j + degree))
        return cls(source, target, degree, blocks)

    @classmethod
    def identity(cls, space: GradedSpace) -> "GradedMap":
        return cls(space, space, 0, {j: Matrix.identity(space.dim(j)) for j in space.degrees})

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, degree: int) -> "GradedMap":
        return cls(source, target, degree)

    def block(self, j: int) -> Matrix:
        if j in self._blocks:
            return self._blocks[j]
        return Matrix.zeros(self.target.dim(j + self.degree), self.source.dim(j))

    @property
    def blocks(self) -> dict[int, Matrix]:
        return dict(self._blocks)

    @property
    def columns(self) -> dict[str, dict]:
        """``{source label: image vector}`` (zero images omitted)."""
        if self._columns is None:
            cols = {}
            for j, m in self._blocks.items():
                tl = self.target.labels(j + self.degree)
                for c, lab in enumerate(self.source.labels(j)):
                    image = {t: m[r, c] for r, t in enumerate(tl) if m[r, c]}
                    if image:
                        cols[lab] = image
            self._columns = cols
        return self._columns

    def __call__(self, v: Mapping[str, Fraction]) -> dict:
        cols = self.columns
        out: dict = {}
        for k, x in v.items():
            image = cols.get(k)
            if image:
                vadd(out, image, x)
        return out

    def is_zero(self) -> bool:
        return not self._blocks

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.degree == other.degree and self._blocks == other._blocks)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        self._check_parallel(other)
        degs = set(self._blocks) | set(other._blocks)
        return GradedMap(self.source, self.target, self.degree,
                         {j: self.block(j) + other.block(j) for j in degs})

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return self + other.scale(-1)

    def scale(self, c) -> "GradedMap":
        return GradedMap(self.source, self.target, self.degree,
                         {j: m.scale(c) for j, m in self._blocks.items()})

    def __neg__(self) -> "GradedMap":
        return self.scale(-1)

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        return compose(self, other)

    def _check_parallel(self, other: "GradedMap") -> None:
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            raise ValueError("maps are not parallel")

    def __repr__(self) -> str:
        return f"GradedMap(degree={self.degree}, blocks={self._blocks})"


def compose(f: GradedMap, g: GradedMap) -> GradedMap:
    """``f ∘ g``; degrees add, blocks multiply."""
    if g.target != f.source:
        raise ValueError("cannot compose: target of g differs from source of f")
    blocks = {}
    for j in g.source.degrees:
        blocks[j] = f.block(j + g.degree) @ g.block(j)
    return GradedMap(g.source, f.target, f.degree + g.degree, blocks)


@dataclass(frozen=True)
class ChainComplex:
    space: GradedSpace
    d: GradedMap

    def __post_init__(self):
        if self.d.degree != -1:
            raise ValueError("differential must have degree -1")
        if self.d.source != self.space or self.d.target != self.space:
            raise ValueError("differential must be an endomorphism of the space")
        if not compose(self.d, self.d).is_zero():
            raise ValueError("d ∘ d != 0")

    @classmethod
    def from_entries(cls, basis: Mapping[int, Iterable[str]],
                     differential: Mapping[str, Mapping[str, object]] | None = None) -> "ChainComplex":
        space = GradedSpace(basis)
        return cls(space, GradedMap.from_columns(space, space, -1, differential or {}))

    @classmethod
    def zero_differential(cls, space: GradedSpace) -> "ChainComplex":
        return cls(space, GradedMap.zero(space, space, -1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** (j % 2) * self.space.dim(j) for j in self.space.degrees)


def suspend(c: ChainComplex, prefix: str = SUSPENSION_PREFIX) -> ChainComplex:
    """Shift up by one; the differential becomes ``-s d s⁻¹`` so that ``ds + sd = 0``."""
    space = c.space.shifted(1, prefix)
    blocks = {j + 1: -m for j, m in c.d.blocks.items()}
    return ChainComplex(space, GradedMap(space, space, -1, blocks))


def shift_map(f: GradedMap, source: GradedSpace, target: GradedSpace, shift: int,
              sign: int = 1) -> GradedMap:
    """Transport ``f`` along relabellings of source and target that raise
    every degree by ``shift`` (as ``s f s⁻¹`` does), multiplying by ``sign``."""
    return GradedMap(source, target, f.degree,
                     {j + shift: m.scale(sign) for j, m in f.blocks.items()})


@dataclass(frozen=True)
class DegreeSplitting:
    """Exact pieces of one degree ``j`` of a chain complex, as column bases
    in the coordinates of ``space_j``.

    ``boundaries = d(complement_{j+1})``, ``harmonic`` extends it to a basis
    of the cycles, ``complement`` is spanned by the standard basis vectors at
    the pivot columns of ``d_j`` (so ``d`` is injective on it).
    """
    degree: int
    cycles: Matrix
    cycle_free_columns: tuple[int, ...]
    boundaries: Matrix
    boundary_sources: tuple[int, ...]  # pivot columns in degree j+1
    harmonic: Matrix
    harmonic_free_columns: tuple[int, ...]
    complement_columns: tuple[int, ...]


def split_degrees(c: ChainComplex) -> dict[int, DegreeSplitting]:
    space = c.space
    degrees = sorted(set(space.degrees) | {j - 1 for j in space.degrees}, reverse=True)
    pivots = {}
    for j in degrees:
        if space.dim(j):
            pivots[j] = rref(c.d.block(j))[1]
    out = {}
    for j in degrees:
        n = space.dim(j)
        if not n:
            continue
        dj = c.d.block(j)
        cycles = kernel_basis(dj)
        free = kernel_free_columns(dj)
        src = tuple(pivots.get(j + 1, ()))
        if src:
            dj1 = c.d.block(j + 1)
            boundaries = Matrix.from_columns([dj1.column(p) for p in src], n)
        else:
            boundaries = Matrix.zeros(n, 0)
        chosen = extend_basis(boundaries, cycles)
        harmonic = Matrix.from_columns([cycles.column(i) for i in chosen], n)
        out[j] = DegreeSplitting(
            degree=j,
            cycles=cycles,
            cycle_free_columns=tuple(free),
            boundaries=boundaries,
            boundary_sources=src,
            harmonic=harmonic,
            harmonic_free_columns=tuple(free[i] for i in chosen),
            complement_columns=tuple(pivots[j]),
        )
    return out


def homology_label(label: str) -> str:
    return f"[{label}]"


def homology(c: ChainComplex) -> tuple[GradedSpace, dict[int, Matrix], dict[int, Matrix]]:
    """Homology space with its chosen representative labels, plus exact
    cycle and boundary bases per degree (as column matrices)."""
    splits = split_degrees(c)
    basis = {}
    for j, s in splits.items():
        labels = [homology_label(c.space.labels(j)[f]) for f in s.harmonic_free_columns]
        if labels:
            basis[j] = labels
    return (GradedSpace(basis),
            {j: s.cycles for j, s in splits.items()},
            {j: s.boundaries for j, s in splits.items()})
