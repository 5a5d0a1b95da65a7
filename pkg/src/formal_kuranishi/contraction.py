"""Contractions ``(∇, π, h)`` of a chain complex onto its homology.

The homotopy is normalised: ``h∇ = 0``, ``πh = 0`` and ``hh = 0`` hold
exactly, and ``∇π = 1 - (dh + hd)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dgla import ValidationReport
from .graded import (
    ChainComplex,
    GradedMap,
    GradedSpace,
    compose,
    homology_label,
    shift_map,
    split_degrees,
    suspend,
)
from .linalg import Matrix


@dataclass(frozen=True)
class Contraction:
    big: ChainComplex
    small: ChainComplex
    nabla: GradedMap
    pi: GradedMap
    h: GradedMap

    def d_h(self) -> GradedMap:
        return compose(self.big.d, self.h)

    def h_d(self) -> GradedMap:
        return compose(self.h, self.big.d)


@dataclass(frozen=True)
class HodgeSplitting:
    """Per degree: column bases (in the coordinates of ``g_j``) of the
    boundaries ``d g_{j+1}``, the harmonic part ``∇H_j`` and ``h(d g_j)``."""
    boundaries: dict
    harmonic: dict
    h_image: dict

    def dims(self, j: int) -> tuple[int, int, int]:
        return tuple(m[j].cols if j in m else 0 for m in (self.boundaries, self.harmonic, self.h_image))


def build_contraction(c: ChainComplex) -> tuple[Contraction, HodgeSplitting]:
    """Deterministic contraction of ``c`` onto its homology.

    ``g_j = B_j ⊕ H_j ⊕ A_j`` where ``A_j`` is spanned by the standard basis
    vectors at the pivot columns of ``d_j``, ``B_j = d A_{j+1}`` and ``H_j``
    is a subset of the kernel basis complementing ``B_j``. ``h`` inverts
    ``d|A`` on ``B`` and vanishes on ``H ⊕ A``.
    """
    space = c.space
    splits = split_degrees(c)
    h_basis = {}
    for j, s in splits.items():
        labels = [homology_label(space.labels(j)[f]) for f in s.harmonic_free_columns]
        if labels:
            h_basis[j] = labels
    H = GradedSpace(h_basis)
    small = ChainComplex.zero_differential(H)

    nabla_blocks, pi_blocks, h_blocks = {}, {}, {}
    boundaries, harmonic, h_image = {}, {}, {}
    for j, s in splits.items():
        n = space.dim(j)
        A = Matrix.from_columns(
            [[1 if i == p else 0 for i in range(n)] for p in s.complement_columns], n)
        full = s.boundaries.hstack(s.harmonic).hstack(A)
        inverse = _inverse(full)
        nb, nh = s.boundaries.cols, s.harmonic.cols
        boundaries[j], harmonic[j], h_image[j] = s.boundaries, s.harmonic, A
        if nh:
            nabla_blocks[j] = s.harmonic
            pi_blocks[j] = inverse.submatrix(range(nb, nb + nh), range(n))
        if nb:
            # B-coordinates are coefficients on d(e_p), p in the (j+1) pivots
            m = space.dim(j + 1)
            lift = Matrix.from_columns(
                [[1 if i == p else 0 for i in range(m)] for p in s.boundary_sources], m)
            h_blocks[j] = lift @ inverse.submatrix(range(nb), range(n))
    nabla = GradedMap(H, space, 0, nabla_blocks)
    pi = GradedMap(space, H, 0, pi_blocks)
    h = GradedMap(space, space, 1, h_blocks)
    return Contraction(c, small, nabla, pi, h), HodgeSplitting(boundaries, harmonic, h_image)


def _inverse(m: Matrix) -> Matrix:
    from .linalg import rref

    reduced, pivots, t = rref(m)
    if len(pivots) != m.rows or m.rows != m.cols:
        raise ArithmeticError("Hodge pieces do not form a basis")
    return t


def validate_contraction(k: Contraction) -> ValidationReport:
    """Check every contraction identity degree by degree; a violation names
    the identity, the degree and the first offending basis label."""
    report = ValidationReport()
    big, small = k.big.space, k.small.space
    d, d_small = k.big.d, k.small.d
    if not d_small.is_zero():
        report.add("small_differential", (), "the small complex must have zero differential")
    checks = [
        ("pi_nabla", small, compose(k.pi, k.nabla), GradedMap.identity(small)),
        ("nabla_pi", big, compose(k.nabla, k.pi),
         GradedMap.identity(big) - compose(d, k.h) - compose(k.h, d)),
        ("h_nabla", small, compose(k.h, k.nabla), None),
        ("pi_h", big, compose(k.pi, k.h), None),
        ("h_h", big, compose(k.h, k.h), None),
        ("nabla_chain", small, compose(d, k.nabla), compose(k.nabla, d_small)),
        ("pi_chain", big, compose(k.pi, d), compose(d_small, k.pi)),
    ]
    for name, space, lhs, rhs in checks:
        diff = lhs if rhs is None else lhs - rhs
        for j in space.degrees:
            block = diff.block(j)
            if block.is_zero():
                continue
            col = next(c for c in range(block.cols) if any(block.column(c)))
            report.add(name, (j, space.labels(j)[col]))
    return report


def suspend_contraction(k: Contraction) -> Contraction:
    """Contraction of ``s(big)`` onto ``s(small)``: ``s∇s⁻¹``, ``sπs⁻¹`` and
    ``-s h s⁻¹`` (the sign matches ``d_s = -s d s⁻¹``)."""
    big = suspend(k.big)
    small = suspend(k.small)
    nabla = shift_map(k.nabla, small.space, big.space, 1)
    pi = shift_map(k.pi, big.space, small.space, 1)
    h = shift_map(k.h, big.space, big.space, 1, sign=-1)
    return Contraction(big, small, nabla, pi, h)


def identity_contraction(c: ChainComplex) -> Contraction:
    """For a complex with zero differential: ``∇ = π = id``, ``h = 0``."""
    if not c.d.is_zero():
        raise ValueError("identity contraction needs a zero differential")
    ident = GradedMap.identity(c.space)
    return Contraction(c, c, ident, ident, GradedMap.zero(c.space, c.space, 1))
