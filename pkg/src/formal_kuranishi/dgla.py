"""Differential graded Lie algebras given by structure constants.

A :class:`Dgla` is a chain complex (homological grading, ``d`` of degree
-1) together with a bracket table ``{(x, y): vector}`` on basis labels.
Everything downstream (contractions, the perturbation recursion, the
Kuranishi data) reads the algebra only through :meth:`Dgla.bracket` and
``complex.d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping

from .graded import (
    ChainComplex,
    GradedMap,
    GradedSpace,
    desuspend_label,
    suspend_label,
    vadd,
    vec,
    vscale,
)
from .linalg import Matrix, column_space_basis, solve


def koszul(a: int, b: int) -> int:
    """``(-1)^(a*b)``."""
    return -1 if (a & 1) and (b & 1) else 1


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str = ""

    def __str__(self) -> str:
        w = ", ".join(str(x) for x in self.witness)
        return f"{self.axiom}({w})" + (f": {self.detail}" if self.detail else "")


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def add(self, axiom: str, witness: tuple, detail: str = "") -> None:
        self.violations.append(Violation(axiom, witness, detail))

    def extend(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)

    def to_dict(self) -> dict:
        return {"ok": self.ok,
                "violations": [{"axiom": v.axiom, "witness": list(v.witness), "detail": v.detail}
                               for v in self.violations]}


class Dgla:
    """Differential graded Lie algebra on a finite labelled basis."""

    def __init__(self, complex: ChainComplex, bracket: Mapping[tuple[str, str], Mapping] | None = None):
        self.complex = complex
        table = {}
        for (x, y), value in (bracket or {}).items():
            if x not in complex.space or y not in complex.space:
                raise ValueError(f"bracket entry [{x}, {y}] uses an unknown label")
            value = vec(value)
            for t in value:
                if t not in complex.space:
                    raise ValueError(f"bracket [{x}, {y}] has unknown label {t!r}")
            if value:
                table[(x, y)] = value
        self._table = table

    @classmethod
    def from_upper(cls, complex: ChainComplex,
                   entries: Mapping[tuple[str, str], Mapping]) -> "Dgla":
        """Complete a bracket given on pairs ``x <= y`` (label order) by
        graded antisymmetry ``[y, x] = -(-1)^{|x||y|} [x, y]``."""
        space = complex.space
        table = {}
        for (x, y), value in entries.items():
            if space.order(x) > space.order(y):
                raise ValueError(f"bracket entry [{x}, {y}] is not in label order")
            value = vec(value)
            table[(x, y)] = value
            if x != y:
                table[(y, x)] = vscale(value, -koszul(space.degree(x), space.degree(y)))
        return cls(complex, table)

    @classmethod
    def abelian(cls, complex: ChainComplex) -> "Dgla":
        return cls(complex, {})

    # structure ------------------------------------------------------------

    @property
    def space(self) -> GradedSpace:
        return self.complex.space

    @property
    def d(self) -> GradedMap:
        return self.complex.d

    @property
    def table(self) -> dict[tuple[str, str], dict]:
        return self._table

    def degree(self, label: str) -> int:
        return self.space.degree(label)

    def bracket_basis(self, x: str, y: str) -> dict:
        return self._table.get((x, y), {})

    def bracket(self, a: Mapping, b: Mapping) -> dict:
        """Bilinear extension of the table to sparse vectors."""
        out: dict = {}
        if not a or not b:
            return out
        table = self._table
        for x, cx in a.items():
            for y, cy in b.items():
                value = table.get((x, y))
                if value:
                    vadd(out, value, cx * cy)
        return out

    def is_abelian(self) -> bool:
        return not self._table

    def upper_entries(self) -> dict[tuple[str, str], dict]:
        order = self.space.order
        return {k: v for k, v in self._table.items() if order(k[0]) <= order(k[1])}

    def with_bracket(self, table: Mapping[tuple[str, str], Mapping]) -> "Dgla":
        return Dgla(self.complex, table)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Dgla) and self.space == other.space
                and self.d == other.d and self._table == other._table)

    def __repr__(self) -> str:
        return f"Dgla(basis={self.space.basis}, brackets={len(self._table)})"


# validation -------------------------------------------------------------------

def validate(g: Dgla) -> ValidationReport:
    """Check degrees, degree additivity, antisymmetry, Jacobi and Leibniz on
    basis elements; every violation is reported with its witness."""
    report = ValidationReport()
    space = g.space
    deg = space.degree
    labels = space.labels()
    for j in space.degrees:
        if j > 0:
            report.add("nonpositive", (j,), f"degree {j} is positive")
    for (x, y), value in g.table.items():
        bad = [t for t in value if deg(t) != deg(x) + deg(y)]
        if bad:
            report.add("degree", (x, y), f"[{x}, {y}] has components {bad} of wrong degree")
    for x, y in combinations_with_replacement(labels, 2):
        lhs = g.bracket_basis(y, x)
        rhs = vscale(g.bracket_basis(x, y), -koszul(deg(x), deg(y)))
        if vec(vadd(dict(lhs), rhs, -1)):
            report.add("antisymmetry", (x, y))
    d = g.d
    for x, y in combinations_with_replacement(labels, 2):
        ux, uy = {x: Fraction(1)}, {y: Fraction(1)}
        lhs = d(g.bracket_basis(x, y))
        rhs = g.bracket(d(ux), uy)
        vadd(rhs, g.bracket(ux, d(uy)), -1 if deg(x) & 1 else 1)
        if vadd(lhs, rhs, -1):
            report.add("leibniz", (x, y))
    for x, y, z in combinations_with_replacement(labels, 3):
        total = jacobi_sum(g, x, y, z)
        if total:
            report.add("jacobi", (x, y, z), f"Jacobi sum {format_vector(total)}")
    return report


def jacobi_sum(g: Dgla, x: str, y: str, z: str) -> dict:
    """``(-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]] + (-1)^{|z||y|}[z,[x,y]]``."""
    deg = g.degree
    ux, uy, uz = ({lab: Fraction(1)} for lab in (x, y, z))
    total: dict = {}
    vadd(total, g.bracket(ux, g.bracket(uy, uz)), koszul(deg(x), deg(z)))
    vadd(total, g.bracket(uy, g.bracket(uz, ux)), koszul(deg(y), deg(x)))
    vadd(total, g.bracket(uz, g.bracket(ux, uy)), koszul(deg(z), deg(y)))
    return total


def format_vector(v: Mapping) -> str:
    if not v:
        return "0"
    return " + ".join(f"{c}*{k}" for k, c in v.items())


# Postnikov quotients, reduction, truncation ------------------------------------

def _restrict_map(f: GradedMap, source: GradedSpace, target: GradedSpace) -> GradedMap:
    """Rebuild ``f`` on spaces sharing some degrees verbatim with the originals."""
    columns = {lab: v for lab, v in f.columns.items() if lab in source}
    return GradedMap.from_columns(source, target, f.degree,
                                  {k: {t: c for t, c in v.items() if t in target}
                                   for k, v in columns.items()})


def postnikov_stage(g: Dgla, k: int, h: GradedMap) -> Dgla:
    """The quotient ``g / g^(k)`` living in degrees ``k..0``.

    In degree ``k`` the quotient is ``g_k / h(d g_k)``; its basis is chosen
    inside ``ker(h d) = d g_{k+1} ⊕ H_k`` as the images of the pivot columns
    of ``1 - h d``, labelled like those columns.
    """
    if k > 0:
        raise ValueError("Postnikov stages are indexed by nonpositive k")
    if h.degree != 1 or h.source != g.space or h.target != g.space:
        raise ValueError("h must be a degree +1 endomorphism of the algebra's space")
    space = g.space
    n = space.dim(k)
    keep = {j: space.labels(j) for j in space.degrees if k < j <= 0}
    if n:
        hd = h.block(k - 1) @ g.d.block(k)
        proj = Matrix.identity(n) - hd
        if not (proj @ proj == proj):
            raise ValueError("h d is not idempotent on degree k: invalid contraction data")
        basis_cols, pivots = column_space_basis(proj)
        old = space.labels(k)
        new_labels = [old[p] for p in pivots]
        keep[k] = new_labels
    else:
        new_labels, basis_cols = [], Matrix.zeros(0, 0)
    quot_space = GradedSpace(keep)

    def to_quotient(v: Mapping) -> dict:
        out = {}
        low = {}
        for lab, c in v.items():
            j = space.degree(lab)
            if j > k:
                out[lab] = c
            elif j == k:
                low[lab] = c
        if low and new_labels:
            coords = proj.apply(space.to_coords(low, k))
            x = solve(basis_cols, coords)
            vadd(out, quot_space.from_coords(x, k))
        return out

    def lift(lab: str) -> dict:
        j = quot_space.degree(lab)
        if j > k:
            return {lab: Fraction(1)}
        col = basis_cols.column(new_labels.index(lab))
        return space.from_coords(col, k)

    labels = quot_space.labels()
    d_cols = {lab: to_quotient(g.d(lift(lab))) for lab in labels}
    d = GradedMap.from_columns(quot_space, quot_space, -1, d_cols)
    table = {}
    for x in labels:
        for y in labels:
            if quot_space.degree(x) + quot_space.degree(y) < k:
                continue
            value = to_quotient(g.bracket(lift(x), lift(y)))
            if value:
                table[(x, y)] = value
    return Dgla(ChainComplex(quot_space, d), table)


def reduce(g: Dgla, h: GradedMap) -> Dgla:
    """Reduced algebra: drop degree 0 and replace ``g_{-1}`` by the
    complement ``H_{-1} ⊕ h(d g_{-1})`` of the boundaries ``d g_0``.

    The complement is ``ker(d h)`` on ``g_{-1}``; its basis is given by the
    pivot columns of ``1 - d h``.
    """
    space = g.space
    keep = {j: space.labels(j) for j in space.degrees if j <= -2}
    n = space.dim(-1)
    if n:
        dh = g.d.block(0) @ h.block(-1)
        proj = Matrix.identity(n) - dh
        if not (proj @ proj == proj):
            raise ValueError("d h is not idempotent on degree -1: invalid contraction data")
        basis_cols, pivots = column_space_basis(proj)
        old = space.labels(-1)
        keep[-1] = [old[p] for p in pivots]
    red_space = GradedSpace(keep)

    def lift(lab: str) -> dict:
        if red_space.degree(lab) <= -2:
            return {lab: Fraction(1)}
        return space.from_coords(basis_cols.column(keep[-1].index(lab)), -1)

    labels = red_space.labels()
    for lab in labels:
        for t in g.d(lift(lab)):
            if t not in red_space:
                raise ValueError("differential does not close on the reduced algebra")
    d = GradedMap.from_columns(red_space, red_space, -1, {lab: g.d(lift(lab)) for lab in labels})
    table = {}
    for x in labels:
        for y in labels:
            value = g.bracket(lift(x), lift(y))
            if any(t not in red_space for t in value):
                raise ValueError(f"bracket [{x}, {y}] does not close on the reduced algebra")
            if value:
                table[(x, y)] = value
    return Dgla(ChainComplex(red_space, d), table)


def truncate_minus1_minus2(g: Dgla, h: GradedMap) -> Dgla:
    """Two-term algebra in degrees -1, -2: reduce, then the stage k = -2."""
    red = reduce(g, h)
    h_red = _restrict_map(h, red.space, red.space)
    return postnikov_stage(red, -2, h_red)


def is_two_term(g: Dgla) -> bool:
    return set(g.space.degrees) <= {-1, -2}


# quadratic data -----------------------------------------------------------------

@dataclass(frozen=True)
class QuadraticData:
    """The quadratic map ``q(x) = ½ s[s⁻¹x, s⁻¹x]`` on ``V_0 = s k_{-1}``.

    ``Q`` holds the polarised values on the degree-two copower in the
    divided-power basis: key ``(a, b)`` with ``a < b`` is ``Q(a·b)``, key
    ``(a, a)`` is ``Q(γ₂(a))``. ``q_B`` holds the ``B_{-1} = dV_0``
    components (as vectors of ``V_{-1}``) and ``q_v`` the components in
    ``v_{-1}`` (homology coordinates).
    """
    v0: tuple[str, ...]
    v_minus1: tuple[str, ...]
    Q: dict
    q_B: dict
    q_v: dict

    def _eval(self, table: Mapping, x: Mapping) -> dict:
        out: dict = {}
        for (a, b), value in table.items():
            c = x.get(a, 0) * x.get(b, 0)
            if c:
                vadd(out, value, c)
        return out

    def q(self, x: Mapping) -> dict:
        return self._eval(self.Q, x)

    def qB(self, x: Mapping) -> dict:
        return self._eval(self.q_B, x)

    def qv(self, x: Mapping) -> dict:
        return self._eval(self.q_v, x)


def quadratic_data(k: Dgla, contraction) -> QuadraticData:
    """Quadratic map of a two-term algebra relative to ``V_{-1} = B ⊕ v_{-1}``.

    ``contraction`` is a contraction of ``k``; it is suspended internally.
    """
    from .contraction import suspend_contraction

    if not is_two_term(k):
        raise ValueError("quadratic data needs an algebra concentrated in degrees -1 and -2")
    vc = suspend_contraction(contraction)
    V = vc.big.space
    v0 = V.labels(0)
    vm1 = V.labels(-1)
    Q = {}
    for i, a in enumerate(v0):
        for b in v0[i:]:
            value = k.bracket_basis(desuspend_label(a), desuspend_label(b))
            value = {suspend_label(t): c for t, c in value.items()}
            if a == b:
                value = vscale(value, Fraction(1, 2))
            if value:
                Q[(a, b)] = value
    dh = vc.d_h()
    q_B, q_v = {}, {}
    for key, value in Q.items():
        b_part = dh(value)
        v_part = vc.pi(value)
        if b_part:
            q_B[key] = b_part
        if v_part:
            q_v[key] = v_part
    return QuadraticData(tuple(v0), tuple(vm1), Q, q_B, q_v)


def homology_lie_algebra(g: Dgla, contraction) -> Dgla:
    """``H(g)`` with zero differential and bracket ``π[∇a, ∇b]``."""
    H = contraction.small.space
    nabla, pi = contraction.nabla, contraction.pi
    table = {}
    for a in H.labels():
        for b in H.labels():
            value = pi(g.bracket(nabla({a: Fraction(1)}), nabla({b: Fraction(1)})))
            if value:
                table[(a, b)] = value
    return Dgla(ChainComplex.zero_differential(H), table)


def drop_harmonic_bracket(k: Dgla, contraction) -> Dgla:
    """The algebra with the same complex whose bracket keeps only the
    boundary component ``dh[x, y]`` (the bracket's harmonic part removed)."""
    dh = contraction.d_h()
    table = {}
    for key, value in k.table.items():
        hd = contraction.h_d()(value)
        if hd:
            raise ValueError("bracket has a component outside boundaries ⊕ harmonic part")
        v = dh(value)
        if v:
            table[key] = v
    return Dgla(k.complex, table)


def structure_constants(g: Dgla) -> dict:
    """Plain ``{(x, y): {z: Fraction}}`` copy of the full bracket table."""
    return {k: dict(v) for k, v in g.table.items()}


def basis_pairs(labels: Iterable[str]):
    labels = list(labels)
    for i, x in enumerate(labels):
        for y in labels[i:]:
            yield x, y
