"""Kuranishi map, formal inverse, obstruction series and Kuranishi coalgebra
of a two-term algebra ``k = k_{-1} ⊕ k_{-2}``.

Write ``V = s k`` (so ``V_0 = s k_{-1}`` and ``V_{-1} = s k_{-2}``) and
``v = s H(k)``. The twisting cochain restricted to ``S^c[v_0]`` is the
formal inverse of the projection from the Kuranishi space ``M_k`` onto its
tangent space ``v_0``; the perturbed differential restricted there gives
the obstruction series.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .contraction import Contraction, build_contraction, suspend_contraction
from .dgla import Dgla, QuadraticData, ValidationReport, is_two_term, quadratic_data
from .graded import desuspend_label, vadd
from .hpt import PerturbedDifferential, TwistingCochain, compute_tau_and_D, tau_bar
from .linalg import sparse_kernel
from .series import TruncatedSeries, VectorSeries, identity_series
from .symcoalg import SymCoalgebra, classifying_corestriction, linear_morphism


def variable_name(label: str) -> str:
    """Display name of a coordinate: ``s·[v]`` and ``s·v`` both become ``v``."""
    name = desuspend_label(label) if label.startswith("s·") else label
    if name.startswith("[") and name.endswith("]"):
        name = name[1:-1]
    return name


def _require_two_term(k: Dgla) -> None:
    if not is_two_term(k):
        raise ValueError("the Kuranishi construction needs an algebra in degrees -1 and -2")


@dataclass
class KuranishiMap:
    quadratic: QuadraticData
    J: VectorSeries  # d + q : V_0 → V_{-1}
    F: VectorSeries  # x + h q_B(x) : V_0 → V_0


def kuranishi_map(k: Dgla, c: Contraction) -> KuranishiMap:
    _require_two_term(k)
    vc = suspend_contraction(c)
    data = quadratic_data(k, c)
    variables = data.v0
    x = identity_series(variables, 2)
    J = x.apply_linear(vc.big.d) + x.apply_quadratic(data.Q)
    F = x + x.apply_quadratic(data.q_B).apply_linear(vc.h)
    return KuranishiMap(data, J, F)


def _v0_positions(C: SymCoalgebra) -> list[int]:
    return [i for i, d in enumerate(C.gen_degrees) if d == 0]


def v0_elements(C: SymCoalgebra, max_length: int | None = None) -> list:
    """Basis of ``S^c_{≤N}[v_0]`` inside ``C``, by word length."""
    zero_ok = [i for i, d in enumerate(C.gen_degrees) if d != 0]
    return [e for e in C.basis(max_length) if not any(e[i] for i in zero_ok)]


def _exponent(C: SymCoalgebra, e) -> tuple:
    return tuple(e[i] for i in _v0_positions(C))


def formal_inverse(k: Dgla, c: Contraction, N: int,
                   computed: tuple[TwistingCochain, PerturbedDifferential] | None = None) -> VectorSeries:
    """The series ``z ↦ s τ(Σ z_i b_i)`` with values in ``V_0``.

    Its coefficient on ``z^𝐣`` is ``s τ(γ_𝐣(b))``.
    """
    _require_two_term(k)
    t, _ = computed or compute_tau_and_D(k, c, N)
    C = t.coalgebra
    variables = [C.labels[i] for i in _v0_positions(C)]
    suspended = t.suspended()
    coeffs = {_exponent(C, e): suspended[e] for e in v0_elements(C) if e in suspended}
    return VectorSeries.from_coefficients(variables, N, coeffs)


def obstruction_series(k: Dgla, c: Contraction, N: int,
                       computed: tuple[TwistingCochain, PerturbedDifferential] | None = None
                       ) -> list[tuple[str, TruncatedSeries]]:
    """One series per basis vector of ``v_{-1}``: the corresponding component
    of the perturbed differential on ``S^c[v_0]``."""
    _require_two_term(k)
    t, D = computed or compute_tau_and_D(k, c, N)
    C = t.coalgebra
    n = len(_v0_positions(C))
    targets = [lab for lab, d in zip(C.labels, C.gen_degrees) if d == -1]
    cor = D.coderivation.corestriction
    per = {lab: {} for lab in targets}
    for e in v0_elements(C):
        for lab, x in cor.get(e, {}).items():
            per[lab][_exponent(C, e)] = x
    return [(lab, TruncatedSeries(n, N, per[lab])) for lab in targets]


@dataclass
class FiltrationKernel:
    """Kernel of a filtered map on a word-length filtered basis."""
    elements: list  # the domain basis, ordered by word length
    vectors: list  # kernel basis as ``{element: Fraction}``
    levels: list  # word length at which each kernel vector first appears
    max_word_length: int

    def filtration_dims(self) -> list[int]:
        """``dim(kernel ∩ S_{≤ℓ})`` for ``ℓ = 0..N``."""
        return [sum(1 for lv in self.levels if lv <= ell) for ell in range(self.max_word_length + 1)]

    def word_length_dims(self) -> list[int]:
        """Dimensions of the associated graded pieces of the filtration."""
        f = self.filtration_dims()
        return [f[0]] + [f[i] - f[i - 1] for i in range(1, len(f))]


def _filtered_kernel(elements: list, columns: list, N: int) -> FiltrationKernel:
    vectors, levels = [], []
    for j, comb in sparse_kernel(columns):
        vectors.append({elements[i]: x for i, x in comb.items()})
        levels.append(sum(elements[j]))
    return FiltrationKernel(elements, vectors, levels, N)


def obstruction_columns(C: SymCoalgebra, D: PerturbedDifferential, elements: list) -> list[dict]:
    """Columns of ``(id ⊗ π_𝒟) ∘ Δ`` on the given elements of ``S^c[v_0]``."""
    cor = D.coderivation.corestriction
    cols = []
    for e in elements:
        col: dict = {}
        for L, R, sign in C.splits(e):
            value = cor.get(R)
            if not value:
                continue
            for lab, x in value.items():
                key = (L, lab)
                y = col.get(key, 0) + sign * x
                if y:
                    col[key] = y
                else:
                    col.pop(key, None)
        cols.append(col)
    return cols


def kuranishi_coalgebra(k: Dgla, c: Contraction, N: int,
                        computed: tuple[TwistingCochain, PerturbedDifferential] | None = None
                        ) -> FiltrationKernel:
    """``C_k = ker((id ⊗ π_𝒟) ∘ Δ)`` on ``S^c_{≤N}[v_0]``."""
    _require_two_term(k)
    t, D = computed or compute_tau_and_D(k, c, N)
    C = t.coalgebra
    elements = v0_elements(C)
    return _filtered_kernel(elements, obstruction_columns(C, D, elements), N)


def classifying_kernel(k: Dgla, N: int, coalgebra: SymCoalgebra | None = None) -> FiltrationKernel:
    """Degree-zero cycles of the classifying coalgebra of ``k`` on
    ``S^c_{≤N}[V_0]``: the coordinate coalgebra ``C[V_k]``."""
    _require_two_term(k)
    target = coalgebra or SymCoalgebra(k.space.shifted(1), N)
    Dg = classifying_corestriction(k, target)
    elements = v0_elements(target, N)
    return _filtered_kernel(elements, [Dg.apply_basis(e) for e in elements], N)


@dataclass
class KuranishiResult:
    algebra: Dgla
    contraction: Contraction
    max_word_length: int
    cochain: TwistingCochain
    differential: PerturbedDifferential
    kmap: KuranishiMap
    inverse: VectorSeries
    obstructions: list
    coalgebra: FiltrationKernel
    cv_kernel: FiltrationKernel
    verification: ValidationReport = field(default_factory=ValidationReport)


def verify_correspondence(k: Dgla, c: Contraction, N: int, result: KuranishiResult | None = None) -> ValidationReport:
    """Word-length-wise checks up to ``N``:

    * ``section``: ``S^c[π] ∘ τ̄ = id`` on ``S^c[v_0]``;
    * ``inverse_identity``: ``F`` composed with the formal inverse is ``∇``;
    * ``membership``: the formal inverse solves ``x₂ + h q_B(x) = 0``;
    * ``cycles``: every vector of ``C_k`` is a ``𝒟``-cycle;
    * ``tau_bar_image``: ``τ̄`` maps ``C_k`` into ``C[V_k]``;
    * ``projection_image``: ``S^c[π]`` maps ``C[V_k]`` into ``C_k``;
    * ``round_trip``: ``τ̄ ∘ S^c[π] = id`` on ``C[V_k]``;
    * ``dimensions``: both filtrations have the same dimensions.
    """
    r = result or analyze(k, N, c, verify=False)
    report = ValidationReport()
    t, D = r.cochain, r.differential
    C = t.coalgebra
    vc = suspend_contraction(c)
    F = tau_bar(t)
    target = F.target
    Dg = classifying_corestriction(k, target)
    spi = linear_morphism(target, C, vc.pi)

    for e in v0_elements(C):
        if spi(F.apply_basis(e)) != {e: Fraction(1)}:
            report.add("section", (sum(e), C.format(e)))

    inv = r.inverse
    nabla_z = identity_series(inv.variables, N).apply_linear(vc.nabla)
    composed = inv + inv.apply_quadratic(r.kmap.quadratic.q_B).apply_linear(vc.h)
    if composed != nabla_z:
        report.add("inverse_identity", (N,))
    higher = inv - nabla_z
    residual = higher + inv.apply_quadratic(r.kmap.quadratic.q_B).apply_linear(vc.h)
    if not residual.is_zero():
        report.add("membership", (N,))

    ck, cv = r.coalgebra, r.cv_kernel
    obstruction = dict(zip(ck.elements, obstruction_columns(C, D, ck.elements)))
    for vector, level in zip(ck.vectors, ck.levels):
        if D.coderivation(vector):
            report.add("cycles", (level,))
        if Dg(F(vector)):
            report.add("tau_bar_image", (level,))
    for vector, level in zip(cv.vectors, cv.levels):
        projected = spi(vector)
        image: dict = {}
        for e, x in projected.items():
            vadd(image, obstruction.get(e, {}), x)
        if image or any(e not in obstruction for e in projected):
            report.add("projection_image", (level,))
        if F(projected) != vector:
            report.add("round_trip", (level,))
    if ck.filtration_dims() != cv.filtration_dims():
        report.add("dimensions", (N,), f"{ck.filtration_dims()} != {cv.filtration_dims()}")
    return report


def analyze(k: Dgla, N: int, c: Contraction | None = None, verify: bool = True) -> KuranishiResult:
    """Run the whole construction for a two-term algebra."""
    _require_two_term(k)
    if c is None:
        c, _ = build_contraction(k.complex)
    computed = compute_tau_and_D(k, c, N)
    t, D = computed
    result = KuranishiResult(
        algebra=k,
        contraction=c,
        max_word_length=N,
        cochain=t,
        differential=D,
        kmap=kuranishi_map(k, c),
        inverse=formal_inverse(k, c, N, computed),
        obstructions=obstruction_series(k, c, N, computed),
        coalgebra=kuranishi_coalgebra(k, c, N, computed),
        cv_kernel=classifying_kernel(k, N),
    )
    if verify:
        result.verification = verify_correspondence(k, c, N, result)
    return result
