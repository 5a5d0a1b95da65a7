"""Twisting cochain and perturbed coalgebra differential of a contraction.

Given a DGLA ``g`` and a contraction ``(∇, π, h)`` of ``g`` onto its
homology ``H``, the recursion

    τ¹ = ∇ s⁻¹,    τ^ℓ = h(½ Σ_{j+k=ℓ} [τ^j, τ^k]),
    s⁻¹ 𝒟^{ℓ-1} = π(½ Σ_{j+k=ℓ} [τ^j, τ^k])

produces a twisting cochain ``τ: S^c[sH] → g`` and a coalgebra differential
``𝒟`` on ``S^c[sH]`` with ``dτ + τ𝒟 = ½[τ, τ]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .contraction import Contraction, build_contraction
from .dgla import Dgla, ValidationReport, drop_harmonic_bracket, homology_lie_algebra
from .graded import desuspend_label, suspend_label, vadd
from .symcoalg import (
    CoalgebraMorphismRep,
    CoderivationRep,
    SymCoalgebra,
    TruncationError,
    cce_corestriction,
    classifying_corestriction,
    linear_morphism,
)

HALF = Fraction(1, 2)


@dataclass
class TwistingCochain:
    """``τ`` stored as ``{basis element: vector of g}``, nonzero values only."""
    coalgebra: SymCoalgebra
    algebra: Dgla
    values: dict = field(default_factory=dict)
    _bar: CoalgebraMorphismRep | None = field(default=None, repr=False, compare=False)

    @property
    def max_word_length(self) -> int:
        return self.coalgebra.max_word_length

    def component(self, length: int) -> dict:
        return {e: v for e, v in self.values.items() if sum(e) == length}

    def __call__(self, v: Mapping) -> dict:
        out: dict = {}
        for e, c in v.items():
            value = self.values.get(e)
            if value:
                vadd(out, value, c)
        return out

    def suspended(self) -> dict:
        """Corestriction ``s∘τ`` of the associated coalgebra morphism."""
        return {e: {suspend_label(k): c for k, c in v.items()} for e, v in self.values.items()}


@dataclass
class PerturbedDifferential:
    """``𝒟 = 𝒟¹ + 𝒟² + ⋯`` with the corestriction of ``𝒟^{ℓ-1}`` on word length ℓ."""
    coderivation: CoderivationRep

    @property
    def coalgebra(self) -> SymCoalgebra:
        return self.coderivation.coalgebra

    def part(self, m: int) -> dict:
        """Corestriction of ``𝒟^m`` (supported on word length ``m + 1``)."""
        return self.coderivation.component(m + 1)

    def part_coderivation(self, m: int) -> CoderivationRep:
        return CoderivationRep(self.coalgebra, -1, self.part(m))

    def is_zero(self, start: int = 1) -> bool:
        return not any(sum(e) >= start + 1 for e in self.coderivation.corestriction)


def convolution_bracket(a: Mapping, b: Mapping, elements, C: SymCoalgebra, g: Dgla,
                        b_degree: int = -1) -> dict:
    """``[a, b](e) = Σ ± [a(L), b(R)]`` over the reduced diagonal of each ``e``.

    ``a`` and ``b`` are cochains ``{element: vector}``; the sign is the
    diagonal's Koszul sign times ``(-1)^{|b||L|}``.
    """
    out = {}
    odd_b = b_degree & 1
    for e in elements:
        acc: dict = {}
        for L, R, sign in C.reduced_splits(e):
            x = a.get(L)
            if not x:
                continue
            y = b.get(R)
            if not y:
                continue
            s = -sign if odd_b and C.parity(L) else sign
            vadd(acc, g.bracket(x, y), s)
        if acc:
            out[e] = acc
    return out


def _restrict(values: Mapping, length: int) -> dict:
    return {e: v for e, v in values.items() if sum(e) == length}


def half_bracket_sum(tau: Mapping, e, C: SymCoalgebra, g: Dgla) -> dict:
    """``½ Σ_{j+k=ℓ} [τ^j, τ^k](e)`` using the full reduced diagonal."""
    value = convolution_bracket(tau, tau, [e], C, g).get(e, {})
    return {k: HALF * c for k, c in value.items()}


def canonical_bracket_sum(tau: Mapping, length: int, C: SymCoalgebra, g: Dgla) -> dict:
    """``Σ_{j<k} [τ^j, τ^k] + ½[τ^{ℓ/2}, τ^{ℓ/2}]`` on word length ``length``."""
    elements = C.elements(length)
    out: dict = {}
    for j in range(1, length):
        k = length - j
        if j > k:
            break
        tj, tk = _restrict(tau, j), _restrict(tau, k)
        coeff = HALF if j == k else Fraction(1)
        for e, v in convolution_bracket(tj, tk, elements, C, g).items():
            vadd(out.setdefault(e, {}), v, coeff)
    return {e: v for e, v in out.items() if v}


def compute_tau_and_D(g: Dgla, c: Contraction, N: int) -> tuple[TwistingCochain, PerturbedDifferential]:
    if N < 1:
        raise ValueError("N must be at least 1")
    if c.big.space != g.space:
        raise ValueError("contraction does not match the algebra")
    sH = c.small.space.shifted(1)
    C = SymCoalgebra(sH, N)
    tau: dict = {}
    for lab in sH.labels():
        value = c.nabla({desuspend_label(lab): Fraction(1)})
        if value:
            tau[C.unit(lab)] = value
    D: dict = {}
    for length in range(2, N + 1):
        for e in C.elements(length):
            X = half_bracket_sum(tau, e, C, g)
            if not X:
                continue
            t = c.h(X)
            if t:
                tau[e] = t
            p = c.pi(X)
            if p:
                D[e] = {suspend_label(k): x for k, x in p.items()}
    return (TwistingCochain(C, g, tau),
            PerturbedDifferential(CoderivationRep(C, -1, D)))


def twisting_defect(t: TwistingCochain, D: PerturbedDifferential, e) -> dict:
    """``dτ(e) + τ𝒟(e) - ½[τ, τ](e)``; zero for a twisting cochain."""
    g, C = t.algebra, t.coalgebra
    out = g.d(t.values.get(e, {}))
    vadd(out, t(D.coderivation.apply_basis(e)))
    vadd(out, half_bracket_sum(t.values, e, C, g), -1)
    return out


def check_twisting_cochain(t: TwistingCochain, D: PerturbedDifferential, g: Dgla,
                           c: Contraction, morphism: bool = True) -> ValidationReport:
    """Exact check of every identity on each basis element of ``S^c_{≤N}``.

    Failures are named ``twisting``, ``pi_tau``, ``h_tau``, ``D_squared``
    and ``tau_bar_chain`` with the word length and element as witness.
    """
    report = ValidationReport()
    C = t.coalgebra
    for e in C.basis(C.max_word_length):
        if not any(e):
            continue
        ell = sum(e)
        if twisting_defect(t, D, e):
            report.add("twisting", (ell, C.format(e)))
        value = t.values.get(e, {})
        p = c.pi(value)
        expected = {}
        if ell == 1:
            lab = C.labels[e.index(1)]
            expected = {desuspend_label(lab): Fraction(1)}
        if p != expected:
            report.add("pi_tau", (ell, C.format(e)))
        if c.h(value):
            report.add("h_tau", (ell, C.format(e)))
        if D.coderivation(D.coderivation.apply_basis(e)):
            report.add("D_squared", (ell, C.format(e)))
    if morphism:
        for e in tau_bar_chain_failures(t, D):
            report.add("tau_bar_chain", (sum(e), C.format(e)))
    return report


def tau_bar(t: TwistingCochain) -> CoalgebraMorphismRep:
    """Coalgebra morphism ``S^c[sH] → S^c[s g]`` with corestriction ``s∘τ``
    (built once per cochain; its values are memoized)."""
    if t._bar is None:
        target = SymCoalgebra(t.algebra.space.shifted(1), t.max_word_length)
        t._bar = CoalgebraMorphismRep(t.coalgebra, target, t.suspended())
    return t._bar


def tau_bar_chain_failures(t: TwistingCochain, D: PerturbedDifferential) -> list:
    """Elements where ``𝒟_g ∘ τ̄ ≠ τ̄ ∘ 𝒟`` (classifying differential of g)."""
    F = tau_bar(t)
    Dg = classifying_corestriction(t.algebra, F.target)
    bad = []
    for e in t.coalgebra.basis():
        lhs = Dg(F.apply_basis(e))
        rhs = F(D.coderivation.apply_basis(e))
        if lhs != rhs:
            bad.append(e)
    return bad


def projection_section_check(t: TwistingCochain, c: Contraction) -> list:
    """Elements where ``S^c[π] ∘ τ̄ ≠ id``."""
    F = tau_bar(t)
    sH = t.coalgebra
    spi = linear_morphism(F.target, sH, lambda v: {
        suspend_label(k): x for k, x in c.pi({desuspend_label(a): y for a, y in v.items()}).items()})
    bad = []
    for e in sH.basis():
        if spi(F.apply_basis(e)) != {e: Fraction(1)}:
            bad.append(e)
    return bad


@dataclass
class FormalityReport:
    failures: list  # (j, k) with π[τ^j, τ^k] ≠ 0, j ≤ k
    d1_nonzero: bool
    higher_D_zero: bool
    D_zero: bool
    max_word_length: int

    @property
    def criterion_holds(self) -> bool:
        """``π[τ^j, τ^k] = 0`` for every ``j + k ≥ 2``: then ``𝒟 = 0``."""
        return not self.failures

    @property
    def higher_criterion_holds(self) -> bool:
        """No failure with ``j + k > 2``: then ``𝒟 = 𝒟¹`` and the algebra is formal."""
        return not any(j + k > 2 for j, k in self.failures)

    @property
    def verdict(self) -> str:
        if self.criterion_holds and self.D_zero:
            return "formal"
        if self.higher_criterion_holds:
            return "formal-nonabelian"
        return "undetermined"

    def to_dict(self) -> dict:
        return {
            "criterion_holds": self.criterion_holds,
            "d1_nonzero": self.d1_nonzero,
            "D_zero": self.D_zero,
            "failures": [list(p) for p in self.failures],
            "higher_D_zero": self.higher_D_zero,
            "higher_criterion_holds": self.higher_criterion_holds,
            "max_word_length": self.max_word_length,
            "verdict": self.verdict,
        }


def check_formality(g: Dgla, c: Contraction, N: int,
                    computed: tuple[TwistingCochain, PerturbedDifferential] | None = None) -> FormalityReport:
    """Test whether ``π[τ^j, τ^k]`` vanishes for all ``2 < j + k ≤ N``.

    When it does, every ``𝒟^ℓ`` with ``ℓ ≥ 2`` must vanish; this is
    cross-checked against the computed differential and an
    AssertionError is raised if the two disagree. Failures at ``j + k = 2``
    are recorded too; they mean ``𝒟¹ ≠ 0``.
    """
    t, D = computed or compute_tau_and_D(g, c, N)
    C = t.coalgebra
    failures = []
    for length in range(2, N + 1):
        elements = C.elements(length)
        for j in range(1, length // 2 + 1):
            k = length - j
            br = convolution_bracket(_restrict(t.values, j), _restrict(t.values, k), elements, C, g)
            if any(c.pi(v) for v in br.values()):
                failures.append((j, k))
    report = FormalityReport(
        failures=failures,
        d1_nonzero=bool(D.part(1)),
        higher_D_zero=D.is_zero(2),
        D_zero=D.is_zero(1),
        max_word_length=N,
    )
    if report.higher_criterion_holds and not report.higher_D_zero:
        raise AssertionError("higher perturbation terms are nonzero although no bracket hits homology")
    if D.part(1) != cce_corestriction(homology_lie_algebra(g, c), N).corestriction:
        raise AssertionError("first perturbation term differs from the Chevalley-Eilenberg differential")
    return report


@dataclass
class ComparisonReport:
    cochains_equal: bool
    differential_difference: dict  # element label -> difference vector
    reduced_higher_D_zero: bool

    @property
    def ok(self) -> bool:
        return self.cochains_equal and self.reduced_higher_D_zero


def compare_truncated_vs_full(k: Dgla, c: Contraction, N: int) -> ComparisonReport:
    """Run the recursion for ``k`` and for ``k_a`` (bracket with its harmonic
    part dropped) and compare."""
    ka = drop_harmonic_bracket(k, c)
    t_full, D_full = compute_tau_and_D(k, c, N)
    t_red, D_red = compute_tau_and_D(ka, c, N)
    diff = {}
    C = t_full.coalgebra
    keys = set(D_full.coderivation.corestriction) | set(D_red.coderivation.corestriction)
    for e in sorted(keys, reverse=True):
        v = dict(D_full.coderivation.corestriction.get(e, {}))
        vadd(v, D_red.coderivation.corestriction.get(e, {}), -1)
        if v:
            diff[C.format(e)] = v
    return ComparisonReport(
        cochains_equal=t_full.values == t_red.values,
        differential_difference=diff,
        reduced_higher_D_zero=D_red.is_zero(2),
    )


def run(g: Dgla, N: int):
    """Contraction, cochain and differential for ``g`` in one call."""
    c, _ = build_contraction(g.complex)
    t, D = compute_tau_and_D(g, c, N)
    return c, t, D


__all__ = [
    "TwistingCochain",
    "PerturbedDifferential",
    "FormalityReport",
    "ComparisonReport",
    "TruncationError",
    "convolution_bracket",
    "canonical_bracket_sum",
    "compute_tau_and_D",
    "check_twisting_cochain",
    "check_formality",
    "compare_truncated_vs_full",
    "tau_bar",
    "tau_bar_chain_failures",
    "projection_section_check",
    "twisting_defect",
    "run",
]
