"""Graded symmetric coalgebra on a finite set of graded generators.

Basis elements are divided-power monomials ``γ_{j1}(b1)···γ_{jn}(bn)``
stored as exponent tuples ``(j1, ..., jn)`` over the generators in label
order; odd generators have exponent at most 1. As an element of the tensor
coalgebra such a monomial is the signed sum of all distinct rearrangements
of its word, so

    Δ(γ_n(b)) = Σ_{j+k=n} γ_j(b) ⊗ γ_k(b)

and the diagonal is multiplicative with Koszul signs. All coefficients of
the diagonal are ±1 in this basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from math import comb, factorial
from typing import Mapping

from .graded import GradedSpace, desuspend_label, suspend_label, vadd

Elem = tuple  # exponent tuple


class TruncationError(ValueError):
    """Raised when an operation needs word lengths beyond the truncation."""


class SymCoalgebra:
    """``S^c_{≤N}[U]`` for a graded space ``U`` of generators."""

    def __init__(self, generators: GradedSpace, max_word_length: int):
        if max_word_length < 0:
            raise ValueError("max_word_length must be nonnegative")
        self.generators = generators
        self.max_word_length = max_word_length
        self.labels: tuple[str, ...] = generators.labels()
        self.gen_degrees: tuple[int, ...] = tuple(generators.degree(x) for x in self.labels)
        self.odd: tuple[bool, ...] = tuple(bool(d & 1) for d in self.gen_degrees)
        self.position = {lab: i for i, lab in enumerate(self.labels)}
        self.n = len(self.labels)
        self.zero: Elem = (0,) * self.n
        self._elements: dict[int, list[Elem]] = {}
        self._splits: dict[Elem, list] = {}
        self._reduced: dict[Elem, list] = {}
        self._products: dict = {}

    def __repr__(self) -> str:
        return f"SymCoalgebra({list(self.labels)}, N={self.max_word_length})"

    # basis ----------------------------------------------------------------

    def unit(self, label: str) -> Elem:
        e = [0] * self.n
        e[self.position[label]] = 1
        return tuple(e)

    def word_length(self, e: Elem) -> int:
        return sum(e)

    def degree(self, e: Elem) -> int:
        return sum(j * d for j, d in zip(e, self.gen_degrees))

    def parity(self, e: Elem) -> int:
        return sum(j for j, o in zip(e, self.odd) if o) & 1

    def elements(self, length: int) -> list[Elem]:
        """Basis of ``S^c_length`` in lexicographically decreasing exponent order."""
        if length > self.max_word_length:
            raise TruncationError(f"word length {length} exceeds truncation {self.max_word_length}")
        if length not in self._elements:
            out: list[Elem] = []

            def rec(i: int, left: int, acc: list[int]) -> None:
                if i == self.n:
                    if left == 0:
                        out.append(tuple(acc))
                    return
                top = min(left, 1) if self.odd[i] else left
                for j in range(top, -1, -1):
                    acc.append(j)
                    rec(i + 1, left - j, acc)
                    acc.pop()

            rec(0, length, [])
            self._elements[length] = out
        return self._elements[length]

    def basis(self, max_length: int | None = None) -> list[Elem]:
        top = self.max_word_length if max_length is None else max_length
        return [e for ell in range(top + 1) for e in self.elements(ell)]

    def check(self, e: Elem) -> None:
        if sum(e) > self.max_word_length:
            raise TruncationError(f"word length {sum(e)} exceeds truncation {self.max_word_length}")

    def format(self, e: Elem) -> str:
        if not any(e):
            return "1"
        parts = []
        for j, lab in zip(e, self.labels):
            if j == 1:
                parts.append(lab)
            elif j > 1:
                parts.append(f"γ{j}({lab})")
        return "·".join(parts)

    # diagonal ---------------------------------------------------------------

    def splits(self, e: Elem) -> list[tuple[Elem, Elem, int]]:
        """Full diagonal ``Δ(e) = Σ sign · L ⊗ R`` as ``(L, R, sign)``."""
        cached = self._splits.get(e)
        if cached is not None:
            return cached
        out = []
        odd = self.odd
        for left in iproduct(*(range(j + 1) for j in e)):
            right = tuple(a - b for a, b in zip(e, left))
            # reorder Π(L_i ⊗ R_i) into (Π L_i) ⊗ (Π R_i): R_i passes L_k, k > i
            sign = 1
            seen_odd_right = 0
            for i in range(self.n):
                if odd[i]:
                    if left[i] and seen_odd_right & 1:
                        sign = -sign
                    if right[i]:
                        seen_odd_right += 1
            out.append((left, right, sign))
        self._splits[e] = out
        return out

    def reduced_splits(self, e: Elem) -> list[tuple[Elem, Elem, int]]:
        """Reduced diagonal: both sides of positive word length."""
        cached = self._reduced.get(e)
        if cached is None:
            ell = sum(e)
            cached = [(L, R, s) for L, R, s in self.splits(e) if 0 < sum(L) < ell]
            self._reduced[e] = cached
        return cached

    def diagonal_split(self, e: Elem, j: int, k: int) -> list[tuple[Elem, Elem, Fraction, int]]:
        """The ``(j, k)`` component of the diagonal of ``e``."""
        if j + k != sum(e):
            raise ValueError("j + k must equal the word length of e")
        return [(L, R, Fraction(1), s) for L, R, s in self.splits(e) if sum(L) == j]

    # product ------------------------------------------------------------------

    def product(self, a: Elem, b: Elem) -> tuple[Fraction, Elem] | None:
        """Product in the divided-power algebra: ``(coefficient, element)`` or
        None when it vanishes (an odd generator squared)."""
        key = (a, b)
        if key in self._products:
            return self._products[key]
        coeff = 1
        sign = 1
        for i in range(self.n):
            x, y = a[i], b[i]
            if self.odd[i]:
                if x and y:
                    self._products[key] = None
                    return None
            else:
                if x and y:
                    coeff *= comb(x + y, x)
        # sign: Π_{i<k} (-1)^{|y_i||x_k|}
        odd_y_before = 0
        for i in range(self.n):
            if self.odd[i]:
                if a[i] and odd_y_before & 1:
                    sign = -sign
                if b[i]:
                    odd_y_before += 1
        result = (Fraction(sign * coeff), tuple(x + y for x, y in zip(a, b)))
        self._products[key] = result
        return result

    def multiply(self, u: Mapping[Elem, Fraction], v: Mapping[Elem, Fraction]) -> dict:
        out: dict = {}
        for a, ca in u.items():
            for b, cb in v.items():
                p = self.product(a, b)
                if p is not None:
                    c, e = p
                    x = out.get(e, 0) + c * ca * cb
                    if x:
                        out[e] = x
                    else:
                        out.pop(e, None)
        return out

    def from_generators(self, v: Mapping[str, Fraction]) -> dict:
        """Embed a generator vector as a word-length-one element."""
        return {self.unit(lab): c for lab, c in v.items() if c}

    def to_monomial(self, v: Mapping[Elem, Fraction]) -> dict:
        """Change of basis ``γ_j(b) = b^j / j!``: γ-coefficients to coefficients
        on monomials ``b^𝐣`` of the symmetric algebra."""
        out = {}
        for e, c in v.items():
            denom = 1
            for j in e:
                denom *= factorial(j)
            out[e] = c / denom
        return out

    def from_monomial(self, v: Mapping[Elem, Fraction]) -> dict:
        out = {}
        for e, c in v.items():
            mult = 1
            for j in e:
                mult *= factorial(j)
            out[e] = c * mult
        return out


# coderivations ----------------------------------------------------------------

@dataclass
class CoderivationRep:
    """A coderivation given by its corestriction ``S^c → U``.

    ``corestriction`` maps basis elements to generator vectors
    ``{label: Fraction}``; elements absent from it map to zero.
    """
    coalgebra: SymCoalgebra
    degree: int
    corestriction: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def component(self, length: int) -> dict:
        return {e: v for e, v in self.corestriction.items() if sum(e) == length}

    def apply_basis(self, e: Elem) -> dict:
        """``D(e) = Σ sign · (-1)^{|D||L|} L · c(R)`` over the diagonal of ``e``."""
        cached = self._cache.get(e)
        if cached is not None:
            return cached
        C = self.coalgebra
        C.check(e)
        out: dict = {}
        cor = self.corestriction
        odd_D = self.degree & 1
        for L, R, sign in C.splits(e):
            value = cor.get(R)
            if not value:
                continue
            s = sign
            if odd_D and C.parity(L):
                s = -s
            for lab, c in value.items():
                p = C.product(L, C.unit(lab))
                if p is None:
                    continue
                coeff, elem = p
                x = out.get(elem, 0) + s * coeff * c
                if x:
                    out[elem] = x
                else:
                    out.pop(elem, None)
        self._cache[e] = out
        return out

    def __call__(self, v: Mapping[Elem, Fraction]) -> dict:
        out: dict = {}
        for e, c in v.items():
            vadd(out, self.apply_basis(e), c)
        return out

    def project(self, v: Mapping[Elem, Fraction]) -> dict:
        """Cogenerating projection of a coalgebra vector to generators."""
        C = self.coalgebra
        out: dict = {}
        for e, c in v.items():
            if sum(e) == 1:
                lab = C.labels[e.index(1)]
                out[lab] = out.get(lab, 0) + c
        return {k: x for k, x in out.items() if x}


def lift_coderivation(c: CoderivationRep, N: int | None = None) -> dict:
    """Full values ``{e: D(e)}`` on every basis element of ``S^c_{≤N}``."""
    C = c.coalgebra
    top = C.max_word_length if N is None else N
    if top > C.max_word_length:
        raise TruncationError(f"N = {top} exceeds truncation {C.max_word_length}")
    return {e: c.apply_basis(e) for e in C.basis(top)}


def coderivation_square(c: CoderivationRep, N: int | None = None) -> dict:
    """Nonzero values of ``D ∘ D`` on ``S^c_{≤N}``."""
    C = c.coalgebra
    top = C.max_word_length if N is None else N
    out = {}
    for e in C.basis(top):
        v = c(c.apply_basis(e))
        if v:
            out[e] = v
    return out


def classifying_corestriction(g, coalgebra: SymCoalgebra | None = None,
                              max_word_length: int = 2) -> CoderivationRep:
    """Corestriction of the classifying-coalgebra differential on ``S^c[s g]``.

    Word length one: the suspended differential ``-s d s⁻¹``. Word length
    two: ``x·y ↦ (-1)^{|x|} s[s⁻¹x, s⁻¹y]`` for generators ``x < y`` and
    ``γ₂(x) ↦ ½ (-1)^{|x|} s[s⁻¹x, s⁻¹x]``.
    """
    sg = g.space.shifted(1)
    C = coalgebra or SymCoalgebra(sg, max_word_length)
    if C.generators != sg:
        raise ValueError("coalgebra generators must be the suspension of the algebra")
    cor: dict = {}
    for lab in sg.labels():
        image = g.d({desuspend_label(lab): Fraction(1)})
        if image:
            cor[C.unit(lab)] = {suspend_label(t): -c for t, c in image.items()}
    labels = sg.labels()
    for i, x in enumerate(labels):
        sign = -1 if sg.degree(x) & 1 else 1
        for y in labels[i:]:
            if x == y and C.odd[C.position[x]]:
                continue
            value = g.bracket_basis(desuspend_label(x), desuspend_label(y))
            if not value:
                continue
            factor = Fraction(sign, 2) if x == y else Fraction(sign)
            e = C.product(C.unit(x), C.unit(y))[1]
            cor[e] = {suspend_label(t): factor * c for t, c in value.items()}
    return CoderivationRep(C, -1, cor)


def cce_corestriction(hg, max_word_length: int = 2) -> CoderivationRep:
    """Chevalley-Eilenberg corestriction of a graded Lie algebra (zero differential)."""
    if not hg.d.is_zero():
        raise ValueError("expected a graded Lie algebra with zero differential")
    return classifying_corestriction(hg, max_word_length=max_word_length)


# coalgebra morphisms --------------------------------------------------------------

@dataclass
class CoalgebraMorphismRep:
    """Degree-zero coalgebra map ``S^c[U] → S^c[W]`` given by its
    corestriction ``S^c[U] → W`` (zero on the coaugmentation)."""
    source: SymCoalgebra
    target: SymCoalgebra
    corestriction: dict = field(default_factory=dict)
    _powers: dict = field(default_factory=dict, repr=False, compare=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def _power(self, e: Elem, n: int) -> dict:
        """``μ_n (f ⊗ ··· ⊗ f) Δ̄^{(n)}(e)`` (without the 1/n!)."""
        key = (e, n)
        cached = self._powers.get(key)
        if cached is not None:
            return cached
        T = self.target
        if n == 1:
            out = T.from_generators(self.corestriction.get(e, {}))
        else:
            out = {}
            for L, R, sign in self.source.reduced_splits(e):
                if sum(R) < n - 1:
                    continue
                fl = self.corestriction.get(L)
                if not fl:
                    continue
                rest = self._power(R, n - 1)
                if rest:
                    vadd(out, T.multiply(T.from_generators(fl), rest), sign)
        self._powers[key] = out
        return out

    def apply_basis(self, e: Elem) -> dict:
        cached = self._cache.get(e)
        if cached is not None:
            return cached
        self.source.check(e)
        ell = sum(e)
        if ell == 0:
            out = {self.target.zero: Fraction(1)}
        else:
            out = {}
            for n in range(1, ell + 1):
                p = self._power(e, n)
                if p:
                    vadd(out, p, Fraction(1, factorial(n)))
        self._cache[e] = out
        return out

    def __call__(self, v: Mapping[Elem, Fraction]) -> dict:
        out: dict = {}
        for e, c in v.items():
            vadd(out, self.apply_basis(e), c)
        return out


def lift_morphism(m: CoalgebraMorphismRep, N: int | None = None) -> dict:
    """Full values ``{e: F(e)}`` on ``S^c_{≤N}`` of the source."""
    top = m.source.max_word_length if N is None else N
    if top > m.source.max_word_length:
        raise TruncationError(f"N = {top} exceeds truncation {m.source.max_word_length}")
    return {e: m.apply_basis(e) for e in m.source.basis(top)}


def linear_morphism(source: SymCoalgebra, target: SymCoalgebra, f) -> CoalgebraMorphismRep:
    """``S^c[f]`` for a degree-zero linear map ``f`` on generators
    (anything callable on ``{label: Fraction}``)."""
    cor = {}
    for lab in source.labels:
        image = f({lab: Fraction(1)})
        if image:
            cor[source.unit(lab)] = image
    return CoalgebraMorphismRep(source, target, cor)


def compose_morphisms(f: CoalgebraMorphismRep, g: CoalgebraMorphismRep, v: Mapping) -> dict:
    return f(g(v))


def check_coderivation_rule(c: CoderivationRep, N: int | None = None) -> list[Elem]:
    """Basis elements where ``Δ D ≠ (D ⊗ 1 + 1 ⊗ D) Δ`` fails (should be none)."""
    C = c.coalgebra
    top = C.max_word_length if N is None else N
    bad = []
    odd_D = c.degree & 1
    for e in C.basis(top):
        lhs: dict = {}
        for x, cx in c.apply_basis(e).items():
            for L, R, s in C.splits(x):
                key = (L, R)
                lhs[key] = lhs.get(key, 0) + s * cx
        rhs: dict = {}
        for L, R, s in C.splits(e):
            for x, cx in c.apply_basis(L).items():
                key = (x, R)
                rhs[key] = rhs.get(key, 0) + s * cx
            sgn = -1 if odd_D and C.parity(L) else 1
            for x, cx in c.apply_basis(R).items():
                key = (L, x)
                rhs[key] = rhs.get(key, 0) + s * sgn * cx
        keys = set(lhs) | set(rhs)
        if any(lhs.get(k, 0) != rhs.get(k, 0) for k in keys):
            bad.append(e)
    return bad
