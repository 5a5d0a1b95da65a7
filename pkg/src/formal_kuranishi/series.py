"""Truncated multivariate power series with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import as_rational


class TruncatedSeries:
    """Series in ``nvars`` variables, all terms of total degree > ``order`` dropped."""

    __slots__ = ("nvars", "order", "coeffs")

    def __init__(self, nvars: int, order: int, coeffs: Mapping[tuple, object] | None = None):
        self.nvars = nvars
        self.order = order
        out = {}
        for exp, c in (coeffs or {}).items():
            exp = tuple(exp)
            if len(exp) != nvars:
                raise ValueError("exponent length does not match the number of variables")
            c = as_rational(c)
            if c and sum(exp) <= order:
                out[exp] = out.get(exp, 0) + c
        self.coeffs = {k: v for k, v in out.items() if v}

    @classmethod
    def constant(cls, nvars: int, order: int, c) -> "TruncatedSeries":
        return cls(nvars, order, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, order: int, i: int) -> "TruncatedSeries":
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, order, {tuple(exp): 1})

    def _like(self, coeffs: dict) -> "TruncatedSeries":
        s = TruncatedSeries(self.nvars, self.order)
        s.coeffs = {k: v for k, v in coeffs.items() if v}
        return s

    def _check(self, other: "TruncatedSeries") -> None:
        if (self.nvars, self.order) != (other.nvars, other.order):
            raise ValueError("series have different variables or truncation")

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.coeffs.get(tuple(exp), Fraction(0))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return self._like(out)

    def __neg__(self) -> "TruncatedSeries":
        return self._like({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        c = as_rational(c)
        return self._like({k: c * v for k, v in self.coeffs.items()})

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        out: dict = {}
        for a, x in self.coeffs.items():
            da = sum(a)
            for b, y in other.coeffs.items():
                if da + sum(b) > self.order:
                    continue
                e = tuple(i + j for i, j in zip(a, b))
                out[e] = out.get(e, 0) + x * y
        return self._like(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.nvars, self.order, self.coeffs) == (other.nvars, other.order, other.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.nvars, order, {k: v for k, v in self.coeffs.items() if sum(k) <= order})

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        """Terms by increasing total degree, then decreasing exponent tuple."""
        return sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), tuple(-i for i in kv[0])))

    def format(self, names: Sequence[str]) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(n if j == 1 else f"{n}^{j}" for n, j in zip(names, exp) if j)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.format([f'z{i + 1}' for i in range(self.nvars)])}, order={self.order})"


class VectorSeries:
    """Series with coefficients in a vector space, stored per basis label."""

    def __init__(self, variables: Sequence[str], order: int, components: Mapping[str, TruncatedSeries] | None = None):
        self.variables = tuple(variables)
        self.order = order
        self.components = {k: v for k, v in (components or {}).items() if not v.is_zero()}

    @classmethod
    def from_coefficients(cls, variables: Sequence[str], order: int,
                          coefficients: Mapping[tuple, Mapping[str, object]]) -> "VectorSeries":
        """Build from ``{exponent: {label: coefficient}}``."""
        n = len(variables)
        per: dict = {}
        for exp, vector in coefficients.items():
            for lab, c in vector.items():
                per.setdefault(lab, {})[tuple(exp)] = c
        return cls(variables, order, {lab: TruncatedSeries(n, order, cs) for lab, cs in per.items()})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def component(self, label: str) -> TruncatedSeries:
        return self.components.get(label, TruncatedSeries(self.nvars, self.order))

    def coefficient(self, exp: Sequence[int]) -> dict:
        exp = tuple(exp)
        return {lab: s.coeffs[exp] for lab, s in self.components.items() if exp in s.coeffs}

    def coefficients(self) -> dict:
        out: dict = {}
        for lab, s in self.components.items():
            for exp, c in s.coeffs.items():
                out.setdefault(exp, {})[lab] = c
        return out

    def __add__(self, other: "VectorSeries") -> "VectorSeries":
        self._check(other)
        out = dict(self.components)
        for lab, s in other.components.items():
            out[lab] = out[lab] + s if lab in out else s
        return VectorSeries(self.variables, self.order, out)

    def __neg__(self) -> "VectorSeries":
        return VectorSeries(self.variables, self.order, {k: -v for k, v in self.components.items()})

    def __sub__(self, other: "VectorSeries") -> "VectorSeries":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorSeries):
            return NotImplemented
        return (self.variables, self.order, self.components) == (other.variables, other.order, other.components)

    def is_zero(self) -> bool:
        return not self.components

    def apply_linear(self, f) -> "VectorSeries":
        """Apply a linear map (callable on ``{label: Fraction}``) coefficientwise."""
        coeffs = {exp: f(v) for exp, v in self.coefficients().items()}
        return VectorSeries.from_coefficients(self.variables, self.order, coeffs)

    def apply_quadratic(self, table: Mapping[tuple[str, str], Mapping[str, Fraction]]) -> "VectorSeries":
        """Substitute into ``x ↦ Σ x_a x_b table[(a, b)]``."""
        out: dict = {}
        for (a, b), value in table.items():
            if a not in self.components or b not in self.components:
                continue
            prod = self.components[a] * self.components[b]
            for lab, c in value.items():
                term = prod.scale(c)
                out[lab] = out[lab] + term if lab in out else term
        return VectorSeries(self.variables, self.order, out)

    def _check(self, other: "VectorSeries") -> None:
        if (self.variables, self.order) != (other.variables, other.order):
            raise ValueError("series have different variables or truncation")

    def format(self, names: Sequence[str] | None = None) -> dict:
        names = names or self.variables
        return {lab: self.components[lab].format(names) for lab in sorted(self.components)}


def identity_series(variables: Sequence[str], order: int, labels: Sequence[str] | None = None) -> VectorSeries:
    """``z ↦ Σ z_i e_i`` where ``e_i`` is ``labels[i]`` (default: the variable names)."""
    labels = list(labels or variables)
    n = len(variables)
    return VectorSeries(variables, order,
                        {lab: TruncatedSeries.variable(n, order, i) for i, lab in enumerate(labels)})

