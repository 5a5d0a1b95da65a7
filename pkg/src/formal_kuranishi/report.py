"""Deterministic JSON and text reports for the command-line tool."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping

from .contraction import Contraction, validate_contraction
from .dgla import Dgla, ValidationReport
from .hpt import (
    PerturbedDifferential,
    TwistingCochain,
    check_formality,
    check_twisting_cochain,
    projection_section_check,
)
from .kuranishi import KuranishiResult, variable_name
from .symcoalg import SymCoalgebra


def rational(x: Fraction) -> str:
    return str(Fraction(x))


def vector(v: Mapping) -> dict:
    return {str(k): rational(c) for k, c in sorted(v.items()) if c}


def linear_map(f) -> dict:
    """Nonzero columns of a GradedMap as ``{source label: vector}``."""
    return {lab: vector(col) for lab, col in sorted(f.columns.items()) if col}


def space_dict(space) -> dict:
    return {str(j): list(space.labels(j)) for j in space.degrees}


def validation(report: ValidationReport) -> dict:
    return report.to_dict()


def algebra_dict(g: Dgla) -> dict:
    return {
        "degrees": space_dict(g.space),
        "differential": linear_map(g.d),
        "bracket": [
            {"pair": [x, y], "result": vector(v)}
            for (x, y), v in sorted(g.upper_entries().items(),
                                    key=lambda kv: (g.space.order(kv[0][0]), g.space.order(kv[0][1])))
        ],
    }


def contraction_dict(c: Contraction, given: bool) -> dict:
    return {
        "source": "given" if given else "computed",
        "homology": space_dict(c.small.space),
        "nabla": linear_map(c.nabla),
        "pi": linear_map(c.pi),
        "h": linear_map(c.h),
        "checks": validation(validate_contraction(c)),
    }


def _by_length(C: SymCoalgebra, values: Mapping, lengths) -> list:
    out = []
    for ell in lengths:
        rows = [[C.format(e), vector(values[e])] for e in C.elements(ell) if values.get(e)]
        out.append({"word_length": ell, "values": rows})
    return out


def deform_report(name: str, g: Dgla, c: Contraction, given: bool, N: int,
                  t: TwistingCochain, D: PerturbedDifferential) -> dict:
    C = t.coalgebra
    checks = check_twisting_cochain(t, D, g, c)
    for e in projection_section_check(t, c):
        checks.add("projection_section", (sum(e), C.format(e)))
    formality = check_formality(g, c, N, (t, D))
    perturbation = _by_length(C, D.coderivation.corestriction, range(2, N + 1))
    for entry in perturbation:
        entry["order"] = entry["word_length"] - 1
    return {
        "command": "deform",
        "name": name,
        "max_degree": N,
        "algebra": algebra_dict(g),
        "contraction": contraction_dict(c, given),
        "tau": _by_length(C, t.values, range(1, N + 1)),
        "perturbation": perturbation,
        "checks": validation(checks),
        "formality": formality.to_dict(),
    }


def kuranishi_report(name: str, truncated: bool, result: KuranishiResult, given: bool) -> dict:
    r = result
    N = r.max_word_length
    C = r.cochain.coalgebra
    kmap = r.kmap
    vnames = [variable_name(v) for v in kmap.J.variables]
    znames = [variable_name(v) for v in r.inverse.variables]
    gamma = {e: v for e, v in r.cochain.suspended().items() if all(
        e[i] == 0 for i, d in enumerate(C.gen_degrees) if d != 0)}
    inverse_coeffs = {
        lab: [[list(exp), rational(c)] for exp, c in s.sorted_terms()]
        for lab, s in sorted(r.inverse.components.items())
    }
    return {
        "command": "kuranishi",
        "name": name,
        "max_degree": N,
        "truncated": truncated,
        "algebra": algebra_dict(r.algebra),
        "contraction": contraction_dict(r.contraction, given),
        "kuranishi_map": {
            "variables": dict(zip(kmap.J.variables, vnames)),
            "J": kmap.J.format(vnames),
            "F": kmap.F.format(vnames),
        },
        "inverse_series": {
            "variables": dict(zip(r.inverse.variables, znames)),
            "gamma_basis": _by_length(C, gamma, range(1, N + 1)),
            "monomial": r.inverse.format(znames),
            "coefficients": inverse_coeffs,
        },
        "obstruction_series": [
            {"target": lab, "series": s.format(znames)} for lab, s in r.obstructions
        ],
        "kuranishi_coalgebra": {
            "filtration_dims": r.coalgebra.filtration_dims(),
            "word_length_dims": r.coalgebra.word_length_dims(),
            "basis": [
                {"word_length": level, "vector": {C.format(e): rational(x) for e, x in sorted(v.items())}}
                for v, level in zip(r.coalgebra.vectors, r.coalgebra.levels)
            ],
        },
        "classifying_kernel": {
            "filtration_dims": r.cv_kernel.filtration_dims(),
            "word_length_dims": r.cv_kernel.word_length_dims(),
        },
        "verification": validation(r.verification),
    }


def to_json(report: Mapping) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def to_text(report: Mapping) -> str:
    """Indented outline of the report with keys in sorted order."""
    lines: list[str] = []
    _render(report, 0, lines)
    return "\n".join(lines) + "\n"


def _scalar(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    return str(x)


def _is_flat(x) -> bool:
    return not isinstance(x, (dict, list)) or (
        isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x))


def _inline(x) -> str:
    if isinstance(x, list):
        return "(" + ", ".join(_scalar(y) for y in x) + ")"
    return _scalar(x)


def _render(x, depth: int, lines: list) -> None:
    pad = "  " * depth
    if isinstance(x, dict):
        if not x:
            lines.append(pad + "(none)")
        for k in sorted(x):
            v = x[k]
            if _is_flat(v):
                lines.append(f"{pad}{k}: {_inline(v)}")
            elif isinstance(v, dict) and v and all(_is_flat(y) for y in v.values()):
                lines.append(f"{pad}{k}:")
                for kk in sorted(v):
                    lines.append(f"{pad}  {kk} = {_inline(v[kk])}")
            else:
                lines.append(f"{pad}{k}:")
                _render(v, depth + 1, lines)
    elif isinstance(x, list):
        if not x:
            lines.append(pad + "(none)")
        for item in x:
            if _is_flat(item):
                lines.append(f"{pad}- {_inline(item)}")
            elif isinstance(item, list) and len(item) == 2 and not isinstance(item[0], (dict, list)):
                lines.append(f"{pad}- {item[0]} ↦ {_inline_vector(item[1])}")
            else:
                lines.append(f"{pad}-")
                _render(item, depth + 1, lines)
    else:
        lines.append(pad + _scalar(x))


def _inline_vector(v) -> str:
    if isinstance(v, dict):
        if not v:
            return "0"
        return " + ".join(f"{c}·{k}" for k, c in sorted(v.items()))
    return _inline(v)
