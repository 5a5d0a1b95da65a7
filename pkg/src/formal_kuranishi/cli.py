"""Command-line interface: ``formal-kuranishi validate|deform|kuranishi|examples``.

Exit status: 0 on success, 1 when validation or a consistency check fails,
2 on unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import sys

from .contraction import build_contraction, validate_contraction
from .dgla import Dgla, ValidationReport, is_two_term, truncate_minus1_minus2, validate
from .hpt import compute_tau_and_D
from .kuranishi import analyze
from .problem import ParseError, ProblemSpec, example_names, example_text, load_problem
from .report import deform_report, kuranishi_report, to_json, to_text, validation

EXIT_OK, EXIT_CHECK, EXIT_INPUT = 0, 1, 2


class _Failure(Exception):
    def __init__(self, code: int, report: dict):
        self.code = code
        self.report = report


def _load(path: str) -> ProblemSpec:
    try:
        return load_problem(path)
    except ParseError as exc:
        raise _Failure(EXIT_INPUT, {"error": str(exc)}) from exc


def _algebra(spec: ProblemSpec, command: str):
    """Build and validate the algebra and its contraction, or raise a failure report."""
    base = {"command": command, "name": spec.name}
    try:
        g = spec.to_dgla()
    except ValueError as exc:
        raise _Failure(EXIT_CHECK, {**base, "ok": False, "error": str(exc)}) from exc
    report = validate(g)
    given = spec.to_contraction(g)
    if given is not None and report.ok:
        report.extend(validate_contraction(given))
    if not report.ok:
        raise _Failure(EXIT_CHECK, {**base, "ok": False, "validation": validation(report)})
    c = given if given is not None else build_contraction(g.complex)[0]
    return g, c, given is not None


def cmd_validate(args) -> tuple[int, dict]:
    spec = _load(args.file)
    g, c, given = _algebra(spec, "validate")
    return EXIT_OK, {
        "command": "validate",
        "name": spec.name,
        "ok": True,
        "dims": {str(j): g.space.dim(j) for j in g.space.degrees},
        "homology_dims": {str(j): c.small.space.dim(j) for j in c.small.space.degrees},
        "contraction": "given" if given else "computed",
        "validation": validation(ValidationReport()),
    }


def _max_degree(args, spec: ProblemSpec) -> int:
    n = args.max_degree if args.max_degree is not None else spec.max_degree
    if n < 1:
        raise _Failure(EXIT_INPUT, {"error": "--max-degree must be at least 1"})
    return n


def cmd_deform(args) -> tuple[int, dict]:
    spec = _load(args.file)
    N = _max_degree(args, spec)
    g, c, given = _algebra(spec, "deform")
    t, D = compute_tau_and_D(g, c, N)
    report = deform_report(spec.name, g, c, given, N, t, D)
    return (EXIT_OK if report["checks"]["ok"] else EXIT_CHECK), report


def cmd_kuranishi(args) -> tuple[int, dict]:
    spec = _load(args.file)
    N = _max_degree(args, spec)
    g, c, given = _algebra(spec, "kuranishi")
    truncated = not is_two_term(g)
    if truncated:
        k: Dgla = truncate_minus1_minus2(g, c.h)
        kc = build_contraction(k.complex)[0]
        given = False
    else:
        k, kc = g, c
    result = analyze(k, N, kc)
    report = kuranishi_report(spec.name, truncated, result, given)
    return (EXIT_OK if result.verification.ok else EXIT_CHECK), report


def cmd_examples(args) -> tuple[int, str]:
    if args.action == "list":
        return EXIT_OK, "".join(f"{n}.spec\n" for n in example_names())
    if not args.name:
        raise _Failure(EXIT_INPUT, {"error": "examples dump needs a name"})
    try:
        return EXIT_OK, example_text(args.name)
    except KeyError as exc:
        raise _Failure(EXIT_INPUT, {"error": f"unknown example {args.name!r}; "
                                             f"available: {', '.join(example_names())}"}) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formal-kuranishi",
        description="Exact perturbation-lemma computations for differential graded Lie algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the algebra (and any given contraction)")
    p.add_argument("file")
    p.add_argument("--output", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_validate)

    for name, func, help_text in [
        ("deform", cmd_deform, "twisting cochain, perturbed differential and formality"),
        ("kuranishi", cmd_kuranishi, "Kuranishi map, formal inverse, obstructions, Kuranishi coalgebra"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file")
        p.add_argument("--max-degree", type=int, default=None,
                       help="truncation word length N (default: the file's max_degree, else 8)")
        p.add_argument("--output", choices=["json", "text"], default="json")
        p.set_defaults(func=func)

    p = sub.add_parser("examples", help="list or print the bundled problem files")
    p.add_argument("action", choices=["list", "dump"])
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "output", "json")
    try:
        code, payload = args.func(args)
    except _Failure as f:
        code, payload = f.code, f.report
    if isinstance(payload, str):
        sys.stdout.write(payload)
    else:
        stream = sys.stdout if code != EXIT_INPUT else sys.stderr
        stream.write(to_json(payload) if fmt == "json" else to_text(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
