"""JSON problem files: a DGLA on a labelled basis, optionally with a contraction.

Example::

    {
      "name": "circle",
      "field": "Q",
      "max_degree": 8,
      "degrees": {"-1": ["v", "u"], "-2": ["w"]},
      "differential": [["u", "w", "-1"]],
      "bracket": [
        {"pair": ["v", "v"], "result": [["w", "2"]]},
        {"pair": ["u", "u"], "result": [["w", "2"]]}
      ]
    }

Coefficients are integers or strings ``"p/q"``; floats are rejected.
Bracket pairs may be given in either order and are stored in label order
(degree descending, then listing order) using graded antisymmetry. An
optional ``"contraction"`` object gives ``"homology"`` (degrees to labels)
and entry lists ``"nabla"``, ``"pi"``, ``"h"`` in the same
``[source, target, coefficient]`` form as the differential.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .contraction import Contraction
from .dgla import Dgla, koszul
from .graded import ChainComplex, GradedMap, GradedSpace
from .linalg import as_rational

DEFAULT_MAX_DEGREE = 8

Entry = tuple  # (source, target, Fraction)


class ParseError(ValueError):
    """Malformed problem file; the message names the offending location."""


@dataclass(frozen=True)
class ContractionSpec:
    homology: tuple  # ((degree, (labels...)), ...)
    nabla: tuple
    pi: tuple
    h: tuple


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    degrees: tuple  # ((degree, (labels...)), ...) by descending degree
    differential: tuple = ()
    bracket: tuple = ()  # (((x, y), ((label, Fraction), ...)), ...)
    contraction: ContractionSpec | None = None
    max_degree: int = DEFAULT_MAX_DEGREE
    field: str = "Q"

    @property
    def basis(self) -> dict:
        return {j: list(labels) for j, labels in self.degrees}

    def space(self) -> GradedSpace:
        return GradedSpace(self.basis)

    def to_dgla(self) -> Dgla:
        """Build the algebra; raises ValueError if ``d ∘ d ≠ 0`` or labels clash."""
        space = self.space()
        cx = ChainComplex(space, _map_from_entries(space, space, -1, self.differential))
        table = {}
        for (x, y), result in self.bracket:
            value = dict(result)
            table[(x, y)] = value
            if x != y:
                s = -koszul(space.degree(x), space.degree(y))
                table[(y, x)] = {k: s * c for k, c in value.items()}
        return Dgla(cx, table)

    def to_contraction(self, g: Dgla) -> Contraction | None:
        if self.contraction is None:
            return None
        spec = self.contraction
        H = GradedSpace({j: list(labels) for j, labels in spec.homology})
        small = ChainComplex.zero_differential(H)
        return Contraction(
            g.complex, small,
            _map_from_entries(H, g.space, 0, spec.nabla),
            _map_from_entries(g.space, H, 0, spec.pi),
            _map_from_entries(g.space, g.space, 1, spec.h),
        )

    def with_max_degree(self, n: int) -> "ProblemSpec":
        return ProblemSpec(self.name, self.degrees, self.differential, self.bracket,
                           self.contraction, n, self.field)

    # serialization ------------------------------------------------------------

    def to_json_dict(self) -> dict:
        out = {
            "name": self.name,
            "field": self.field,
            "max_degree": self.max_degree,
            "degrees": {str(j): list(labels) for j, labels in self.degrees},
            "differential": [[s, t, str(c)] for s, t, c in self.differential],
            "bracket": [
                {"pair": [x, y], "result": [[lab, str(c)] for lab, c in result]}
                for (x, y), result in self.bracket
            ],
        }
        if self.contraction is not None:
            k = self.contraction
            out["contraction"] = {
                "homology": {str(j): list(labels) for j, labels in k.homology},
                "nabla": [[s, t, str(c)] for s, t, c in k.nabla],
                "pi": [[s, t, str(c)] for s, t, c in k.pi],
                "h": [[s, t, str(c)] for s, t, c in k.h],
            }
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, ensure_ascii=False) + "\n"


def _map_from_entries(source: GradedSpace, target: GradedSpace, degree: int, entries) -> GradedMap:
    cols: dict = {}
    for s, t, c in entries:
        col = cols.setdefault(s, {})
        col[t] = col.get(t, 0) + c
    return GradedMap.from_columns(source, target, degree, cols)


# parsing ----------------------------------------------------------------------

def _rational(value, where: str) -> Fraction:
    try:
        return as_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: expected an integer or a 'p/q' string, got {value!r}") from exc


def _degrees(obj, where: str) -> tuple:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object mapping degrees to label lists")
    out = []
    seen = set()
    for key, labels in obj.items():
        try:
            j = int(key)
        except ValueError as exc:
            raise ParseError(f"{where}: degree key {key!r} is not an integer") from exc
        if not isinstance(labels, list) or not all(isinstance(x, str) and x for x in labels):
            raise ParseError(f"{where}[{key}]: expected a list of nonempty label strings")
        for x in labels:
            if x in seen:
                raise ParseError(f"{where}[{key}]: duplicate label {x!r}")
            seen.add(x)
        if labels:
            out.append((j, tuple(labels)))
    out.sort(key=lambda p: -p[0])
    return tuple(out)


def _entries(obj, where: str, sources: set, targets: set) -> tuple:
    if obj is None:
        return ()
    if not isinstance(obj, list):
        raise ParseError(f"{where}: expected a list of [source, target, coefficient] entries")
    out = []
    for i, e in enumerate(obj):
        if not (isinstance(e, list) and len(e) == 3 and isinstance(e[0], str) and isinstance(e[1], str)):
            raise ParseError(f"{where}[{i}]: expected [source, target, coefficient]")
        s, t, c = e
        if s not in sources:
            raise ParseError(f"{where}[{i}]: unknown source label {s!r}")
        if t not in targets:
            raise ParseError(f"{where}[{i}]: unknown target label {t!r}")
        c = _rational(c, f"{where}[{i}]")
        if c:
            out.append((s, t, c))
    return tuple(out)


def parse_problem(text: str, source: str = "<input>") -> ProblemSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return problem_from_dict(obj, source)


def problem_from_dict(obj, source: str = "<input>") -> ProblemSpec:
    if not isinstance(obj, dict):
        raise ParseError(f"{source}: top level must be an object")
    known = {"name", "field", "max_degree", "degrees", "differential", "bracket", "contraction"}
    extra = sorted(set(obj) - known)
    if extra:
        raise ParseError(f"{source}: unknown field(s) {', '.join(extra)}")
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise ParseError(f"{source}: name must be a string")
    fld = obj.get("field", "Q")
    if fld != "Q":
        raise ParseError(f"{source}: field must be \"Q\", got {fld!r}")
    n = obj.get("max_degree", DEFAULT_MAX_DEGREE)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"{source}: max_degree must be a positive integer")
    if "degrees" not in obj:
        raise ParseError(f"{source}: missing field 'degrees'")
    degrees = _degrees(obj["degrees"], f"{source}: degrees")
    space = GradedSpace({j: list(l) for j, l in degrees})
    labels = set(space.labels())
    differential = _entries(obj.get("differential"), f"{source}: differential", labels, labels)
    bracket = _bracket(obj.get("bracket"), f"{source}: bracket", space)
    contraction = None
    if obj.get("contraction") is not None:
        contraction = _contraction(obj["contraction"], f"{source}: contraction", labels)
    return ProblemSpec(name, degrees, differential, bracket, contraction, n, fld)


def _bracket(obj, where: str, space: GradedSpace) -> tuple:
    if obj is None:
        return ()
    if not isinstance(obj, list):
        raise ParseError(f"{where}: expected a list of {{pair, result}} objects")
    table: dict = {}
    for i, e in enumerate(obj):
        at = f"{where}[{i}]"
        if not isinstance(e, dict) or set(e) != {"pair", "result"}:
            raise ParseError(f"{at}: expected an object with keys 'pair' and 'result'")
        pair, result = e["pair"], e["result"]
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair)):
            raise ParseError(f"{at}.pair: expected two labels")
        x, y = pair
        for lab in pair:
            if lab not in space:
                raise ParseError(f"{at}.pair: unknown label {lab!r}")
        if not isinstance(result, list):
            raise ParseError(f"{at}.result: expected a list of [label, coefficient]")
        value: dict = {}
        for m, r in enumerate(result):
            if not (isinstance(r, list) and len(r) == 2 and isinstance(r[0], str)):
                raise ParseError(f"{at}.result[{m}]: expected [label, coefficient]")
            if r[0] not in space:
                raise ParseError(f"{at}.result[{m}]: unknown label {r[0]!r}")
            value[r[0]] = value.get(r[0], 0) + _rational(r[1], f"{at}.result[{m}]")
        if space.order(x) > space.order(y):
            s = -koszul(space.degree(x), space.degree(y))
            x, y = y, x
            value = {k: s * c for k, c in value.items()}
        if (x, y) in table:
            raise ParseError(f"{at}: bracket [{x}, {y}] given twice")
        table[(x, y)] = tuple((k, c) for k, c in value.items() if c)
    keys = sorted(table, key=lambda p: (space.order(p[0]), space.order(p[1])))
    return tuple((k, table[k]) for k in keys if table[k])


def _contraction(obj, where: str, labels: set) -> ContractionSpec:
    if not isinstance(obj, dict) or "homology" not in obj:
        raise ParseError(f"{where}: expected an object with 'homology', 'nabla', 'pi', 'h'")
    extra = sorted(set(obj) - {"homology", "nabla", "pi", "h"})
    if extra:
        raise ParseError(f"{where}: unknown field(s) {', '.join(extra)}")
    homology = _degrees(obj["homology"], f"{where}.homology")
    small = {x for _, ls in homology for x in ls}
    clash = small & labels
    if clash:
        raise ParseError(f"{where}.homology: labels {sorted(clash)} clash with the algebra's labels")
    return ContractionSpec(
        homology,
        _entries(obj.get("nabla"), f"{where}.nabla", small, labels),
        _entries(obj.get("pi"), f"{where}.pi", labels, small),
        _entries(obj.get("h"), f"{where}.h", labels, labels),
    )


def load_problem(path: str | Path) -> ProblemSpec:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc
    return parse_problem(text, str(path))


# bundled corpus -----------------------------------------------------------------

def example_names() -> list[str]:
    root = resources.files("formal_kuranishi") / "data"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".spec"))


def example_text(name: str) -> str:
    if name.endswith(".spec"):
        name = name[:-5]
    if name not in example_names():
        raise KeyError(name)
    return (resources.files("formal_kuranishi") / "data" / f"{name}.spec").read_text(encoding="utf-8")


def load_example(name: str) -> ProblemSpec:
    return parse_problem(example_text(name), f"{name}.spec")
