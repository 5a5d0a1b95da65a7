import json
import subprocess
import sys

import pytest

from conftest import CORPUS
from formal_kuranishi.cli import main
from formal_kuranishi.problem import example_text, parse_problem

BROKEN_JACOBI = json.dumps({
    "name": "broken",
    "degrees": {"0": ["x", "y", "z"]},
    "bracket": [{"pair": ["x", "y"], "result": [["y", 1]]},
                {"pair": ["y", "z"], "result": [["z", 1]]}],
})


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return _write


@pytest.fixture
def example(write):
    return lambda name: write(f"{name}.spec", example_text(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", CORPUS)
@pytest.mark.parametrize("command", ["validate", "deform", "kuranishi"])
def test_corpus_succeeds(capsys, example, name, command):
    code, out, _ = run(capsys, command, example(name), "--output", "json")
    assert code == 0
    report = json.loads(out)
    assert report["name"] == name


def test_broken_jacobi_exits_one(capsys, write):
    path = write("broken.spec", BROKEN_JACOBI)
    for command in ("validate", "deform", "kuranishi"):
        code, out, _ = run(capsys, command, path, "--output", "json")
        assert code == 1
        report = json.loads(out)
        assert report["ok"] is False
        assert any(v["axiom"] == "jacobi" for v in report["validation"]["violations"])


def test_bad_contraction_exits_one(capsys, write):
    spec = json.loads(example_text("circle"))
    spec["contraction"] = {"homology": {"-1": ["H"]}, "nabla": [["H", "v", 1]],
                           "pi": [["v", "H", 1]], "h": []}
    code, out, _ = run(capsys, "validate", write("c.spec", json.dumps(spec)), "--output", "json")
    assert code == 1
    assert "nabla_pi" in out


@pytest.mark.parametrize("text", ["{not json", '{"name": "x"}', '{"name": "x", "degrees": {"-1": [1]}}'])
def test_malformed_input_exits_two(capsys, write, text):
    code, out, err = run(capsys, "deform", write("bad.spec", text))
    assert code == 2
    assert out == ""
    assert "bad.spec" in json.loads(err)["error"]


def test_missing_file_and_bad_degree_exit_two(capsys, tmp_path, example):
    assert run(capsys, "validate", str(tmp_path / "nope.spec"))[0] == 2
    assert run(capsys, "deform", example("circle"), "--max-degree", "0")[0] == 2


def test_empty_algebra_succeeds(capsys, write):
    path = write("empty.spec", '{"name": "empty", "degrees": {}}')
    for command in ("validate", "deform", "kuranishi"):
        assert run(capsys, command, path)[0] == 0


def test_examples_commands(capsys):
    code, out, _ = run(capsys, "examples", "list")
    assert code == 0 and out.split() == [f"{n}.spec" for n in CORPUS]
    code, out, _ = run(capsys, "examples", "dump", "circle")
    assert code == 0 and out == example_text("circle")
    spec = parse_problem(out)
    assert parse_problem(spec.dumps()) == spec
    assert run(capsys, "examples", "dump", "nope")[0] == 2
    assert run(capsys, "examples", "dump")[0] == 2


def test_output_is_byte_identical_across_processes(example):
    path = example("obstruction")
    outs = set()
    for _ in range(2):
        for fmt in ("json", "text"):
            proc = subprocess.run([sys.executable, "-m", "formal_kuranishi", "kuranishi", path,
                                   "--max-degree", "5", "--output", fmt],
                                  capture_output=True, check=True)
            outs.add((fmt, proc.stdout))
    assert len(outs) == 2


def test_text_and_json_defaults(capsys, example):
    code, out, _ = run(capsys, "validate", example("circle"))
    assert code == 0 and out.startswith("command: validate")
    code, out, _ = run(capsys, "deform", example("circle"))
    assert json.loads(out)["max_degree"] == 8


def test_kuranishi_truncates_longer_algebras(capsys, example):
    code, out, _ = run(capsys, "kuranishi", example("fourterm"), "--max-degree", "6")
    report = json.loads(out)
    assert code == 0 and report["truncated"] is True
    assert report["inverse_series"]["monomial"] == {"s·u": "-v^2 - v^4 - 2*v^6", "s·v": "v"}


def by_length_prefix(small, big):
    assert big[:len(small)] == small


@pytest.mark.parametrize("name", CORPUS)
def test_report_at_n_is_prefix_of_report_at_n_plus_2(capsys, example, name):
    path = example(name)
    small = json.loads(run(capsys, "deform", path, "--max-degree", "4")[1])
    big = json.loads(run(capsys, "deform", path, "--max-degree", "6")[1])
    by_length_prefix(small["tau"], big["tau"])
    by_length_prefix(small["perturbation"], big["perturbation"])
    small = json.loads(run(capsys, "kuranishi", path, "--max-degree", "4")[1])
    big = json.loads(run(capsys, "kuranishi", path, "--max-degree", "6")[1])
    by_length_prefix(small["inverse_series"]["gamma_basis"], big["inverse_series"]["gamma_basis"])
    for key in ("filtration_dims", "word_length_dims"):
        by_length_prefix(small["kuranishi_coalgebra"][key], big["kuranishi_coalgebra"][key])
        by_length_prefix(small["classifying_kernel"][key], big["classifying_kernel"][key])
    for lab, terms in small["inverse_series"]["coefficients"].items():
        by_length_prefix(terms, big["inverse_series"]["coefficients"][lab])
