import json
import os
import subprocess
import sys

import pytest

from obscura.cli import main

SPECS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "specs")


def spec(name):
    return os.path.join(SPECS, name)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_normalize_supercommutative(capsys):
    code, out, _ = run(["normalize", "y . x", "--spec", spec("super.json")], capsys)
    assert code == 0 and out == "-1 * (x . y)\n"
    code, out, _ = run(["normalize", "x . y + y . x", "--spec", spec("super.json")], capsys)
    assert out == "0\n"


def test_spec_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("OBSCURA_SPEC", spec("super.json"))
    code, out, _ = run(["normalize", "y . x", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["details"]["result"] == "-1 * (x . y)"


def test_check_cocycle_pass(capsys):
    code, out, _ = run(["check", "cocycle", spec("super.json")], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "PASS" and doc["law"] == "sa"


def test_witness_nonassoc(capsys):
    code, out, _ = run(["witness", "nonassoc", spec("star.json")], capsys)
    doc = json.loads(out)
    assert code == 1 and doc["status"] == "FAIL"
    inputs = [(tuple(w["inputs"]), w["law"]) for w in doc["witnesses"]]
    assert (("x", "y", "z"), "cond2") in inputs
    w = next(w for w in doc["witnesses"] if w["inputs"] == ["x", "y", "z"] and w["law"] == "cond2")
    assert (w["lhs"], w["rhs"]) == ("1/9", "1/12")


def test_refusal_exit_code(capsys):
    code, out, _ = run(["check", "jacobi", spec("double_bad.json")], capsys)
    assert code == 1 and json.loads(out)["status"] == "REFUSED"


def test_double_checks(capsys):
    for law in ("deformed-cocycle", "skew", "jacobi"):
        code, out, _ = run(["check", law, spec("double.json")], capsys)
        assert code == 0, out
    code, out, _ = run(["check", "jacobi", spec("double.json"), "--ambient", "free"], capsys)
    assert code == 1 and json.loads(out)["witnesses"]


def test_weyl_and_nary(capsys):
    code, out, _ = run(["weyl-reduce", "x o y", "--spec", spec("weyl.json")], capsys)
    assert out == "e + 2 * (y o x)\n"
    code, out, _ = run(["check", "total-commutativity", spec("ternary.json")], capsys)
    assert code == 1 and json.loads(out)["details"]["commuting"] == ["213"]
    code, out, _ = run(["nary-vector", "(1),(0),(1)", "--spec", spec("ternary_pi.json")], capsys)
    doc = json.loads(out)
    assert doc["details"]["components"]["132"] == "1" and doc["details"]["symmetry"] == "1-PARTIAL(132)"


def test_epsilon_pullback_equiv(capsys):
    code, out, _ = run(["epsilon", "(1)", "(1)", "--spec", spec("super.json")], capsys)
    assert json.loads(out)["details"]["value"] == "-1"
    code, out, _ = run(["pullback", "0", "--spec", spec("super.json")], capsys)
    assert code == 0 and json.loads(out)["details"]["automorphisms"] == 1
    code, out, _ = run(["pullback", "3", "--spec", spec("super.json")], capsys)
    assert code == 2
    code, out, _ = run(["equiv", spec("super.json"), spec("super.json")], capsys)
    assert code == 0


def test_usage_and_spec_errors(capsys, tmp_path):
    assert run([], capsys)[0] == 2
    assert run(["normalize", "x * y * z", "--spec", spec("star.json")], capsys)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"grading": {"cyclic_orders": [2]}, "generators": [{"symbol": "x", "mu": "0"}]}')
    code, out, err = run(["check", "epsilon", str(bad)], capsys)
    assert code == 2 and out == "" and "membership must be positive" in err


def test_output_is_deterministic(capsys):
    first = run(["witness", "nonassoc", spec("star.json")], capsys)[1:]
    second = run(["witness", "nonassoc", spec("star.json")], capsys)[1:]
    assert first == second
    first = first[0]
    assert "timing" not in first
    out = run(["check", "cocycle", spec("super.json"), "--timing"], capsys)[1]
    assert "timing_seconds" in json.loads(out)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "obscura", "check", "epsilon", spec("super.json"), "--format", "text"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("e1-e3: PASS")
