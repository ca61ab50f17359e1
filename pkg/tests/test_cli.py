import json
import subprocess
import sys

import pytest

from pisotlab.cli import dumps, run


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "poly, D, factors",
    [("x^3-x-1", -23, [1, 1, 23]), ("x^3-x^2-x-1", -44, [1, 2, 22]), ("x^2-x-1", 5, [1, 5])],
)
def test_analyze_json(capsys, poly, D, factors):
    code, out, _ = invoke(capsys, "analyze", "--poly", poly, "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["D"] == D and rep["invariant_factors"] == factors
    assert dumps(json.loads(out)) + "\n" == out


def test_analyze_text(capsys):
    code, out, _ = invoke(capsys, "analyze", "--poly", "x^3-x^2-x-1")
    assert code == 0 and "Z/22 x Z/2" in out and "(1+9b-4b^2)/22" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--poly", "x^2-2"],
        ["analyze", "--poly", "x^2+x-1"],
        ["analyze", "--poly", "nonsense!"],
        ["group", "--poly", "x^2-3x+1"],
        ["expand", "--poly", "x^2-x-1", "-1"],
        ["expand", "--poly", "x^2-x-1", "1/0"],
        ["analyze", "--poly", "x^2-x-1", "--height", "0"],
        ["bogus"],
        [],
    ],
)
def test_refusals_exit_2(capsys, argv):
    assert invoke(capsys, *argv)[0] == 2


def test_expand(capsys):
    code, out, _ = invoke(capsys, "expand", "--poly", "x^2-x-1", "1/2", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["reconstructed"] and rep["expansion"]["frac_period"]
    code, out, _ = invoke(capsys, "expand", "--poly", "x^3-x^2-x-1", "(1+9b-4b^2)/22", "--format", "json")
    assert len(json.loads(out)["expansion"]["frac_period"]) in (1, 2, 3, 10)
    code, out, _ = invoke(capsys, "expand", "--poly", "x^2-x-1", "0", "--format", "json")
    assert json.loads(out)["expansion"] == {"int": [], "frac_pre": [], "frac_period": []}


def test_group(capsys):
    code, out, _ = invoke(capsys, "group", "--poly", "x^2-x-1", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["order"] == 5 and len(rep["classes"]) == 5
    first = rep["classes"][0]
    assert set(first) == {"rep", "tails", "canonical_tail", "order"}
    assert set(first["tails"][0]) == {"word", "offset"}
    assert dumps(rep) + "\n" == out


def test_finitary(capsys):
    code, out, _ = invoke(capsys, "finitary", "--poly", "x^3-3x^2+2x-1", "--format", "json")
    assert code == 0 and json.loads(out)["verdict"] == "ProvenNotFinitary"


def test_coding(capsys):
    code, out, _ = invoke(capsys, "coding", "--poly", "x^3-x^2-x-1", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["A"] == [[3, 4, 1], [1, 2, 3], [3, -2, -1]] and rep["detA"] == 44 and rep["kernel_classes"] == 44
    assert set(rep) == {"A", "detA", "kernel_classes", "semiconjugacy_max_err", "factorization_max_err"}


def test_recurrent(capsys):
    code, out, _ = invoke(capsys, "recurrent", "--poly", "x^2-x-1", "xi0", "-n", "10", "--format", "json")
    assert code == 0
    assert json.loads(out)["T"] == ["1", "1", "2", "3", "5", "8", "13", "21", "34", "55"]


def test_env_precision(capsys, monkeypatch):
    monkeypatch.setenv("PISOTLAB_PRECISION", "64")
    code, out, _ = invoke(capsys, "coding", "--poly", "x^2-x-1", "--format", "json")
    assert code == 0 and int(json.loads(out)["factorization_max_err"].split("^")[1]) < -32
    monkeypatch.setenv("PISOTLAB_PRECISION", "lots")
    assert invoke(capsys, "analyze", "--poly", "x^2-x-1")[0] == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "pisotlab", "analyze", "--poly", "x^2-4"], capture_output=True, text=True)
    assert r.returncode == 2 and "NotUnit" in r.stderr
