import json

import pytest

from pgcs import io
from pgcs.cli import main
from pgcs.experiments import TABLE1, TABLE1_FIELDS, reference_problem

SCALAR = {"p": 1, "m": 1, "n": 1, "A": [[[2]]], "B": [[[1]]], "C": [[[1]]],
          "D": [[[3]]], "E": [[[1]]], "F": [[[2]]]}


@pytest.fixture
def scalar_file(tmp_path):
    path = tmp_path / "prob.json"
    path.write_text(json.dumps(SCALAR))
    return path


def test_solve(scalar_file, tmp_path):
    out = tmp_path / "sol.json"
    assert main(["solve", "--input", str(scalar_file), "--output", str(out)]) == 0
    sol = json.loads(out.read_text())
    assert sol["X"][0][0][0] == pytest.approx(0.2, abs=1e-15)
    assert sol["Y"][0][0][0] == pytest.approx(-0.6, abs=1e-15)


def test_residual_and_backward_error(scalar_file, tmp_path):
    cand = tmp_path / "cand.json"
    cand.write_text(json.dumps({"X": [[[0.0]]], "Y": [[[0.0]]]}))
    out = tmp_path / "r.json"
    assert main(["residual", "--input", str(scalar_file), "--candidate", str(cand),
                 "--output", str(out)]) == 0
    res = json.loads(out.read_text())
    assert res["R1"] == [[[1.0]]] and res["R2"] == [[[2.0]]]
    assert main(["backward-error", "--input", str(scalar_file), "--candidate", str(cand),
                 "--tolerances", "unit", "--output", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["upper"] == pytest.approx(5 ** 0.5)
    assert rep["lower"] == pytest.approx(rep["upper"] / 6 ** 0.5)


def test_bounds(scalar_file, tmp_path):
    delta = tmp_path / "d.json"
    delta.write_text(json.dumps({"dA": [[[1e-3]]], "dB": [[[0]]], "dC": [[[0]]],
                                 "dD": [[[0]]], "dE": [[[0]]], "dF": [[[0]]]}))
    out = tmp_path / "b.json"
    assert main(["bounds", "--input", str(scalar_file), "--perturbation", str(delta),
                 "--output", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["normwise"]["applicable"] and rep["componentwise"]["applicable"]


def test_cond_table1_fixture(tmp_path, capsys):
    path = tmp_path / "fixture.json"
    io.write_json(reference_problem(3, 3), path)
    assert main(["cond", "--input", str(path), "--tau", "1", "--t", "1"]) == 0
    rep = json.loads(capsys.readouterr().out)
    for name, ref in zip(TABLE1_FIELDS, TABLE1[1, 1]):
        assert rep[name] == pytest.approx(ref, rel=1e-3)
    assert main(["cond", "--tau", "5", "--t", "5"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["k_N1"] == pytest.approx(1.3438e3, rel=1e-3)


def test_cond_scalar(scalar_file, capsys):
    assert main(["cond", "--input", str(scalar_file), "--tolerances", "unit"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["mixed"] == pytest.approx(10 / 3) and rep["componentwise"] == pytest.approx(10)


@pytest.mark.parametrize("estimator", ["pce", "sce", "exact"])
def test_estimate(scalar_file, capsys, estimator):
    assert main(["estimate", "--input", str(scalar_file), "--estimator", estimator,
                 "--seed", "4"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["estimator"] == estimator


def test_bench_table1(tmp_path):
    out = tmp_path / "t1.csv"
    assert main(["bench-table1", "--output", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 7
    summary = json.loads((tmp_path / "t1.summary.json").read_text())
    assert summary["within_1e-3"] is True


def test_bench_ratios_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["bench-ratios", "--trials", "10", "--seed", "42",
                     "--output", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.summary.json").read_bytes() == (tmp_path / "b.summary.json").read_bytes()


def test_exit_codes(tmp_path, scalar_file):
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["solve"]) == 2
    assert main(["cond", "--tau", "2"]) == 2
    assert main(["residual", "--input", str(scalar_file)]) == 2
    assert main(["solve", "--input", str(tmp_path / "missing.json")]) == 3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(dict(SCALAR, A=[[[1, 2]]])))
    assert main(["solve", "--input", str(bad)]) == 3
    sing = tmp_path / "sing.json"
    sing.write_text(json.dumps(dict(SCALAR, A=[[[1]]], B=[[[2]]], D=[[[2]]])))
    assert main(["solve", "--input", str(sing)]) == 4


def test_dense_cap_env(scalar_file, monkeypatch):
    monkeypatch.setenv("PGCS_DENSE_CAP", "1")
    assert main(["solve", "--input", str(scalar_file)]) == 4
