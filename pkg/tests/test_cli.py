"""CLI contract tests: subcommands, file formats, exit codes."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from todaflat.cli import main
from todaflat.fieldio import (
    SchemaError,
    read_field_file,
    write_field_file,
)


@pytest.fixture
def runner():
    return CliRunner()


def _write_problem(tmp_path, **overrides):
    cfg = {"type": "A2", "N": 16, "form": "unreduced",
           "metric": {"kind": "flat", "lam": 2.0},
           "q1": {"kind": "constant", "value": [0.4, 0.1]},
           "q2bar": {"kind": "real-locus"},
           "solver": {"tol": 1e-10}}
    cfg.update(overrides)
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(cfg))
    return path


def test_field_file_roundtrip(tmp_path):
    N = 8
    rng = np.random.default_rng(0)
    f = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    p = tmp_path / "f.json"
    write_field_file(p, N, {"q": f}, {"note": "x"})
    N2, fields, meta = read_field_file(p)
    assert N2 == N and meta == {"note": "x"}
    assert np.max(np.abs(fields["q"] - f)) == 0


def test_field_file_schema_errors(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"N": 8, "fields": {"q": [[1, 2], [3]]}, "extra": 1}')
    with pytest.raises(SchemaError):
        read_field_file(p)
    p.write_text('{"fields": {}}')
    with pytest.raises(SchemaError):
        read_field_file(p)


def test_lie_dump(runner):
    res = runner.invoke(main, ["lie", "dump", "--type", "A", "--rank", "2"])
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["d"] == 3
    assert doc["n"] == [1, 1]
    assert doc["xi"] == [1, 0]
    assert doc["a_delta"] == [1.0, 1.0]


def test_lie_dump_bad_type(runner):
    res = runner.invoke(main, ["lie", "dump", "--type", "E", "--rank", "8"])
    assert res.exit_code == 2


def test_toda_solve_and_verify(runner, tmp_path):
    cfg = _write_problem(tmp_path)
    sol = tmp_path / "solution.json"
    res = runner.invoke(main, ["toda", "solve", "--config", str(cfg),
                               "--out", str(sol)])
    assert res.exit_code == 0, res.output
    N, fields, meta = read_field_file(sol)
    assert meta["converged"] is True
    assert meta["residual_norm"] <= 1e-10
    # u constant for constant data
    assert np.max(np.abs(fields["u_0"] - fields["u_0"][0, 0])) < 1e-10

    report = tmp_path / "curv.csv"
    res = runner.invoke(main, ["connection", "verify", "--solution", str(sol),
                               "--report", str(report)])
    assert res.exit_code == 0, res.output
    lines = report.read_text().strip().splitlines()
    assert lines[0] == "iy,ix,curvature_norm"
    assert len(lines) == 1 + 16 * 16

    hol = tmp_path / "hol.json"
    res = runner.invoke(main, ["holonomy", "--solution", str(sol),
                               "--path", "loop:x", "--out", str(hol)])
    assert res.exit_code == 0, res.output
    doc = json.loads(hol.read_text())
    assert len(doc["matrix"]) == 3  # defining representation of A2
    det = complex(*doc["determinant"])
    assert abs(det - 1.0) < 1e-8


def test_toda_solve_schema_error(runner, tmp_path):
    cfg = _write_problem(tmp_path, bogus=1)
    res = runner.invoke(main, ["toda", "solve", "--config", str(cfg),
                               "--out", str(tmp_path / "x.json")])
    assert res.exit_code == 2


def test_toda_solve_numerical_failure(runner, tmp_path):
    # starve the solver of iterations on non-constant data
    cfg = _write_problem(
        tmp_path,
        metric={"kind": "trig", "amp": 0.4},
        q1={"kind": "constant", "value": [0.4, 0.1]},
        solver={"tol": 1e-13, "max_iter": 1, "continuation_steps": 1},
    )
    res = runner.invoke(main, ["toda", "solve", "--config", str(cfg),
                               "--out", str(tmp_path / "x.json")])
    assert res.exit_code == 1


def test_goldman_fiber(runner, tmp_path):
    N = 16
    X, Y = np.meshgrid(np.arange(N) / N, np.arange(N) / N, indexing="xy")
    qf = tmp_path / "q.json"
    write_field_file(qf, N, {"q": np.exp(2j * np.pi * X)})
    res = runner.invoke(main, ["goldman", "fiber", "--q1", str(qf),
                               "--q2", str(qf), "--type", "C2",
                               "--lam", "2.0"])
    assert res.exit_code == 0, res.output
    doc = json.loads(res.output)
    assert doc["gap"] < 1e-10


def test_goldman_pair(runner, tmp_path):
    N = 16
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    f = np.ones((N, N), dtype=complex)
    # A2 adjoint dimension is 8; index 4 = x_delta slot is arbitrary here
    write_field_file(a, N, {"a_z_2": f})
    write_field_file(b, N, {"a_zbar_3": 2 * f})
    out = tmp_path / "rep.json"
    res = runner.invoke(main, ["goldman", "pair", "--a", str(a), "--b", str(b),
                               "--type", "A2", "--out", str(out)])
    assert res.exit_code == 0, res.output
    assert "value" in json.loads(out.read_text())


def test_oper_pipeline(runner, tmp_path):
    N = 16
    qf = tmp_path / "q.json"
    write_field_file(qf, N, {"q": np.full((N, N), 0.8 - 0.3j)})
    phif = tmp_path / "phi.json"
    write_field_file(phif, N, {"phi": np.full((N, N), 0.2 + 0.1j)})
    operf = tmp_path / "oper.json"
    res = runner.invoke(main, ["oper", "build", "--q", str(qf), "--type", "A2",
                               "--out", str(operf)])
    assert res.exit_code == 0, res.output
    rep = tmp_path / "pos.csv"
    res = runner.invoke(main, ["oper", "check", "--in", str(operf),
                               "--report", str(rep)])
    assert res.exit_code == 0, res.output
    assert "PASS" in res.output or rep.read_text().count("True") > 0
    res = runner.invoke(main, ["oper", "relation", "--phi", str(phif),
                               "--q", str(qf), "--type", "A2"])
    assert res.exit_code == 0, res.output


def test_oper_check_mutant_fails(runner, tmp_path):
    N = 16
    qf = tmp_path / "q.json"
    write_field_file(qf, N, {"q": np.full((N, N), 0.8 - 0.3j)})
    operf = tmp_path / "oper.json"
    runner.invoke(main, ["oper", "build", "--q", str(qf), "--type", "A1",
                         "--out", str(operf)])
    # zero out every A_z coefficient -> relative position must fail
    Nf, fields, meta = read_field_file(operf)
    for name in list(fields):
        if name.startswith("A_z_"):
            fields[name] = np.zeros((N, N), dtype=complex)
    write_field_file(operf, N, fields, meta)
    rep = tmp_path / "pos.csv"
    res = runner.invoke(main, ["oper", "check", "--in", str(operf),
                               "--report", str(rep)])
    assert res.exit_code == 1
