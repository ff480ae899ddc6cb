import json
import subprocess
import sys

import numpy as np
import pytest

from randminnorm import selftest
from randminnorm.cli import main
from randminnorm.mmio import read_matrix, read_vector, write_matrix


@pytest.fixture
def system(tmp_path):
    pre = str(tmp_path / "sys")
    assert main(["gen", "--m", "4", "--n", "64", "--kappa", "1e3", "--seed", "3", "--out", pre]) == 0
    return pre


def run_json(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_gen_files_and_rerun_identical(tmp_path, capsys):
    outs = []
    for k in range(2):
        pre = str(tmp_path / f"g{k}")
        code, rep = run_json(capsys, ["gen", "--m", "3", "--n", "20", "--seed", "5", "--out", pre])
        assert code == 0 and set(rep["files"]) == {"A", "b", "p"}
        outs.append([open(f"{pre}_{x}.mtx").read().split("\n", 2)[2] for x in "Abp"])
    assert outs[0] == outs[1]
    A = read_matrix(str(tmp_path / "g0_A.mtx"))
    p = read_vector(str(tmp_path / "g0_p.mtx"))
    assert A.shape == (3, 20) and abs(np.linalg.norm(p) - 1) <= 1e-12


def test_solve_report_and_residual(system, tmp_path, capsys):
    x = str(tmp_path / "x.mtx")
    code, rep = run_json(capsys, ["solve", system + "_A.mtx", system + "_b.mtx", "--seed", "7",
                                  "--out", x])
    assert code == 0
    for key in ("step_times", "l", "epsilon", "seed", "residual_norm", "lsq_converged"):
        assert key in rep
    assert rep["l"] == 16 and rep["seed"] == 7
    code, res = run_json(capsys, ["oracle", system + "_A.mtx", system + "_b.mtx", "--residual", x])
    assert code == 0 and res["residual_norm"] <= 1e-10 * 1e3 * res["b_norm"]
    p = read_vector(system + "_p.mtx")
    assert np.linalg.norm(read_vector(x) - p) <= 1e-6


def test_solve_deterministic(system, tmp_path, capsys):
    blobs = []
    for k in range(2):
        out = str(tmp_path / f"x{k}.mtx")
        assert main(["solve", system + "_A.mtx", system + "_b.mtx", "--seed", "7", "--out", out,
                     "--no-timings"]) == 0
        blobs.append((open(out, "rb").read(), capsys.readouterr().out.replace(out, "")))
    assert blobs[0] == blobs[1]


def test_env_seed(system, tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MINNORM_SEED", "99")
    _, rep = run_json(capsys, ["solve", system + "_A.mtx", system + "_b.mtx",
                               "--out", str(tmp_path / "x.mtx")])
    assert rep["seed"] == 99
    _, rep = run_json(capsys, ["solve", system + "_A.mtx", system + "_b.mtx", "--seed", "1",
                               "--out", str(tmp_path / "x.mtx")])
    assert rep["seed"] == 1


def test_solve_identity_like_2x3(tmp_path, capsys):
    A, b = str(tmp_path / "A.mtx"), str(tmp_path / "b.mtx")
    write_matrix(A, np.array([[1, 0, 0], [0, 1, 0]]))
    write_matrix(b, np.array([1, 1]))
    assert main(["solve", A, b, "--out", str(tmp_path / "x.mtx")]) == 4
    assert "solve_classical" in capsys.readouterr().err
    x0 = str(tmp_path / "x0.mtx")
    assert main(["baseline", A, b, "--out", x0]) == 0
    np.testing.assert_allclose(read_vector(x0), [1, 1, 0], atol=1e-15)


def test_baseline_and_oracle_agree(system, tmp_path, capsys):
    x0, p = str(tmp_path / "x0.mtx"), str(tmp_path / "p.mtx")
    assert main(["baseline", system + "_A.mtx", system + "_b.mtx", "--method", "householder",
                 "--out", x0]) == 0
    assert main(["oracle", system + "_A.mtx", system + "_b.mtx", "--out", p]) == 0
    assert np.linalg.norm(read_vector(x0) - read_vector(p)) <= 1e-12 * 1e3


def test_nonconvergence_exit_1(system, tmp_path, capsys):
    assert main(["solve", system + "_A.mtx", system + "_b.mtx", "--max-iterations", "1",
                 "--epsilon", "1e-9", "--out", str(tmp_path / "x.mtx")]) == 1


def test_exit_codes(system, tmp_path, capsys):
    bad = tmp_path / "bad.mtx"
    bad.write_text("%%MatrixMarket matrix array complex general\n1 1\n1.0 oops\n")
    assert main(["solve", str(bad), str(bad)]) == 2
    assert "bad.mtx:3:5:" in capsys.readouterr().err
    assert main(["solve", system + "_A.mtx", system + "_p.mtx"]) == 3
    assert main(["oracle", system + "_A.mtx", system + "_b.mtx", "--residual",
                 system + "_b.mtx"]) == 3
    assert main(["gen", "--m", "5", "--n", "5"]) == 3
    assert main(["gen", "--m", "1", "--n", "5"]) == 3
    assert main(["solve", system + "_A.mtx", system + "_b.mtx", "--l", "64"]) == 4
    assert main(["gen", "--m", "2", "--n", "5", "--kappa", "0.5"]) == 4


@pytest.mark.parametrize("argv", [
    ["solve", "a", "b", "--epsilon", "-1"],
    ["solve", "a", "b", "--l", "0"],
    ["solve", "a", "b", "--sampling", "maybe"],
    ["solve", "a", "b", "--bogus"],
    ["bench", "--rows", "4x8"],
    ["gen", "--seed", "-3"],
    ["frobnicate"],
])
def test_flag_validation(argv, capsys):
    assert main(argv) == 2


def test_bench_csv_and_bad_row(tmp_path, capsys):
    out = str(tmp_path / "b.csv")
    code = main(["bench", "--rows", "8x256x32,8x20x40", "--trials", "1", "--seed", "2",
                 "--out", out])
    stdout = capsys.readouterr().out
    assert code == 3
    lines = stdout.splitlines()
    assert lines[0] == "m,n,l,t0,tr,ratio,eps0,epsr" and len(lines) == 3
    assert lines[2] == "8,20,40,,,,,"
    assert open(out).read() == stdout
    assert float(lines[1].split(",")[-1]) <= 1e-13


def test_bench_trials_one_deterministic(capsys):
    eps = []
    for _ in range(2):
        assert main(["bench", "--rows", "8x256x32", "--trials", "1", "--seed", "5"]) == 0
        eps.append(capsys.readouterr().out.splitlines()[1].split(",")[6:])
    assert eps[0] == eps[1]


def test_bench_kappa_one(capsys):
    assert main(["bench", "--rows", "8x256x32", "--trials", "2", "--kappa", "1"]) == 0
    row = capsys.readouterr().out.splitlines()[1].split(",")
    assert float(row[6]) <= 1e-14 and float(row[7]) <= 1e-14


def test_selftest_census_and_pass(capsys):
    assert {k: len(v) for k, v in selftest.SUITES.items()} == \
        {"rng": 3, "srft": 6, "lsq": 3, "minnorm": 6, "bench": 3, "cli": 2}
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "== 23 passed, 0 failed" in out
    for suite, n in (("rng", 3), ("srft", 6), ("cli", 2)):
        assert f"-- {suite}: {n}/{n} passed" in out


def test_selftest_detects_corrupted_dft(capsys):
    assert main(["selftest", "--inject-fault", "dft"]) == 1
    assert "FAIL srft." in capsys.readouterr().out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "randminnorm", "--help"], capture_output=True,
                       text=True)
    assert r.returncode == 0 and "selftest" in r.stdout
