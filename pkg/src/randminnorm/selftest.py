"""Desk-scale invariant checks, run by ``randminnorm selftest``.

Each suite maps one module to a list of named checks. A check raises
``AssertionError`` on failure. The whole run takes well under a minute.
"""

import contextlib
import os
import tempfile
import time

import numpy as np

from . import srft as _srft
from .bench import generate_instance, normalized_error
from .lsq import LsqConfig, dense_ls_oracle, solve_ls
from .minnorm import SolverConfig, solve_oracle_svd, solve_randomized
from .rng import RandomStream


def _rand_vec(stream, n):
    return stream.complex_normal(n)


def _naive_dft(x):
    n = x.shape[0]
    j = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(j, j) / n) @ x / np.sqrt(n)


def _null_basis(A):
    _, _, Vh = np.linalg.svd(A)
    return Vh[A.shape[0]:].conj().T


# rng ----------------------------------------------------------------------

def rng_reproducible():
    a = RandomStream(7).substream("x")
    b = RandomStream(7).substream("x")
    assert np.array_equal(a.unit_circle(50), b.unit_circle(50))
    assert np.array_equal(a.random_permutation(40), b.random_permutation(40))
    assert not np.array_equal(RandomStream(7).substream("x").uniform_angle(8),
                              RandomStream(7).substream("y").uniform_angle(8))


def rng_unit_modulus():
    z = RandomStream(1).unit_circle(100_000)
    assert np.max(np.abs(np.abs(z) - 1)) <= 1e-15


def rng_distinct_indices():
    s = RandomStream(2)
    for n in (1, 5, 64, 1000):
        for l in (1, n // 2 or 1, n):
            idx = s.sample_indices(l, n)
            assert len(set(idx.tolist())) == l and idx.min() >= 0 and idx.max() < n


# srft ---------------------------------------------------------------------

def srft_h_unitary():
    for n in (2, 3, 17, 64, 1000):
        s = RandomStream(n)
        op = _srft.build_srft(1, n, s.substream("op"))
        x = _rand_vec(s.substream("x"), n)
        assert abs(np.linalg.norm(_srft.apply_h(op, x)) - np.linalg.norm(x)) <= 1e-12 * np.linalg.norm(x)


def srft_adjoint_consistent():
    for n, l in ((8, 3), (33, 10), (256, 64)):
        s = RandomStream(n)
        op = _srft.build_srft(l, n, s.substream("op"))
        x, v = _rand_vec(s.substream("x"), n), _rand_vec(s.substream("v"), l)
        lhs = np.vdot(v, _srft.apply(op, x))
        rhs = np.vdot(_srft.apply_adjoint(op, v), x)
        assert abs(lhs - rhs) <= 1e-12 * np.linalg.norm(x) * np.linalg.norm(v)


def srft_adjoint_isometry():
    for n, l in ((8, 3), (100, 40), (1024, 512)):
        s = RandomStream(n)
        op = _srft.build_srft(l, n, s.substream("op"))
        v = _rand_vec(s.substream("v"), l)
        assert abs(np.linalg.norm(_srft.apply_adjoint(op, v)) - np.linalg.norm(v)) <= 1e-12 * np.linalg.norm(v)


def srft_fast_equals_dense():
    for n in (2, 3, 7, 16, 31, 64):
        s = RandomStream(n)
        op = _srft.build_srft(max(1, n // 3), n, s.substream("op"))
        x = _rand_vec(s.substream("x"), n)
        assert np.max(np.abs(_srft.apply(op, x) - _srft.materialize_dense(op) @ x)) <= 1e-12


def srft_dft_matches_formula():
    for n in range(1, 41):
        x = _rand_vec(RandomStream(n), n)
        y = _srft.dft(x)
        assert np.max(np.abs(y - _naive_dft(x))) <= 1e-13
        assert abs(np.linalg.norm(y) - np.linalg.norm(x)) <= 1e-13 * max(1.0, np.linalg.norm(x))


def srft_singular_value_bound():
    ok = total = 0
    for m in (2, 4, 8):
        n, l = 64 * m, 4 * m
        for t in range(20):
            s = RandomStream(1000 * m + t)
            Q = np.linalg.qr(s.substream("Q").complex_normal((n, m)))[0]
            op = _srft.build_srft(l, n, s.substream("op"))
            smin = np.linalg.svd(_srft.apply_to_columns(op, Q), compute_uv=False)[-1]
            ok += smin >= np.sqrt(l / (4 * n))
            total += 1
    assert ok >= 0.95 * total, f"{ok}/{total}"


# lsq ----------------------------------------------------------------------

def _tall(stream, n, m, kappa):
    g = generate_instance(m, n, kappa, stream)
    return g.A.conj().T


def lsq_excess_contract():
    for t in range(10):
        s = RandomStream(t)
        B = _tall(s.substream("B"), 256, 16, 10.0 ** (t % 7))
        c = s.substream("c").complex_normal(256)
        tau = 1e-8
        sol = solve_ls(B, c, LsqConfig(l=64, tau=tau, stream=s.substream("lsq")))
        ystar = dense_ls_oracle(B, c)
        best = np.linalg.norm(B @ ystar - c) ** 2
        got = np.linalg.norm(B @ sol.y - c) ** 2
        assert sol.converged and got - best <= tau * best + 1e-24


def lsq_monotone_residuals():
    s = RandomStream(11)
    B = _tall(s.substream("B"), 512, 8, 1e4)
    sol = solve_ls(B, s.substream("c").complex_normal(512), LsqConfig(l=32, tau=1e-20, stream=s))
    h = np.asarray(sol.residual_history)
    assert np.all(np.diff(h) <= 1e-12 * h[0])


def lsq_deterministic():
    s = RandomStream(5)
    B = _tall(s.substream("B"), 128, 8, 1e3)
    c = s.substream("c").complex_normal(128)
    y1 = solve_ls(B, c, LsqConfig(l=32, tau=1e-10, stream=RandomStream(9))).y
    y2 = solve_ls(B, c, LsqConfig(l=32, tau=1e-10, stream=RandomStream(9))).y
    assert np.array_equal(y1, y2)


# minnorm ------------------------------------------------------------------

def _small_cases(count, kappa=1e3):
    for t in range(count):
        m = 2 + t % 7
        n = 8 * m * (1 + t % 8)
        g = generate_instance(m, n, kappa, RandomStream(t).substream("inst"))
        yield t, g


def minnorm_consistency_chain():
    for t, g in _small_cases(10, 1e6):
        rep = solve_randomized(g.problem, SolverConfig(seed=t))
        assert np.linalg.norm(g.A @ rep.c - g.b) <= 1e-10 * g.kappa * np.linalg.norm(g.b)


def minnorm_energy_bound():
    ok = 0
    for t, g in _small_cases(100):
        rep = solve_randomized(g.problem, SolverConfig(seed=t))
        p = solve_oracle_svd(g.problem)
        ok += np.linalg.norm(rep.c) <= np.sqrt(4 * g.A.shape[1] / rep.l) * np.linalg.norm(p) * (1 + 1e-10)
    assert ok >= 99, f"{ok}/100"


def minnorm_pythagorean():
    for t, g in _small_cases(20):
        rep = solve_randomized(g.problem, SolverConfig(seed=t, epsilon=1e-3))
        p = solve_oracle_svd(g.problem)
        c, x = rep.c, rep.x
        lhs = np.linalg.norm(c - p) ** 2 + np.linalg.norm(p - x) ** 2
        rhs = np.linalg.norm(c - x) ** 2
        assert abs(lhs - rhs) <= 1e-10 * rhs


def minnorm_range_membership():
    for t, g in _small_cases(10):
        x = solve_randomized(g.problem, SolverConfig(seed=t)).x
        N = _null_basis(g.A)
        assert np.max(np.abs(N.conj().T @ x)) <= 1e-12 * np.linalg.norm(x)


def minnorm_accuracy():
    fails = 0
    for t, g in _small_cases(50):
        x = solve_randomized(g.problem, SolverConfig(seed=t, epsilon=1e-6)).x
        p = solve_oracle_svd(g.problem)
        fails += np.linalg.norm(x - p) > 1e-6 * np.linalg.norm(p)
    assert fails == 0, f"{fails} failures"


def minnorm_deterministic():
    g = generate_instance(6, 200, 1e3, RandomStream(3))
    x1 = solve_randomized(g.problem, SolverConfig(seed=42)).x
    x2 = solve_randomized(g.problem, SolverConfig(seed=42)).x
    assert np.array_equal(x1, x2)


# bench --------------------------------------------------------------------

def bench_singular_values():
    for kappa in (1.0, 1e3, 1e6):
        g = generate_instance(8, 100, kappa, RandomStream(int(kappa)))
        sig = np.linalg.svd(g.A, compute_uv=False)
        assert np.max(np.abs(sig - g.singular_values) / g.singular_values) <= 1e-8
        assert abs(sig[0] / sig[-1] - kappa) <= 1e-8 * kappa


def bench_true_solution():
    for t in range(5):
        g = generate_instance(4 + t, 64 * (t + 1), 1e6, RandomStream(t))
        assert abs(np.linalg.norm(g.p_true) - 1) <= 1e-12
        p = solve_oracle_svd(g.problem)
        assert np.linalg.norm(p - g.p_true) <= 1e-9 * g.kappa


def bench_epsilon_monotone():
    g = generate_instance(6, 300, 1e3, RandomStream(8))
    errs = [normalized_error(solve_randomized(g.problem, SolverConfig(seed=1, epsilon=e)).x,
                             g.p_true, g.kappa) for e in (1e-2, 1e-3, 1e-4, 1e-5)]
    for loose, tight in zip(errs, errs[1:]):
        assert tight <= 10 * loose + 1e-16


# cli ----------------------------------------------------------------------

def _run_cli(argv):
    from .cli import main

    with open(os.devnull, "w") as sink, contextlib.redirect_stdout(sink), \
            contextlib.redirect_stderr(sink):
        return main(argv)


def cli_deterministic():
    with tempfile.TemporaryDirectory() as tmp:
        pre = os.path.join(tmp, "sys")
        assert _run_cli(["gen", "--m", "4", "--n", "64", "--seed", "3", "--out", pre]) == 0
        outs = []
        for k in range(2):
            out = os.path.join(tmp, f"x{k}.mtx")
            assert _run_cli(["solve", pre + "_A.mtx", pre + "_b.mtx", "--seed", "7", "--out", out]) == 0
            with open(out, "rb") as fh:
                outs.append(fh.read())
        assert outs[0] == outs[1]


def cli_exit_codes():
    with tempfile.TemporaryDirectory() as tmp:
        bad = os.path.join(tmp, "bad.mtx")
        with open(bad, "w") as fh:
            fh.write("%%MatrixMarket matrix array complex general\n1 1\n1.0 oops\n")
        assert _run_cli(["solve", bad, bad]) == 2
        pre = os.path.join(tmp, "sys")
        _run_cli(["gen", "--m", "4", "--n", "12", "--seed", "1", "--out", pre])
        assert _run_cli(["solve", pre + "_A.mtx", pre + "_b.mtx"]) == 4
        assert _run_cli(["solve", pre + "_A.mtx", pre + "_p.mtx"]) == 3
        assert _run_cli(["gen", "--m", "5", "--n", "5", "--out", pre]) == 3


SUITES = {
    "rng": [rng_reproducible, rng_unit_modulus, rng_distinct_indices],
    "srft": [srft_h_unitary, srft_adjoint_consistent, srft_adjoint_isometry,
             srft_fast_equals_dense, srft_dft_matches_formula, srft_singular_value_bound],
    "lsq": [lsq_excess_contract, lsq_monotone_residuals, lsq_deterministic],
    "minnorm": [minnorm_consistency_chain, minnorm_energy_bound, minnorm_pythagorean,
                minnorm_range_membership, minnorm_accuracy, minnorm_deterministic],
    "bench": [bench_singular_values, bench_true_solution, bench_epsilon_monotone],
    "cli": [cli_deterministic, cli_exit_codes],
}


def _corrupt_dft(X):
    Y = np.fft.fft(X, axis=-1, norm="ortho")
    Y[:, 1 % Y.shape[1]] *= 1.0 + 1e-6
    return Y


@contextlib.contextmanager
def injected_fault(name):
    """Temporarily break a component; used to check that the selftest notices."""
    if name is None:
        yield
        return
    if name != "dft":
        raise ValueError(f"unknown fault {name!r}")
    saved = _srft._dft_rows
    _srft._dft_rows = _corrupt_dft
    try:
        yield
    finally:
        _srft._dft_rows = saved


def run(out=print, fault=None):
    """Run every suite; return ``(passed, failed)`` counts."""
    passed = failed = 0
    with injected_fault(fault):
        for suite, checks in SUITES.items():
            ok = 0
            for check in checks:
                t = time.perf_counter()
                try:
                    check()
                except Exception as exc:  # noqa: BLE001 - report every failure
                    out(f"FAIL {suite}.{check.__name__}: {type(exc).__name__}: {exc}")
                    failed += 1
                else:
                    out(f"PASS {suite}.{check.__name__} ({time.perf_counter() - t:.2f}s)")
                    ok += 1
            passed += ok
            out(f"-- {suite}: {ok}/{len(checks)} passed")
    out(f"== {passed} passed, {failed} failed")
    return passed, failed
