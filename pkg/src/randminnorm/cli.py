"""Command-line interface.

Subcommands: ``solve``, ``baseline``, ``oracle``, ``gen``, ``bench``,
``selftest``. Matrices and vectors are dense complex Matrix Market files.

Exit codes: 0 success, 1 solver-quality or selftest failure, 2 parse error,
3 dimension error, 4 configuration error.
"""

import argparse
import json
import logging
import os
import sys
import time

import numpy as np

from . import bench, mmio, selftest
from .exceptions import ConfigurationError, DimensionError, MatrixMarketError, RankDeficiencyError
from .minnorm import ProblemInstance, SolverConfig, solve_classical, solve_oracle_svd, solve_randomized
from .rng import DEFAULT_SEED, RandomStream

EXIT_OK, EXIT_FAILURE, EXIT_PARSE, EXIT_DIMENSION, EXIT_CONFIG = 0, 1, 2, 3, 4

PRESETS = {"grow-m": bench.GROW_M_ROWS, "grow-n": bench.GROW_N_ROWS, "small": bench.SMALL_ROWS}

log = logging.getLogger("randminnorm")


def _seed(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not v > 0 or not np.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a positive finite number, got {text}")
    return v


def _rows(text):
    rows = []
    for item in text.split(","):
        parts = item.lower().split("x")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"row {item!r} is not of the form MxNxL")
        rows.append(tuple(_positive_int(p) for p in parts))
    return rows


def _default_seed():
    env = os.environ.get("MINNORM_SEED")
    return _seed(env) if env else DEFAULT_SEED


def _load_problem(matrix_path, rhs_path):
    A = mmio.read_matrix(matrix_path)
    b = mmio.read_vector(rhs_path)
    if b.shape[0] != A.shape[0]:
        raise DimensionError(f"A has {A.shape[0]} rows but b has length {b.shape[0]}")
    return ProblemInstance(A, b)


def _emit(report):
    print(json.dumps(report, indent=2, sort_keys=True))


def cmd_solve(args):
    seed = args.seed if args.seed is not None else _default_seed()
    inst = _load_problem(args.matrix, args.rhs)
    cfg = SolverConfig(l=args.l, alpha=args.alpha, epsilon=args.epsilon, seed=seed,
                       sampling=args.sampling, max_iterations=args.max_iterations)
    rep = solve_randomized(inst, cfg)
    mmio.write_matrix(args.out, rep.x)
    report = {"command": "solve", "m": inst.m, "n": inst.n, "alpha": cfg.alpha,
              "epsilon": cfg.epsilon, "seed": seed, "sampling": cfg.sampling,
              "output": args.out, **rep.summary()}
    if args.no_timings:
        del report["step_times"]
    _emit(report)
    if not rep.lsq_converged:
        log.error("least-squares stage did not reach tau=%g in %d iterations",
                  rep.tau, rep.lsq_iterations)
        return EXIT_FAILURE
    return EXIT_OK


def cmd_baseline(args):
    inst = _load_problem(args.matrix, args.rhs)
    t = time.perf_counter()
    x = solve_classical(inst, method=args.method)
    elapsed = time.perf_counter() - t
    mmio.write_matrix(args.out, x)
    _emit({"command": "baseline", "m": inst.m, "n": inst.n, "method": args.method,
           "output": args.out, "time": elapsed,
           "residual_norm": float(np.linalg.norm(inst.A @ x - inst.b))})
    return EXIT_OK


def cmd_oracle(args):
    inst = _load_problem(args.matrix, args.rhs)
    if args.residual is not None:
        x = mmio.read_vector(args.residual)
        if x.shape[0] != inst.n:
            raise DimensionError(f"x has length {x.shape[0]}, A has {inst.n} columns")
        res = float(np.linalg.norm(inst.A @ x - inst.b))
        bnorm = float(np.linalg.norm(inst.b))
        _emit({"command": "oracle", "mode": "residual", "residual_norm": res,
               "b_norm": bnorm, "relative_residual": res / bnorm if bnorm else 0.0})
        return EXIT_OK
    p = solve_oracle_svd(inst)
    mmio.write_matrix(args.out, p)
    _emit({"command": "oracle", "mode": "svd", "m": inst.m, "n": inst.n, "output": args.out,
           "residual_norm": float(np.linalg.norm(inst.A @ p - inst.b))})
    return EXIT_OK


def cmd_gen(args):
    if args.m is None or args.n is None:
        raise DimensionError("gen needs --m and --n")
    if not 2 <= args.m < args.n:
        raise DimensionError(f"gen needs 2 <= m < n, got m={args.m}, n={args.n}")
    if args.kappa < 1:
        raise ConfigurationError(f"kappa must be >= 1, got {args.kappa}")
    seed = args.seed if args.seed is not None else _default_seed()
    g = bench.generate_instance(args.m, args.n, args.kappa, RandomStream(seed))
    note = f"m={args.m} n={args.n} kappa={args.kappa!r} seed={seed}"
    paths = {}
    for name, arr in (("A", g.A), ("b", g.b), ("p", g.p_true)):
        paths[name] = f"{args.out}_{name}.mtx"
        mmio.write_matrix(paths[name], arr, comment=note)
    _emit({"command": "gen", "m": args.m, "n": args.n, "kappa": args.kappa, "seed": seed,
           "files": paths})
    return EXIT_OK


def cmd_bench(args):
    seed = args.seed if args.seed is not None else _default_seed()
    rows = args.rows if args.rows else PRESETS[args.preset]
    results = bench.run_benchmark(rows, trials=args.trials, kappa=args.kappa, base_seed=seed,
                                  sampling=args.sampling, classical_method=args.method)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            bench.write_csv(results, fh)
    bench.write_csv(results, sys.stdout)
    bad = [r for r in results if r.error is not None]
    for r in bad:
        log.error("row m=%d n=%d l=%d: %s", r.m, r.n, r.l, r.error)
    return EXIT_DIMENSION if bad else EXIT_OK


def cmd_selftest(args):
    _, failed = selftest.run(out=print, fault=args.inject_fault)
    return EXIT_FAILURE if failed else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="randminnorm",
        description="Randomized minimal-norm solutions of underdetermined complex systems.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_flags(p):
        p.add_argument("--l", type=_positive_int, default=None, help="sketch size (default 4m)")
        p.add_argument("--alpha", type=_positive_float, default=4.0)
        p.add_argument("--epsilon", type=_positive_float, default=1e-6)
        p.add_argument("--sampling", choices=("with", "without"), default="without")

    p = sub.add_parser("solve", help="randomized minimal-norm solve")
    p.add_argument("matrix")
    p.add_argument("rhs")
    solver_flags(p)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--max-iterations", type=_positive_int, default=300)
    p.add_argument("--out", default="x.mtx", help="solution file (default x.mtx)")
    p.add_argument("--no-timings", action="store_true", help="omit step timings from the report")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("baseline", help="pivoted Householder QR solve")
    p.add_argument("matrix")
    p.add_argument("rhs")
    p.add_argument("--method", choices=("lapack", "householder"), default="lapack")
    p.add_argument("--out", default="x0.mtx")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("oracle", help="SVD pseudoinverse solve, or residual check")
    p.add_argument("matrix")
    p.add_argument("rhs")
    p.add_argument("--residual", metavar="X", help="report ||A x - b|| for this solution file")
    p.add_argument("--out", default="p.mtx")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write a synthetic test system")
    p.add_argument("--m", type=_positive_int)
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--kappa", type=_positive_float, default=1e6)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--out", default="system", help="output prefix")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="error/timing table as CSV")
    p.add_argument("--preset", choices=sorted(PRESETS), default="grow-m")
    p.add_argument("--rows", type=_rows, default=None, help="comma-separated MxNxL rows")
    p.add_argument("--trials", type=_positive_int, default=10)
    p.add_argument("--kappa", type=_positive_float, default=1e6)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--sampling", choices=("with", "without"), default="without")
    p.add_argument("--method", choices=("lapack", "householder"), default="lapack")
    p.add_argument("--out", default=None, help="also write the CSV to this file")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("selftest", help="run the invariant checks")
    p.add_argument("--inject-fault", choices=("dft",), default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except MatrixMarketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RankDeficiencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
