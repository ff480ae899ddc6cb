"""Synthetic test ensemble and error/timing tables.

Instances are ``A = U diag(sigma) V^*`` with ``U`` (``m x m``) and ``V``
(``n x m``) orthonormalized complex Gaussian matrices and singular values
``sigma_j = kappa ** (-(j - 1) / (m - 1))``, so ``cond(A) = kappa``. The
exact minimal-norm solution is ``p = V @ signs / sqrt(m)`` (unit norm, in
``range(A^*)``) and ``b = A p``.

Errors are reported normalized by the condition number,
``||x - p|| / (kappa ||p||)``.
"""

import csv
import logging
import sys
import time
from dataclasses import dataclass

import numpy as np

from ._validation import check_positive_int
from .minnorm import ProblemInstance, SolverConfig, solve_classical, solve_randomized
from .rng import DEFAULT_SEED, RandomStream, derive_seed

logger = logging.getLogger(__name__)

CSV_HEADER = ("m", "n", "l", "t0", "tr", "ratio", "eps0", "epsr")

#: Row grids of the two published experiments (n sweep at fixed m, m sweep at fixed n).
GROW_M_ROWS = ((128, 16384, 512), (256, 16384, 1024), (512, 16384, 2048))
GROW_N_ROWS = ((256, 4096, 1024), (256, 8192, 1024), (256, 16384, 1024), (256, 32768, 1024))
SMALL_ROWS = ((32, 2048, 128), (64, 4096, 256))


def gram_schmidt(X):
    """Orthonormalize the columns of ``X`` by Gram-Schmidt with reorthogonalization.

    Each column is projected against the previous ones twice ("twice is
    enough"), which keeps ``||Q^* Q - I||`` at rounding level.
    """
    Q = np.array(X, dtype=np.complex128)
    k = Q.shape[1]
    for j in range(k):
        v = Q[:, j]
        for _ in range(2):
            if j:
                v -= Q[:, :j] @ (Q[:, :j].conj().T @ v)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            raise np.linalg.LinAlgError(f"column {j} is linearly dependent")
        Q[:, j] = v / norm
    return Q


@dataclass(frozen=True, eq=False)
class GeneratedInstance:
    A: np.ndarray
    b: np.ndarray
    p_true: np.ndarray
    kappa: float
    singular_values: np.ndarray

    @property
    def problem(self):
        return ProblemInstance(self.A, self.b)


def generate_instance(m, n, kappa=1e6, stream=None):
    """Draw a test system with condition number ``kappa`` and known solution.

    Parameters
    ----------
    m, n : int
        ``2 <= m < n``.
    kappa : float, default=1e6
        Ratio of the extreme singular values, ``>= 1``.
    stream : RandomStream, optional

    Returns
    -------
    GeneratedInstance
    """
    m = check_positive_int(m, "m")
    n = check_positive_int(n, "n")
    if m < 2:
        raise ValueError(f"m must be >= 2 for the singular-value profile, got {m}")
    if m >= n:
        raise ValueError(f"need m < n, got m={m}, n={n}")
    if not kappa >= 1:
        raise ValueError(f"kappa must be >= 1, got {kappa}")
    stream = RandomStream() if stream is None else stream

    U = gram_schmidt(stream.substream("U").complex_normal((m, m)))
    V = gram_schmidt(stream.substream("V").complex_normal((n, m)))
    sigma = float(kappa) ** (-np.arange(m) / (m - 1))
    A = (U * sigma) @ V.conj().T
    p = V @ stream.substream("signs").signs(m) / np.sqrt(m)
    return GeneratedInstance(A=A, b=A @ p, p_true=p, kappa=float(kappa), singular_values=sigma)


def normalized_error(x, p_true, kappa):
    """``||x - p|| / (kappa * ||p||)``."""
    p_true = np.asarray(p_true)
    pnorm = np.linalg.norm(p_true)
    if pnorm == 0:
        raise ValueError("p_true must be nonzero")
    return float(np.linalg.norm(np.asarray(x) - p_true) / (kappa * pnorm))


def bench_lsq_tol(m, n, kappa):
    """Least-squares precision used by the benchmark: ``(1e-14 * kappa)**2 * m / n``."""
    return (1e-14 * kappa) ** 2 * m / n


@dataclass
class BenchRow:
    m: int
    n: int
    l: int
    t0: float = float("nan")
    tr: float = float("nan")
    ratio: float = float("nan")
    eps0: float = float("nan")
    epsr: float = float("nan")
    lsq_converged: bool = True
    error: str | None = None


def _bench_row(i, m, n, l, trials, kappa, base_seed, sampling, classical_method):
    inst = generate_instance(m, n, kappa, RandomStream(derive_seed(base_seed, "row", i)))
    problem = inst.problem
    tol = bench_lsq_tol(m, n, kappa)

    t = time.perf_counter()
    x0 = solve_classical(problem, method=classical_method)
    t0 = time.perf_counter() - t

    times, errs, converged = [], [], True
    for k in range(trials):
        cfg = SolverConfig(l=l, seed=derive_seed(base_seed, "row", i, "trial", k),
                           sampling=sampling, lsq_tol=tol)
        t = time.perf_counter()
        rep = solve_randomized(problem, cfg)
        times.append(time.perf_counter() - t)
        errs.append(normalized_error(rep.x, inst.p_true, kappa))
        converged &= rep.lsq_converged
    tr = float(np.mean(times))
    return BenchRow(m=m, n=n, l=l, t0=t0, tr=tr, ratio=t0 / tr,
                    eps0=normalized_error(x0, inst.p_true, kappa), epsr=float(max(errs)),
                    lsq_converged=converged)


def run_benchmark(rows, trials=10, kappa=1e6, base_seed=DEFAULT_SEED, sampling="without",
                  classical_method="lapack"):
    """Run both solvers over a grid of ``(m, n, l)`` rows.

    For each row one instance is generated; the classical solver runs once
    (``t0``, ``eps0``) and the randomized solver runs ``trials`` times with
    independent seeds (``tr`` is the mean time, ``epsr`` the worst error).
    The least-squares precision is :func:`bench_lsq_tol`.

    A row with invalid dimensions yields a :class:`BenchRow` whose ``error``
    field is set; the remaining rows still run.
    """
    trials = check_positive_int(trials, "trials")
    out = []
    for i, (m, n, l) in enumerate(rows):
        try:
            if not m < l < n:
                raise ValueError(f"row needs m < l < n, got m={m}, l={l}, n={n}")
            row = _bench_row(i, m, n, l, trials, kappa, base_seed, sampling, classical_method)
        except (ValueError, np.linalg.LinAlgError) as exc:
            logger.warning("row (m=%s, n=%s, l=%s) failed: %s", m, n, l, exc)
            row = BenchRow(m=m, n=n, l=l, error=str(exc))
        out.append(row)
    return out


def _fmt(v):
    return "" if v != v else f"{v:.6e}"


def write_csv(rows, fh=None):
    """Write rows as CSV with header ``m,n,l,t0,tr,ratio,eps0,epsr``."""
    fh = sys.stdout if fh is None else fh
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r.m, r.n, r.l] + [_fmt(v) for v in (r.t0, r.tr, r.ratio, r.eps0, r.epsr)])
