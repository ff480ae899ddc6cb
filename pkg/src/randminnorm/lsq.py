"""Sketch-and-precondition least squares for tall complex matrices.

``solve_ls`` minimizes ``||B y - c||`` for ``B`` of shape ``(n, m)``, ``n > m``:

1. sketch ``E = T B`` with an independent ``l x n`` randomized Fourier
   transform ``T``;
2. factor ``E = Q R``;
3. run CGLS on the right-preconditioned problem ``min ||B R^{-1} u - c||``
   from ``u = 0``;
4. return ``y = R^{-1} u``.

Stopping rule. Write ``M = B R^{-1}``. When ``T`` has orthonormal rows,
``||M u|| >= ||T M u|| = ||Q u|| = ||u||``, so ``sigma_min(M) >= 1``
(with repeated rows, ``>= 1/sqrt(max multiplicity)``). For an iterate with
residual ``r`` the excess ``||r||^2 - ||r*||^2 = ||M e||^2`` is therefore at
most ``||M^* r||^2 / sigma_min^2``, and ``||r*||^2`` is at least ``||r||^2``
minus that bound. Their ratio bounds the relative excess from above and is
what is compared against ``tau``.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ._validation import as_complex_array, as_complex_vector, check_positive_int
from .exceptions import ConfigurationError, DimensionError
from .linalg import check_triangular_rank, householder_qr
from .rng import RandomStream
from .srft import apply_to_columns, build_srft

#: Squared-residual floor relative to ``||c||^2`` below which the system is
#: treated as consistent and iteration stops.
ZERO_RESIDUAL_FLOOR = 1e-28


@dataclass
class LsqConfig:
    """Parameters of :func:`solve_ls`.

    Attributes
    ----------
    l : int
        Rows of the sketching transform; must exceed the column count of ``B``.
    tau : float
        Target relative excess of the squared residual.
    max_iterations : int
        CGLS iteration cap.
    stream : RandomStream
        Source of the sketch.
    replace : bool
        Sample sketch rows with replacement.
    """

    l: int
    tau: float
    max_iterations: int = 300
    stream: RandomStream = field(default_factory=RandomStream)
    replace: bool = False

    def __post_init__(self):
        check_positive_int(self.l, "l")
        check_positive_int(self.max_iterations, "max_iterations")
        if not self.tau > 0:
            raise ConfigurationError(f"tau must be positive, got {self.tau}")


@dataclass
class LsqSolution:
    y: np.ndarray
    achieved_excess: float
    iterations: int
    converged: bool
    residual_history: list = field(default_factory=list, repr=False)


def _cgls(matvec, rmatvec, c, tau, max_iterations, sigma_min_sq):
    m = rmatvec(c).shape[0]
    u = np.zeros(m, dtype=np.complex128)
    r = c.copy()
    s = rmatvec(r)
    gamma = np.vdot(s, s).real
    floor = ZERO_RESIDUAL_FLOOR * np.vdot(c, c).real
    p = s.copy()
    history = []
    excess = np.inf
    k = 0
    while True:
        rr = np.vdot(r, r).real
        history.append(np.sqrt(rr))
        if rr <= floor:
            return u, 0.0, k, True, history
        bound = gamma / sigma_min_sq
        excess = bound / (rr - bound) if rr > bound else np.inf
        if excess <= tau:
            return u, excess, k, True, history
        if k >= max_iterations:
            return u, excess, k, False, history
        q = matvec(p)
        qq = np.vdot(q, q).real
        if qq == 0.0:
            return u, excess, k, False, history
        a = gamma / qq
        u += a * p
        r -= a * q
        s = rmatvec(r)
        gamma_new = np.vdot(s, s).real
        p = s + (gamma_new / gamma) * p if gamma > 0 else s
        gamma = gamma_new
        k += 1


def solve_ls(B, c, cfg):
    """Approximate least-squares solution of ``B y ~ c`` for tall ``B``.

    Parameters
    ----------
    B : array-like of shape (n, m), n > m
        Full column rank (checked on the sketch).
    c : array-like of shape (n,)
    cfg : LsqConfig

    Returns
    -------
    LsqSolution
        ``converged`` means the certified relative excess is at most
        ``cfg.tau`` (or the residual hit the zero floor, in which case the
        reported excess is 0). Otherwise the last, best, iterate is returned.

    Raises
    ------
    RankDeficiencyError
        If the sketch's triangular factor is numerically singular.
    """
    B = as_complex_array(B, "B", ndim=2)
    n, m = B.shape
    c = as_complex_vector(c, "c", length=n)
    if n <= m:
        raise DimensionError(f"B must be tall (n > m), got shape {B.shape}")
    if not m < cfg.l <= n:
        raise ConfigurationError(f"sketch size l={cfg.l} must satisfy m={m} < l <= n={n}")

    if not np.any(c):
        return LsqSolution(np.zeros(m, dtype=np.complex128), 0.0, 0, True, [0.0])

    op = build_srft(cfg.l, n, cfg.stream, replace=cfg.replace)
    E = apply_to_columns(op, B)
    R = scipy.linalg.qr(E, mode="r")[0][:m]
    check_triangular_rank(R, n, "least-squares sketch")

    def matvec(u):
        return B @ scipy.linalg.solve_triangular(R, u)

    def rmatvec(r):
        return scipy.linalg.solve_triangular(R, (r.conj() @ B).conj(), trans="C")

    mult = np.bincount(op.s).max() if op.replace else 1
    u, excess, its, ok, history = _cgls(
        matvec, rmatvec, c, cfg.tau, cfg.max_iterations, 1.0 / mult
    )
    y = scipy.linalg.solve_triangular(R, u)
    return LsqSolution(y, float(excess), its, ok, history)


def dense_ls_oracle(B, c):
    """Exact least-squares minimizer by dense Householder QR (test oracle)."""
    B = as_complex_array(B, "B", ndim=2)
    n, m = B.shape
    c = as_complex_vector(c, "c", length=n)
    if n < m:
        raise DimensionError(f"B must have n >= m, got shape {B.shape}")
    Q, R, piv = householder_qr(B, pivoting=True)
    check_triangular_rank(R, n, "dense least squares")
    y = np.empty(m, dtype=np.complex128)
    y[piv] = scipy.linalg.solve_triangular(R, Q.conj().T @ c)
    return y
