"""Minimal-norm solutions of underdetermined systems ``A p = b``.

Three solvers share the :class:`ProblemInstance` input:

``solve_randomized``
    Randomized sketch-then-project solver. It builds a cheap solution ``c``
    of ``A c = b`` lying in the span of random vectors, then projects ``c``
    onto ``range(A^*)`` with the sketch-preconditioned least-squares solver.
``solve_classical``
    Direct solve through a column-pivoted Householder QR of ``A^*``.
``solve_oracle_svd``
    Pseudoinverse via a full SVD; a ground truth for small problems.
"""

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ._validation import as_complex_array, as_complex_vector, check_positive_int, check_sampling
from .exceptions import ConfigurationError, DimensionError, RankDeficiencyError
from .linalg import check_triangular_rank, householder_qr
from .lsq import LsqConfig, solve_ls
from .rng import DEFAULT_SEED, RandomStream
from .srft import apply_adjoint, apply_to_columns, build_srft

STEP_NAMES = ("sketch", "sketch_min_norm", "adjoint", "least_squares", "assemble")

#: Size limits of :func:`solve_oracle_svd`.
ORACLE_MAX_M = 64
ORACLE_MAX_N = 1024


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """A system ``A p = b`` with ``A`` of shape ``(m, n)``, ``1 <= m < n``."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = as_complex_array(self.A, "A", ndim=2)
        m, n = A.shape
        if not m < n:
            raise DimensionError(f"system must be underdetermined (m < n), got A of shape {A.shape}")
        b = as_complex_vector(self.b, "b", length=m)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]


@dataclass(frozen=True)
class SolverConfig:
    """Parameters of :func:`solve_randomized`.

    Attributes
    ----------
    l : int or None
        Sketch size; ``None`` means ``4 * m``. Must satisfy ``m < l < n``.
    alpha : float
        Singular-value slack, ``> 1``.
    epsilon : float
        Target relative accuracy ``||x - p|| <= epsilon ||p||``, in ``(0, 1)``.
    seed : int
        Seed for both randomized transforms.
    sampling : {"without", "with"}
        How the transforms select rows.
    max_iterations : int
        Iteration cap of the least-squares stage.
    lsq_tol : float or None
        Relative precision requested from the least-squares stage. ``None``
        means ``epsilon**2 * l / (alpha * n)``, the value that yields the
        ``epsilon`` guarantee.
    """

    l: int | None = None
    alpha: float = 4.0
    epsilon: float = 1e-6
    seed: int = DEFAULT_SEED
    sampling: str = "without"
    max_iterations: int = 300
    lsq_tol: float | None = None

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ConfigurationError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not self.alpha > 1:
            raise ConfigurationError(f"alpha must exceed 1, got {self.alpha}")
        if self.lsq_tol is not None and not self.lsq_tol > 0:
            raise ConfigurationError(f"lsq_tol must be positive, got {self.lsq_tol}")
        check_sampling(self.sampling)
        check_positive_int(self.max_iterations, "max_iterations")
        if self.l is not None:
            check_positive_int(self.l, "l")

    def sketch_size(self, m, n):
        l = 4 * m if self.l is None else self.l
        if not m < l < n:
            raise ConfigurationError(
                f"sketch size l={l} must satisfy m={m} < l < n={n}; "
                "the randomized solver targets n >> m, use solve_classical instead"
            )
        return l

    def tau(self, l, n):
        if self.lsq_tol is not None:
            return self.lsq_tol
        return self.epsilon**2 * l / (self.alpha * n)


@dataclass
class SolveReport:
    """Output of :func:`solve_randomized`.

    ``c`` is the intermediate solution of ``A c = b`` whose projection onto
    ``range(A^*)`` is the minimal-norm solution; it is kept for diagnostics.
    """

    x: np.ndarray
    l: int
    tau: float
    step_times: dict = field(default_factory=dict)
    c_norm_ratio: float = 0.0
    residual_norm: float = 0.0
    lsq_iterations: int = 0
    lsq_converged: bool = True
    lsq_excess: float = 0.0
    c: np.ndarray | None = field(default=None, repr=False)

    def summary(self):
        """JSON-serializable diagnostics (everything except the vectors)."""
        return {
            "l": self.l,
            "tau": self.tau,
            "step_times": dict(self.step_times),
            "c_norm_ratio": self.c_norm_ratio,
            "residual_norm": self.residual_norm,
            "lsq_iterations": self.lsq_iterations,
            "lsq_converged": self.lsq_converged,
            "lsq_excess": self.lsq_excess,
        }


def _min_norm_from_tall_qr(Q, R, rhs):
    # min-norm w with (QR)^* w = rhs: w = Q R^{-*} rhs
    return Q @ scipy.linalg.solve_triangular(R, rhs, trans="C")


def solve_randomized(inst, cfg=None):
    """Approximate the minimal-norm solution of ``inst`` to relative precision ``cfg.epsilon``.

    Parameters
    ----------
    inst : ProblemInstance
    cfg : SolverConfig, optional

    Returns
    -------
    SolveReport

    Raises
    ------
    ConfigurationError
        If the sketch size does not satisfy ``m < l < n``.
    RankDeficiencyError
        If the sketch of ``A^*`` or the least-squares sketch is singular.
    """
    cfg = SolverConfig() if cfg is None else cfg
    m, n = inst.m, inst.n
    l = cfg.sketch_size(m, n)
    tau = cfg.tau(l, n)
    replace = check_sampling(cfg.sampling)
    times = dict.fromkeys(STEP_NAMES, 0.0)

    if not np.any(inst.b):
        zero = np.zeros(n, dtype=np.complex128)
        return SolveReport(x=zero, l=l, tau=tau, step_times=times, c=zero.copy())

    stream = RandomStream(cfg.seed)
    op = build_srft(l, n, stream.substream("srft"), replace=replace)
    Ah = inst.A.conj().T

    t = time.perf_counter()
    S = apply_to_columns(op, Ah)
    times["sketch"] = time.perf_counter() - t

    t = time.perf_counter()
    Q, R = scipy.linalg.qr(S, mode="economic")
    check_triangular_rank(R, l, "sketch of A^*")
    z = _min_norm_from_tall_qr(Q, R, inst.b)
    times["sketch_min_norm"] = time.perf_counter() - t

    t = time.perf_counter()
    c = apply_adjoint(op, z)
    times["adjoint"] = time.perf_counter() - t

    t = time.perf_counter()
    lsq_cfg = LsqConfig(l=l, tau=tau, max_iterations=cfg.max_iterations,
                        stream=stream.substream("lsq"), replace=replace)
    sol = solve_ls(Ah, c, lsq_cfg)
    times["least_squares"] = time.perf_counter() - t

    t = time.perf_counter()
    x = Ah @ sol.y
    times["assemble"] = time.perf_counter() - t

    xnorm = np.linalg.norm(x)
    ratio = np.linalg.norm(c) * np.sqrt(l / (cfg.alpha * n)) / xnorm if xnorm > 0 else np.inf
    return SolveReport(
        x=x,
        l=l,
        tau=tau,
        step_times=times,
        c_norm_ratio=float(ratio),
        residual_norm=float(np.linalg.norm(inst.A @ x - inst.b)),
        lsq_iterations=sol.iterations,
        lsq_converged=sol.converged,
        lsq_excess=sol.achieved_excess,
        c=c,
    )


def solve_classical(inst, method="lapack"):
    """Minimal-norm solution via column-pivoted Householder QR of ``A^*``.

    With ``A^* P = Q R`` the solution is ``Q R^{-*} P^T b``.

    Parameters
    ----------
    inst : ProblemInstance
    method : {"lapack", "householder"}
        ``"lapack"`` calls LAPACK ``zgeqp3`` through SciPy; ``"householder"``
        uses the pure NumPy factorization in :mod:`randminnorm.linalg`.
    """
    if not np.any(inst.b):
        return np.zeros(inst.n, dtype=np.complex128)
    Ah = inst.A.conj().T
    if method == "lapack":
        Q, R, piv = scipy.linalg.qr(Ah, mode="economic", pivoting=True)
    elif method == "householder":
        Q, R, piv = householder_qr(Ah, pivoting=True)
    else:
        raise ValueError(f"unknown method {method!r}")
    check_triangular_rank(R, inst.n, "pivoted QR of A^*")
    return _min_norm_from_tall_qr(Q, R, inst.b[piv])


def solve_oracle_svd(inst):
    """Minimal-norm solution ``A^+ b`` from a full SVD (small problems only)."""
    if inst.m > ORACLE_MAX_M or inst.n > ORACLE_MAX_N:
        raise ValueError(
            f"SVD oracle is limited to m <= {ORACLE_MAX_M}, n <= {ORACLE_MAX_N}; "
            f"got m={inst.m}, n={inst.n}"
        )
    U, sig, Vh = np.linalg.svd(inst.A, full_matrices=False)
    keep = sig > max(inst.A.shape) * np.finfo(float).eps * sig[0]
    if not keep.all():
        raise RankDeficiencyError("SVD of A", int(keep.sum()), inst.m)
    return Vh.conj().T @ ((U.conj().T @ inst.b) / sig)
