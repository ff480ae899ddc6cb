"""Subsampled randomized Fourier transform.

The transform is the ``l x n`` random matrix ``T = S F D H`` with

* ``H = Theta Pi Z Theta~ Pi~ Z~``: two rounds of (unit-modulus diagonal,
  random permutation, chain of ``n - 1`` random plane rotations);
* ``D``: diagonal of unit-modulus complex scalars;
* ``F``: the unitary DFT, ``F[j, k] = exp(-2 pi i j k / n) / sqrt(n)``;
* ``S``: selection of the rows ``s[0], ..., s[l-1]``.

Everything is applied in ``O(n log n)`` per vector from ``O(n)`` stored
parameters. Indices are 0-based. A permutation array ``pi`` represents the
matrix with ``(Pi x)[i] = x[pi[i]]``.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from ._kernels import mix_rows, unmix_rows
from ._validation import as_complex_array, as_complex_vector, check_positive_int
from .exceptions import DimensionError
from .rng import RandomStream

#: Largest ``n`` accepted by :func:`materialize_dense` unless overridden.
DENSE_CAP = 2048


def dft(x):
    """Unitary discrete Fourier transform of a vector (any length)."""
    x = as_complex_vector(x, "x")
    return _dft_rows(x[None, :])[0]


def _dft_rows(X):
    # pocketfft: mixed radix, Bluestein for large prime factors
    return scipy.fft.fft(X, axis=-1, norm="ortho")


def _idft_rows(X):
    return scipy.fft.ifft(X, axis=-1, norm="ortho")


@dataclass(frozen=True, eq=False)
class SrftOperator:
    """Parameters of one realization of the ``l x n`` transform.

    Use :func:`build_srft` to draw one. Instances are immutable, so the apply
    functions may be called on the same operator from several threads.
    """

    l: int
    n: int
    d: np.ndarray
    s: np.ndarray
    theta: np.ndarray
    theta_tilde: np.ndarray
    pi: np.ndarray
    pi_tilde: np.ndarray
    zeta: np.ndarray
    zeta_tilde: np.ndarray
    replace: bool = False
    _cos: np.ndarray = field(init=False, repr=False)
    _sin: np.ndarray = field(init=False, repr=False)
    _cos_tilde: np.ndarray = field(init=False, repr=False)
    _sin_tilde: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n, l = self.n, self.l
        if n < 2 or not 1 <= l <= n:
            raise ValueError(f"need n >= 2 and 1 <= l <= n, got l={l}, n={n}")
        for name, size in [("d", n), ("s", l), ("theta", n - 1), ("theta_tilde", n - 1),
                           ("pi", n), ("pi_tilde", n), ("zeta", n), ("zeta_tilde", n)]:
            arr = np.array(getattr(self, name))
            if arr.shape != (size,):
                raise DimensionError(f"{name} has shape {arr.shape}, expected ({size},)")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "_cos", np.cos(self.theta))
        object.__setattr__(self, "_sin", np.sin(self.theta))
        object.__setattr__(self, "_cos_tilde", np.cos(self.theta_tilde))
        object.__setattr__(self, "_sin_tilde", np.sin(self.theta_tilde))

    @property
    def shape(self):
        return (self.l, self.n)

    @classmethod
    def identity(cls, n, l=None):
        """Operator with trivial ``H`` and ``D`` selecting the first ``l`` rows of ``F``."""
        l = n if l is None else l
        ones = np.ones(n, dtype=np.complex128)
        ident = np.arange(n)
        return cls(l=l, n=n, d=ones, s=np.arange(l), theta=np.zeros(n - 1),
                   theta_tilde=np.zeros(n - 1), pi=ident, pi_tilde=ident.copy(),
                   zeta=ones.copy(), zeta_tilde=ones.copy())


def build_srft(l, n, stream=None, replace=False):
    """Draw an ``l x n`` transform from ``stream``.

    Parameters
    ----------
    l, n : int
        Output and input dimensions, ``1 <= l <= n`` and ``n >= 2``.
    stream : RandomStream, optional
        Source of randomness; each parameter family is drawn from its own
        named sub-stream. Defaults to ``RandomStream()``.
    replace : bool, default=False
        Draw the selected rows with replacement (i.i.d.) instead of as a
        uniformly random ``l``-subset.
    """
    l = check_positive_int(l, "l")
    n = check_positive_int(n, "n")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if l > n:
        raise ValueError(f"l must not exceed n, got l={l}, n={n}")
    stream = RandomStream() if stream is None else stream
    sub = stream.substream
    return SrftOperator(
        l=l,
        n=n,
        d=sub("d").unit_circle(n),
        s=sub("s").sample_indices(l, n, replace=replace),
        theta=sub("theta").uniform_angle(n - 1),
        theta_tilde=sub("theta_tilde").uniform_angle(n - 1),
        pi=sub("pi").random_permutation(n),
        pi_tilde=sub("pi_tilde").random_permutation(n),
        zeta=sub("zeta").unit_circle(n),
        zeta_tilde=sub("zeta_tilde").unit_circle(n),
        replace=bool(replace),
    )


# Internally vectors are stored one per row, shape (k, n). Rows are processed
# in chunks of about _CHUNK_BYTES so that mixing, FFT and row selection of a
# chunk all happen while it is cache resident. The column API below
# transposes at the boundary, which is free for the A^* inputs the solvers
# pass (the transpose of a C-ordered array).

_CHUNK_BYTES = 1 << 20


def _chunks(k, n):
    step = max(1, _CHUNK_BYTES // (16 * n))
    return [(q, min(q + step, k)) for q in range(0, k, step)]


def _kernel_args(op, d):
    return (op.pi_tilde, op.zeta_tilde, op._cos_tilde, op._sin_tilde,
            op.pi, op.zeta, op._cos, op._sin, d)


def _h_rows(op, X, d=None):
    out = np.empty(X.shape, dtype=np.complex128)
    mix_rows(X, out, *_kernel_args(op, np.ones(op.n, dtype=np.complex128) if d is None else d))
    return out


def _h_adjoint_rows(op, X, d=None):
    out = np.empty(X.shape, dtype=np.complex128)
    unmix_rows(X, out, *_kernel_args(op, np.ones(op.n, dtype=np.complex128) if d is None else d))
    return out


def _apply_rows(op, X):
    out = np.empty((X.shape[0], op.l), dtype=np.complex128)
    for a, b in _chunks(X.shape[0], op.n):
        out[a:b] = _dft_rows(_h_rows(op, X[a:b], op.d))[:, op.s]
    return out


def _adjoint_rows(op, V):
    k = V.shape[0]
    out = np.empty((k, op.n), dtype=np.complex128)
    for a, b in _chunks(k, op.n):
        Y = np.zeros((b - a, op.n), dtype=np.complex128)
        if op.replace:
            np.add.at(Y, (slice(None), op.s), V[a:b])
        else:
            Y[:, op.s] = V[a:b]
        out[a:b] = _h_adjoint_rows(op, _idft_rows(Y), op.d)
    return out


def apply_h(op, x):
    """Apply the unitary mixing matrix ``H`` to a length-``n`` vector."""
    x = as_complex_vector(x, "x", length=op.n)
    return _h_rows(op, x[None, :])[0]


def apply_h_adjoint(op, x):
    x = as_complex_vector(x, "x", length=op.n)
    return _h_adjoint_rows(op, x[None, :])[0]


def apply_to_columns(op, M):
    """Compute ``T @ M`` for an ``(n, k)`` matrix, column by column in ``O(k n log n)``."""
    M = as_complex_array(M, name="M", ndim=2)
    if M.shape[0] != op.n:
        raise DimensionError(f"M has {M.shape[0]} rows, operator expects n={op.n}")
    return _apply_rows(op, M.T).T


def adjoint_to_columns(op, V):
    """Compute ``T^* @ V`` for an ``(l, k)`` matrix."""
    V = as_complex_array(V, name="V", ndim=2)
    if V.shape[0] != op.l:
        raise DimensionError(f"V has {V.shape[0]} rows, operator expects l={op.l}")
    return _adjoint_rows(op, V.T).T


def apply(op, x):
    """Compute ``T @ x`` for a length-``n`` vector; returns length ``l``."""
    x = as_complex_vector(x, "x", length=op.n)
    return _apply_rows(op, x[None, :])[0]


def apply_adjoint(op, v):
    """Compute ``T^* @ v`` for a length-``l`` vector; returns length ``n``."""
    v = as_complex_vector(v, "v", length=op.l)
    return _adjoint_rows(op, v[None, :])[0]


def materialize_dense(op, max_n=DENSE_CAP):
    """Explicit ``l x n`` matrix of ``op``, built by applying it to ``I_n``.

    For tests only; refuses ``n > max_n``.
    """
    if op.n > max_n:
        raise ValueError(f"n={op.n} exceeds the dense materialization cap {max_n}")
    return apply_to_columns(op, np.eye(op.n, dtype=np.complex128))
