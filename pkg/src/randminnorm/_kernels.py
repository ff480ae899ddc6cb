"""Compiled kernels for the mixing matrix ``H = Theta Pi Z Theta~ Pi~ Z~``.

Rotation ``j`` of a chain acts on coordinates ``(j, j+1)`` with the block
``[[c, s], [-s, c]]``. The chain is the product ``R_0 R_1 ... R_{n-2}``;
multiplying it into a vector therefore applies ``R_{n-2}`` first and ``R_0``
last. A permutation ``pi`` maps ``x`` to ``x[pi]``.

Arrays hold one vector per row, shape ``(k, n)``. Each row is pushed through
every factor while it sits in two length-``n`` buffers, so the whole of ``H``
costs one read and one write of the row in main memory.
"""

import numba as nb
import numpy as np


@nb.njit(cache=True, nogil=True, inline="always")
def _chain(x, c, s):
    for j in range(x.shape[0] - 2, -1, -1):
        a = x[j]
        b = x[j + 1]
        x[j] = c[j] * a + s[j] * b
        x[j + 1] = c[j] * b - s[j] * a


@nb.njit(cache=True, nogil=True, inline="always")
def _chain_adjoint(x, c, s):
    for j in range(x.shape[0] - 1):
        a = x[j]
        b = x[j + 1]
        x[j] = c[j] * a - s[j] * b
        x[j + 1] = s[j] * a + c[j] * b


@nb.njit(cache=True, nogil=True)
def mix_rows(X, out, pi_t, zeta_t, cos_t, sin_t, pi, zeta, cos, sin, d):
    """``out[q] = D H X[q]`` for every row ``q``."""
    k, n = X.shape
    buf = np.empty(n, dtype=np.complex128)
    for q in range(k):
        x = X[q]
        for i in range(n):
            p = pi_t[i]
            buf[i] = x[p] * zeta_t[p]
        _chain(buf, cos_t, sin_t)
        y = out[q]
        for i in range(n):
            p = pi[i]
            y[i] = buf[p] * zeta[p]
        _chain(y, cos, sin)
        for i in range(n):
            y[i] *= d[i]


@nb.njit(cache=True, nogil=True)
def unmix_rows(X, out, pi_t, zeta_t, cos_t, sin_t, pi, zeta, cos, sin, d):
    """``out[q] = H^* D^* X[q]`` for every row ``q``; inverse of :func:`mix_rows`."""
    k, n = X.shape
    buf = np.empty(n, dtype=np.complex128)
    tmp = np.empty(n, dtype=np.complex128)
    for q in range(k):
        x = X[q]
        for i in range(n):
            tmp[i] = x[i] * np.conj(d[i])
        _chain_adjoint(tmp, cos, sin)
        for i in range(n):
            p = pi[i]
            buf[p] = tmp[i] * np.conj(zeta[p])
        _chain_adjoint(buf, cos_t, sin_t)
        y = out[q]
        for i in range(n):
            p = pi_t[i]
            y[p] = buf[i] * np.conj(zeta_t[p])
