"""Dense Householder QR and the triangular rank test shared by the solvers."""

import numpy as np

from .exceptions import RankDeficiencyError

_EPS = np.finfo(np.float64).eps


def check_triangular_rank(R, nrows, where):
    """Raise :class:`RankDeficiencyError` if ``R`` is numerically singular.

    A diagonal entry counts as zero when ``|R[j, j]| < nrows * eps * max|R[j, j]|``.
    """
    diag = np.abs(np.diag(R))
    ncols = diag.shape[0]
    top = diag.max(initial=0.0)
    rank = int(np.count_nonzero(diag >= nrows * _EPS * top)) if top > 0 else 0
    if rank < ncols:
        raise RankDeficiencyError(where, rank, ncols)


def householder_qr(A, pivoting=False):
    """Thin QR factorization by complex Householder reflections.

    Parameters
    ----------
    A : ndarray of shape (n, m), n >= m
    pivoting : bool, default=False
        Choose at each step the remaining column of largest norm
        (Businger-Golub column pivoting).

    Returns
    -------
    Q : ndarray of shape (n, m)
        Orthonormal columns.
    R : ndarray of shape (m, m)
        Upper triangular. The diagonal carries the reflector phases; no
        sign convention is imposed.
    piv : ndarray of shape (m,)
        Column order, ``A[:, piv] = Q @ R``.
    """
    W = np.array(A, dtype=np.complex128)
    n, m = W.shape
    if n < m:
        raise ValueError(f"householder_qr needs n >= m, got shape {W.shape}")
    piv = np.arange(m)
    vs = []
    for k in range(m):
        if pivoting:
            norms = np.einsum("ij,ij->j", W[k:, k:].conj(), W[k:, k:]).real
            j = k + int(np.argmax(norms))
            if j != k:
                W[:, [k, j]] = W[:, [j, k]]
                piv[[k, j]] = piv[[j, k]]
        x = W[k:, k]
        xnorm = np.linalg.norm(x)
        v = x.copy()
        if xnorm == 0.0:
            vs.append(None)
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        alpha = -phase * xnorm
        v[0] -= alpha
        v /= np.linalg.norm(v)
        W[k:, k:] -= 2.0 * np.outer(v, v.conj() @ W[k:, k:])
        vs.append(v)
    R = np.triu(W[:m, :])
    Q = np.eye(n, m, dtype=np.complex128)
    for k in range(m - 1, -1, -1):
        v = vs[k]
        if v is not None:
            Q[k:, :] -= 2.0 * np.outer(v, v.conj() @ Q[k:, :])
    return Q, R, piv
