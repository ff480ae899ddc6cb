import numpy as np
import pytest

from randminnorm.exceptions import RankDeficiencyError
from randminnorm.linalg import check_triangular_rank, householder_qr

from conftest import crandn


@pytest.mark.parametrize("pivoting", [False, True])
@pytest.mark.parametrize("shape", [(1, 1), (5, 3), (40, 40), (200, 17)])
def test_qr_reconstructs(shape, pivoting, rng):
    A = crandn(rng, *shape)
    Q, R, piv = householder_qr(A, pivoting=pivoting)
    assert Q.shape == shape and R.shape == (shape[1], shape[1])
    np.testing.assert_allclose(Q.conj().T @ Q, np.eye(shape[1]), atol=1e-13)
    np.testing.assert_array_equal(R, np.triu(R))
    assert np.max(np.abs(A[:, piv] - Q @ R)) <= 1e-13 * np.linalg.norm(A)


def test_pivoting_orders_diagonal(rng):
    A = crandn(rng, 30, 8) * np.logspace(0, -6, 8)
    d = np.abs(np.diag(householder_qr(A[:, ::-1], pivoting=True)[1]))
    assert np.all(np.diff(d) <= 1e-12 * d[0])


def test_zero_column():
    A = np.zeros((4, 2), dtype=complex)
    A[:, 0] = [1, 2, 3, 4]
    Q, R, piv = householder_qr(A)
    assert abs(R[1, 1]) == 0
    np.testing.assert_allclose(A[:, piv], Q @ R, atol=1e-15)


def test_qr_rejects_wide():
    with pytest.raises(ValueError):
        householder_qr(np.ones((2, 3)))


def test_rank_check():
    check_triangular_rank(np.diag([1.0, 1e-10]), 10, "x")
    with pytest.raises(RankDeficiencyError) as exc:
        check_triangular_rank(np.diag([1.0, 1e-16, 0.0]), 10, "here")
    assert exc.value.rank == 1 and exc.value.ncols == 3
    with pytest.raises(RankDeficiencyError):
        check_triangular_rank(np.zeros((2, 2)), 2, "zero")
