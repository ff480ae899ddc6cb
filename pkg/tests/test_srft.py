import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randminnorm import srft
from randminnorm.exceptions import DimensionError
from randminnorm.rng import RandomStream
from randminnorm.srft import (
    SrftOperator,
    adjoint_to_columns,
    apply,
    apply_adjoint,
    apply_h,
    apply_h_adjoint,
    apply_to_columns,
    build_srft,
    dft,
    materialize_dense,
)

from conftest import crandn, naive_dft


# Independent dense construction from the operator's raw parameters.

def rotation_chain_matrix(theta):
    n = len(theta) + 1
    M = np.eye(n)
    for j, t in enumerate(theta):
        R = np.eye(n)
        R[j, j] = R[j + 1, j + 1] = np.cos(t)
        R[j, j + 1] = np.sin(t)
        R[j + 1, j] = -np.sin(t)
        M = M @ R
    return M


def permutation_matrix(pi):
    n = len(pi)
    P = np.zeros((n, n))
    P[np.arange(n), pi] = 1.0
    return P


def dense_h(op):
    return (rotation_chain_matrix(op.theta) @ permutation_matrix(op.pi) @ np.diag(op.zeta)
            @ rotation_chain_matrix(op.theta_tilde) @ permutation_matrix(op.pi_tilde)
            @ np.diag(op.zeta_tilde))


def dense_t(op):
    n = op.n
    F = naive_dft(np.eye(n))
    S = np.zeros((op.l, n))
    S[np.arange(op.l), op.s] = 1.0
    return S @ F @ np.diag(op.d) @ dense_h(op)


# build_srft

def test_build_field_counts_l_eq_n_2():
    op = build_srft(2, 2, RandomStream(1))
    assert op.theta.shape == op.theta_tilde.shape == (1,)
    assert op.d.shape == op.zeta.shape == op.zeta_tilde.shape == (2,)
    assert op.s.shape == (2,) and op.shape == (2, 2)


def test_build_deterministic():
    a, b = build_srft(5, 40, RandomStream(3)), build_srft(5, 40, RandomStream(3))
    for f in ("d", "s", "theta", "theta_tilde", "pi", "pi_tilde", "zeta", "zeta_tilde"):
        np.testing.assert_array_equal(getattr(a, f), getattr(b, f))


def test_build_without_replacement_distinct():
    op = build_srft(4, 8, RandomStream(2))
    assert len(set(op.s.tolist())) == 4


def test_build_invariants(stream):
    op = build_srft(30, 100, stream)
    for f in ("d", "zeta", "zeta_tilde"):
        assert np.max(np.abs(np.abs(getattr(op, f)) - 1)) <= 1e-15
    for f in ("pi", "pi_tilde"):
        np.testing.assert_array_equal(np.sort(getattr(op, f)), np.arange(100))
    assert op.s.min() >= 0 and op.s.max() < 100


@pytest.mark.parametrize("l, n", [(5, 4), (1, 1), (0, 4)])
def test_build_invalid(l, n):
    with pytest.raises(ValueError):
        build_srft(l, n, RandomStream())


def test_operator_is_immutable(stream):
    op = build_srft(3, 8, stream)
    with pytest.raises(ValueError):
        op.d[0] = 2.0


# dft

def test_dft_delta():
    np.testing.assert_allclose(dft([1, 0, 0, 0]), [0.5] * 4, atol=1e-16)


@pytest.mark.parametrize("n", [1, 2, 5, 16, 97])
def test_dft_of_ones(n):
    e = np.zeros(n)
    e[0] = np.sqrt(n)
    np.testing.assert_allclose(dft(np.ones(n)), e, atol=1e-13)


def test_dft_n12_matches_naive(rng):
    x = crandn(rng, 12)
    assert np.max(np.abs(dft(x) - naive_dft(x))) <= 1e-13


@pytest.mark.parametrize("n", range(1, 41))
def test_dft_matches_formula_and_is_isometry(n, rng):
    x = crandn(rng, n)
    y = dft(x)
    assert np.max(np.abs(y - naive_dft(x))) <= 1e-13
    assert abs(np.linalg.norm(y) - np.linalg.norm(x)) <= 1e-13 * np.linalg.norm(x)


def test_dft_prime_length_large(rng):
    n = 1009
    x = crandn(rng, n)
    assert np.max(np.abs(dft(x) - naive_dft(x))) <= 1e-12


# apply_h

def test_h_identity_operator(rng):
    x = crandn(rng, 9)
    np.testing.assert_allclose(apply_h(SrftOperator.identity(9), x), x, atol=0)


@pytest.mark.parametrize("n", [2, 3, 17, 64, 1000])
def test_h_unitary(n, rng):
    op = build_srft(1, n, RandomStream(n))
    x = crandn(rng, n)
    assert abs(np.linalg.norm(apply_h(op, x)) - np.linalg.norm(x)) <= 1e-12 * np.linalg.norm(x)
    np.testing.assert_allclose(apply_h_adjoint(op, apply_h(op, x)), x, atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_h_matches_dense_n3(seed, rng):
    op = build_srft(2, 3, RandomStream(seed))
    x = crandn(rng, 3)
    np.testing.assert_allclose(apply_h(op, x), dense_h(op) @ x, atol=1e-14)


def test_rotation_order_pinned():
    # one nonzero angle per position; the (n-1, n) rotation must act first
    theta = np.array([0.3, 1.1])
    op = SrftOperator(l=3, n=3, d=np.ones(3, complex), s=np.arange(3), theta=theta,
                      theta_tilde=np.zeros(2), pi=np.arange(3), pi_tilde=np.arange(3),
                      zeta=np.ones(3, complex), zeta_tilde=np.ones(3, complex))
    x = np.array([1.0, 2.0, 3.0])
    c0, s0, c1, s1 = np.cos(0.3), np.sin(0.3), np.cos(1.1), np.sin(1.1)
    R0 = np.array([[c0, s0, 0], [-s0, c0, 0], [0, 0, 1]])
    R1 = np.array([[1, 0, 0], [0, c1, s1], [0, -s1, c1]])
    np.testing.assert_allclose(apply_h(op, x), R0 @ (R1 @ x), atol=1e-15)


def test_h_length_mismatch(stream):
    with pytest.raises(DimensionError):
        apply_h(build_srft(2, 5, stream), np.ones(4))


# apply / adjoint

def test_apply_trivial_is_dft(rng):
    x = crandn(rng, 10)
    np.testing.assert_allclose(apply(SrftOperator.identity(10), x), dft(x), atol=1e-15)


def test_apply_norm_bound(rng, stream):
    op = build_srft(20, 64, stream)
    x = crandn(rng, 64)
    assert np.linalg.norm(apply(op, x)) <= np.linalg.norm(x) * (1 + 1e-12)


@pytest.mark.parametrize("seed", range(4))
def test_apply_matches_dense_oracle(seed, rng):
    op = build_srft(3, 8, RandomStream(seed))
    x = crandn(rng, 8)
    assert np.max(np.abs(apply(op, x) - dense_t(op) @ x)) <= 1e-13


@pytest.mark.parametrize("seed", range(4))
def test_adjoint_matches_dense_oracle(seed, rng):
    op = build_srft(3, 8, RandomStream(seed))
    v = crandn(rng, 3)
    assert np.max(np.abs(apply_adjoint(op, v) - dense_t(op).conj().T @ v)) <= 1e-13


def test_adjoint_isometry_without_replacement(rng, stream):
    op = build_srft(50, 300, stream)
    v = crandn(rng, 50)
    assert abs(np.linalg.norm(apply_adjoint(op, v)) - np.linalg.norm(v)) <= 1e-12 * np.linalg.norm(v)


def test_adjoint_trivial_is_inverse_dft(rng):
    v = crandn(rng, 7)
    np.testing.assert_allclose(dft(apply_adjoint(SrftOperator.identity(7), v)), v, atol=1e-14)


@pytest.mark.parametrize("replace", [False, True])
def test_with_replacement_dense_and_adjoint(replace, rng):
    op = build_srft(6, 8, RandomStream(31), replace=replace)
    x, v = crandn(rng, 8), crandn(rng, 6)
    T = dense_t(op)
    assert np.max(np.abs(apply(op, x) - T @ x)) <= 1e-13
    assert np.max(np.abs(apply_adjoint(op, v) - T.conj().T @ v)) <= 1e-13


def test_adjoint_length_mismatch(stream):
    with pytest.raises(DimensionError):
        apply_adjoint(build_srft(2, 5, stream), np.ones(3))


# apply_to_columns

def test_columns_single(rng, stream):
    op = build_srft(4, 16, stream)
    x = crandn(rng, 16)
    np.testing.assert_array_equal(apply_to_columns(op, x[:, None])[:, 0], apply(op, x))


def test_columns_duplicate(rng, stream):
    op = build_srft(4, 16, stream)
    x = crandn(rng, 16)
    Y = apply_to_columns(op, np.column_stack([x, x]))
    np.testing.assert_array_equal(Y[:, 0], Y[:, 1])
    np.testing.assert_allclose(Y[:, 0], apply(op, x), atol=1e-15)


def test_columns_match_dense(rng):
    op = build_srft(3, 8, RandomStream(77))
    M = crandn(rng, 8, 2)
    assert np.max(np.abs(apply_to_columns(op, M) - dense_t(op) @ M)) <= 1e-13
    V = crandn(rng, 3, 2)
    assert np.max(np.abs(adjoint_to_columns(op, V) - dense_t(op).conj().T @ V)) <= 1e-13


def test_columns_row_mismatch(stream):
    with pytest.raises(DimensionError):
        apply_to_columns(build_srft(2, 5, stream), np.ones((4, 2)))


# materialize_dense

def test_dense_trivial_is_dft_matrix():
    np.testing.assert_allclose(materialize_dense(SrftOperator.identity(6)), naive_dft(np.eye(6)),
                               atol=1e-15)


def test_dense_rows_orthonormal(stream):
    T = materialize_dense(build_srft(12, 40, stream))
    assert np.max(np.abs(T @ T.conj().T - np.eye(12))) <= 1e-12


def test_dense_self_consistency(rng, stream):
    op = build_srft(5, 8, stream)
    x = crandn(rng, 8)
    assert np.max(np.abs(materialize_dense(op) @ x - apply(op, x))) <= 1e-13


def test_dense_cap(stream):
    op = build_srft(2, 20, stream)
    with pytest.raises(ValueError):
        materialize_dense(op, max_n=10)
    assert srft.DENSE_CAP == 2048


# properties

@given(st.integers(2, 64), st.integers(0, 2**32), st.data())
@settings(max_examples=60, deadline=None)
def test_fast_equals_dense_property(n, seed, data):
    l = data.draw(st.integers(1, n))
    s = RandomStream(seed)
    op = build_srft(l, n, s.substream("op"))
    x = s.substream("x").complex_normal(n)
    assert np.max(np.abs(apply(op, x) - materialize_dense(op) @ x)) <= 1e-12


@given(st.integers(2, 300), st.integers(0, 2**32), st.booleans(), st.data())
@settings(max_examples=60, deadline=None)
def test_adjoint_consistency_property(n, seed, replace, data):
    l = data.draw(st.integers(1, n))
    s = RandomStream(seed)
    op = build_srft(l, n, s.substream("op"), replace=replace)
    x, v = s.substream("x").complex_normal(n), s.substream("v").complex_normal(l)
    lhs = np.vdot(v, apply(op, x))
    rhs = np.vdot(apply_adjoint(op, v), x)
    assert abs(lhs - rhs) <= 1e-12 * np.linalg.norm(x) * np.linalg.norm(v)
