import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irs_est.numerics import (
    NotHermitianPositiveDefiniteError,
    inner_h,
    inner_t,
    is_hermitian,
    pilot_covariance,
    push_through_residual,
    solve_hpd,
)
from irs_est.rand_core import derive_stream, sample_cscg, sample_qpsk
from irs_est.validation import random_instances


def test_inner_transpose_single_entry():
    assert inner_t([1], [1j]) == 1j


def test_inner_hermitian_qpsk_energy():
    x = sample_qpsk(derive_stream(0), 4, 1.0)
    assert inner_h(x, x) == pytest.approx(4.0, rel=1e-15)


def test_inner_against_naive_loop():
    s = derive_stream(1, ("inner",))
    a, b = sample_cscg(s, 7, 1.0), sample_cscg(s, 7, 1.0)
    loop_t = sum(a[i] * b[i] for i in range(7))
    loop_h = sum(a[i].conjugate() * b[i] for i in range(7))
    assert abs(inner_t(a, b) - loop_t) <= 1e-14 * abs(loop_t)
    assert abs(inner_h(a, b) - loop_h) <= 1e-14 * abs(loop_h)


def test_inner_length_mismatch():
    with pytest.raises(ValueError):
        inner_t([1, 2], [1])
    with pytest.raises(ValueError):
        inner_h([1, 2], [1, 2, 3])


def test_solve_identity():
    y = np.array([1 + 2j, -3, 0.5j])
    np.testing.assert_array_equal(solve_hpd(np.eye(3), y), y)


def test_solve_diagonal():
    np.testing.assert_allclose(solve_hpd(2 * np.eye(3), [2, 4, 6]), [1, 2, 3], rtol=1e-15)


def test_solve_rank_one_plus_ridge_against_explicit_inverse():
    s = derive_stream(2, ("solve",))
    x = sample_cscg(s, 6, 1.0)
    A = 3.0 * np.outer(x, x.conj()) + 0.5 * np.eye(6)
    y = sample_cscg(s, 6, 1.0)
    ref = np.linalg.inv(A) @ y
    got = solve_hpd(A, y)
    assert np.linalg.norm(got - ref) <= 1e-10 * np.linalg.norm(ref)
    assert np.linalg.norm(A @ got - y) <= 1e-10 * np.linalg.norm(y)


def test_solve_accepts_block_rhs():
    A = pilot_covariance([1, 1j], 1.0, 1.0)
    Y = np.array([[1, 0], [0, 1]], dtype=complex)
    np.testing.assert_allclose(A @ solve_hpd(A, Y), Y, atol=1e-14)


def test_solve_rejects_non_hermitian():
    with pytest.raises(NotHermitianPositiveDefiniteError):
        solve_hpd(np.array([[1, 1], [0, 1]], dtype=complex), [1, 1])


def test_solve_rejects_indefinite():
    with pytest.raises(NotHermitianPositiveDefiniteError):
        solve_hpd(np.diag([1.0, -1.0]), [1, 1])


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_hpd(np.eye(2), [1, 2, 3])


def test_is_hermitian():
    assert is_hermitian(pilot_covariance([1 + 1j, 2], 2.0, 1.0))
    assert not is_hermitian(np.array([[1, 1j], [1j, 1]]))
    assert not is_hermitian(np.ones((2, 3)))


def test_push_through_scalar_case():
    assert push_through_residual([1.0], 1.0, 1.0) == 0.0


def test_push_through_qpsk_p4():
    x = sample_qpsk(derive_stream(3, ("pt",)), 4, 1.0)
    assert push_through_residual(x, 1.0, 1.0) <= 1e-12


def test_push_through_zero_prior_variance():
    x = sample_qpsk(derive_stream(4, ("pt0",)), 5, 1.0)
    assert push_through_residual(x, 0.0, 1.0) == 0.0


def test_push_through_rejects_zero_noise():
    with pytest.raises(ValueError):
        push_through_residual([1.0], 1.0, 0.0)


def test_push_through_random_family():
    worst = max(push_through_residual(x, v, s) for x, v, s, _, _ in random_instances(0))
    assert worst <= 1e-12


@settings(max_examples=50, deadline=None)
@given(
    P=st.integers(1, 16),
    seed=st.integers(0, 2**32),
    log_v=st.floats(-1, 1),
    log_s=st.floats(-1, 1),
)
def test_solve_reconstructs(P, seed, log_v, log_s):
    s = derive_stream(seed, ("prop",))
    x = sample_qpsk(s, P, 1.0)
    A = pilot_covariance(x, 10**log_v, 10**log_s)
    y = sample_cscg(s, P, 1.0)
    assert np.linalg.norm(A @ solve_hpd(A, y) - y) <= 1e-10 * np.linalg.norm(y)
