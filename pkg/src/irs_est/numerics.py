"""Small dense complex linear algebra used by the estimators."""

from __future__ import annotations

import numpy as np
import scipy.linalg

__all__ = [
    "NotHermitianPositiveDefiniteError",
    "inner_t",
    "inner_h",
    "is_hermitian",
    "solve_hpd",
    "pilot_covariance",
    "push_through_residual",
]

HERMITIAN_RTOL = 1e-12


class NotHermitianPositiveDefiniteError(np.linalg.LinAlgError):
    """Raised when a matrix handed to :func:`solve_hpd` is not HPD."""


def _as_vector(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 1 or a.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-D vector, got shape {a.shape}")
    return a


def inner_t(a, b) -> complex:
    """Unconjugated product ``a^T b``."""
    a, b = _as_vector(a, "a"), _as_vector(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    return complex(np.dot(a, b))


def inner_h(a, b) -> complex:
    """Conjugated product ``a^H b``."""
    a, b = _as_vector(a, "a"), _as_vector(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    return complex(np.vdot(a, b))


def is_hermitian(A, rtol: float = HERMITIAN_RTOL) -> bool:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    scale = np.linalg.norm(A)
    return bool(np.linalg.norm(A - A.conj().T) <= rtol * max(scale, np.finfo(float).tiny))


def solve_hpd(A, y) -> np.ndarray:
    """Solve ``A x = y`` for Hermitian positive definite ``A`` by Cholesky.

    ``y`` may be a vector of length ``P`` or a ``(P, m)`` block of
    right-hand sides.  Never forms ``A^{-1}``.
    """
    A = np.asarray(A, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    if y.shape[0] != A.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, y is {y.shape}")
    if not is_hermitian(A):
        raise NotHermitianPositiveDefiniteError("matrix is not Hermitian")
    if A.shape == (1, 1):
        a = A[0, 0].real
        if not a > 0:
            raise NotHermitianPositiveDefiniteError(f"matrix is not positive definite: {a!r}")
        return y / a
    try:
        factor = scipy.linalg.cho_factor(A, lower=True, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise NotHermitianPositiveDefiniteError(f"matrix is not positive definite: {exc}") from None
    return scipy.linalg.cho_solve(factor, y)


def pilot_covariance(x, var_j: float, sigma2: float) -> np.ndarray:
    """Covariance of the received pilot block, ``var_j x x^H + sigma2 I``."""
    x = _as_vector(x, "x")
    return var_j * np.outer(x, x.conj()) + sigma2 * np.eye(x.size)


def push_through_residual(x, sigma_h2: float, sigma2: float) -> float:
    """Relative gap between the two sides of the push-through identity.

    Compares ``x^H (sigma_h2 x x^H + sigma2 I)^{-1}`` (a P-dimensional
    Cholesky solve) against ``x^H / (sigma_h2 x^H x + sigma2)`` (a scalar
    division) and returns ``||lhs - rhs|| / ||rhs||``.
    """
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    x = _as_vector(x, "x")
    A = pilot_covariance(x, sigma_h2, sigma2)
    # A is Hermitian, so x^H A^{-1} = (A^{-1} x)^H
    lhs = solve_hpd(A, x).conj()
    rhs = x.conj() / (sigma_h2 * np.vdot(x, x).real + sigma2)
    denom = np.linalg.norm(rhs)
    if denom == 0:
        return float(np.linalg.norm(lhs))
    return float(np.linalg.norm(lhs - rhs) / denom)
