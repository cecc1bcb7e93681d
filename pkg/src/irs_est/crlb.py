"""Classical and Bayesian CRLB with a Rayleigh-approximated prior.

The density of an inner product of complex Gaussian vectors has no
convenient closed form, so the prior Fisher information is estimated by a
sample mean of the squared Rayleigh score, with the Rayleigh scale fitted
by maximum likelihood to the magnitudes of the same samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FISHER_MODES",
    "DegenerateSampleError",
    "RayleighFit",
    "FisherPrior",
    "CfPoint",
    "classical_crlb",
    "rayleigh_pdf",
    "rayleigh_cdf",
    "rayleigh_mle",
    "ks_statistic",
    "fisher_prior",
    "bayesian_crlb",
    "joint_cf",
    "empirical_cf",
    "cf_grid",
]

FISHER_MODES = ("magnitude", "complex")
DEGENERATE_MODULUS = 1e-300
DEFAULT_TRIM = 1e-4


class DegenerateSampleError(ValueError):
    """A sample too close to zero for the Rayleigh score ``1/r``."""

    def __init__(self, index: int, value):
        self.index = index
        super().__init__(f"degenerate sample at index {index}: |J| = {abs(value)!r} < {DEGENERATE_MODULUS}")


@dataclass(frozen=True)
class RayleighFit:
    b_hat: float
    n: int
    ks_stat: float


@dataclass(frozen=True)
class FisherPrior:
    value: float
    mode: str
    n: int
    trim: float = 0.0


@dataclass(frozen=True)
class CfPoint:
    omega1: float
    omega2: float
    psi_exact: float
    psi_empirical: complex


def _energy(x) -> float:
    x = np.asarray(x, dtype=complex)
    return float(np.vdot(x, x).real)


def classical_crlb(x, sigma2: float) -> float:
    """``sigma2 / x^H x``: the bound without a prior."""
    energy = _energy(x)
    if not energy > 0:
        raise ValueError("classical CRLB is undefined for zero-energy pilots")
    return sigma2 / energy


def bayesian_crlb(x, sigma2: float, f_prior: float) -> float:
    """``[x^H x / sigma2 + f_prior]^{-1}``."""
    info = _energy(x) / sigma2 + f_prior
    if not info > 0:
        raise ValueError("Bayesian CRLB is undefined: total Fisher information is zero")
    return 1.0 / info


def rayleigh_pdf(r, b: float):
    r = np.asarray(r, dtype=float)
    return np.where(r >= 0, r / b**2 * np.exp(-(r**2) / (2 * b**2)), 0.0)


def rayleigh_cdf(r, b: float):
    r = np.asarray(r, dtype=float)
    return np.where(r >= 0, -np.expm1(-(r**2) / (2 * b**2)), 0.0)


def _magnitudes(samples) -> np.ndarray:
    r = np.asarray(samples)
    if np.iscomplexobj(r):
        r = np.abs(r)
    r = np.asarray(r, dtype=float).ravel()
    if r.size == 0:
        raise ValueError("cannot fit an empty sample set")
    if np.any(r < 0) or not np.all(np.isfinite(r)):
        raise ValueError("Rayleigh samples must be finite and nonnegative")
    return r


def ks_statistic(samples, b: float) -> float:
    """Kolmogorov-Smirnov distance between the samples and Rayleigh(``b``)."""
    r = np.sort(_magnitudes(samples))
    n = r.size
    cdf = rayleigh_cdf(r, b)
    upper = np.arange(1, n + 1) / n - cdf
    lower = cdf - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def rayleigh_mle(samples) -> RayleighFit:
    """Closed-form maximum-likelihood Rayleigh scale, ``sqrt(sum r^2 / 2n)``.

    Complex input is reduced to magnitudes first.
    """
    r = _magnitudes(samples)
    b_hat = math.sqrt(math.fsum((r * r).tolist()) / (2 * r.size))
    ks = ks_statistic(r, b_hat) if b_hat > 0 else 1.0
    return RayleighFit(b_hat=b_hat, n=int(r.size), ks_stat=ks)


def fisher_prior(samples, b: float, mode: str = "magnitude", trim: float = 0.0) -> FisherPrior:
    """Sample-mean estimate of the prior Fisher information.

    ``magnitude`` averages ``(1/r - r/b^2)^2`` over ``r = |J|``; ``complex``
    averages ``|1/J - J/b^2|^2`` over the complex draws.  ``trim`` drops that
    fraction of the smallest-magnitude samples before averaging (their
    ``1/r^2`` terms dominate the plain mean).
    """
    if mode not in FISHER_MODES:
        raise ValueError(f"fisher mode must be one of {FISHER_MODES}, got {mode!r}")
    if not b > 0:
        raise ValueError(f"Rayleigh scale must be positive, got {b}")
    if not 0.0 <= trim < 1.0:
        raise ValueError(f"trim fraction must be in [0, 1), got {trim}")
    z = np.asarray(samples).ravel()
    if z.size == 0:
        raise ValueError("cannot estimate Fisher information from an empty sample set")
    mod = np.abs(z)
    bad = np.flatnonzero(mod < DEGENERATE_MODULUS)
    if bad.size:
        raise DegenerateSampleError(int(bad[0]), z[bad[0]])
    if trim > 0:
        n_drop = int(math.floor(trim * z.size))
        if n_drop:
            # stable sort keeps the selection independent of tie order
            keep = np.sort(np.argsort(mod, kind="stable")[n_drop:])
            z, mod = z[keep], mod[keep]
    if mode == "magnitude":
        terms = (1.0 / mod - mod / b**2) ** 2
    else:
        zc = z.astype(complex)
        terms = np.abs(1.0 / zc - zc / b**2) ** 2
    # fsum is exactly rounded, so the value does not depend on sample order
    value = math.fsum(terms.tolist()) / terms.size
    return FisherPrior(value=value, mode=mode, n=int(terms.size), trim=float(trim))


def joint_cf(omega1, omega2, sigmaA2: float, sigmaB2: float, s: int):
    """Joint characteristic function of the real and imaginary parts of ``A^H B``.

    ``A, B ~ CN(0, sigma^2 I_s)`` independent.
    """
    if s < 1:
        raise ValueError(f"vector length must be >= 1, got {s}")
    w2 = np.asarray(omega1, dtype=float) ** 2 + np.asarray(omega2, dtype=float) ** 2
    val = (1.0 + sigmaA2 * sigmaB2 * w2 / 4.0) ** (-float(s))
    return float(val) if np.ndim(val) == 0 else val


def empirical_cf(samples, omega1, omega2):
    """``mean(exp(j (omega1 Re D + omega2 Im D)))`` at one or many frequencies."""
    d = np.asarray(samples, dtype=complex).ravel()
    if d.size == 0:
        raise ValueError("empirical characteristic function needs at least one sample")
    w1 = np.asarray(omega1, dtype=float)
    w2 = np.asarray(omega2, dtype=float)
    shape = np.broadcast(w1, w2).shape
    w1, w2 = np.broadcast_to(w1, shape).ravel(), np.broadcast_to(w2, shape).ravel()
    out = np.empty(w1.size, dtype=complex)
    for i in range(w1.size):
        out[i] = np.exp(1j * (w1[i] * d.real + w2[i] * d.imag)).mean()
    out = out.reshape(shape)
    return complex(out) if out.ndim == 0 else out


def cf_grid(samples, sigmaA2: float, sigmaB2: float, s: int, lim: float = 2.0, points: int = 9) -> list[CfPoint]:
    """Exact and empirical characteristic function on a square frequency grid."""
    axis = np.linspace(-lim, lim, points)
    W1, W2 = np.meshgrid(axis, axis, indexing="ij")
    emp = empirical_cf(samples, W1, W2)
    exact = joint_cf(W1, W2, sigmaA2, sigmaB2, s)
    return [
        CfPoint(float(W1[i, j]), float(W2[i, j]), float(exact[i, j]), complex(emp[i, j]))
        for i in range(points)
        for j in range(points)
    ]
