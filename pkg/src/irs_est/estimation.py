"""LMMSE estimation of the cascaded channels and its mean squared error."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel_model import SystemParams, draw_cascade_batch, theoretical_moments
from .numerics import pilot_covariance, solve_hpd
from .rand_core import block_sizes, derive_stream, run_blocks
from .signal import LinkId, effective_phase, make_pilot_block, transmit_batch

__all__ = [
    "TRIAL_BLOCK",
    "LmmseEstimate",
    "MsePoint",
    "lmmse_matrix_form",
    "lmmse_scalar_form",
    "lmmse_estimate",
    "closed_form_mse",
    "long_form_mse",
    "simulate_link",
    "empirical_mse",
]

# Trials are simulated in fixed-size blocks, each with its own derived
# stream, so results do not depend on how blocks are spread over workers.
TRIAL_BLOCK = 2048


@dataclass(frozen=True)
class LmmseEstimate:
    link: LinkId
    k: int
    j_hat: complex


@dataclass(frozen=True)
class MsePoint:
    sweep_value: float
    closed_form: float
    empirical: float
    crlb_bayes: float
    crlb_classical: float


def _check_inputs(x, y, var_j, sigma2):
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.ndim != 1 or x.size == 0:
        raise ValueError(f"pilot vector must be nonempty 1-D, got shape {x.shape}")
    if y.shape[-1] != x.size:
        raise ValueError(f"dimension mismatch: pilots have length {x.size}, observation has shape {y.shape}")
    if not sigma2 > 0:
        raise ValueError(f"noise variance must be positive, got {sigma2}")
    if not var_j > 0:
        raise ValueError(f"prior variance must be positive, got {var_j}")
    return x, y


def lmmse_matrix_form(x, y, phi_eff: complex, var_j: float, sigma2: float):
    """LMMSE estimate through the ``P x P`` received covariance.

    ``(var_j / phi_eff) x^H (var_j x x^H + sigma2 I)^{-1} y``.  ``y`` may be a
    single block of length ``P`` or a ``(trials, P)`` array.
    """
    x, y = _check_inputs(x, y, var_j, sigma2)
    A = pilot_covariance(x, var_j, sigma2)
    z = solve_hpd(A, y.T)
    est = (var_j / phi_eff) * (x.conj() @ z)
    return complex(est) if np.ndim(est) == 0 else est


def lmmse_scalar_form(x, y, phi_eff: complex, var_j: float, sigma2: float):
    """LMMSE estimate after the push-through reduction to a scalar division.

    ``(var_j / phi_eff) (x^H y) / (var_j x^H x + sigma2)``.
    """
    x, y = _check_inputs(x, y, var_j, sigma2)
    energy = np.vdot(x, x).real
    est = (var_j / phi_eff) * (y @ x.conj()) / (var_j * energy + sigma2)
    return complex(est) if np.ndim(est) == 0 else est


def lmmse_estimate(block, received, var_j: float, sigma2: float) -> LmmseEstimate:
    j_hat = lmmse_scalar_form(block.x, received.y, block.phi_eff, var_j, sigma2)
    return LmmseEstimate(link=block.link, k=block.k, j_hat=j_hat)


def closed_form_mse(x, var_j: float, sigma2: float) -> float:
    """``[x^H x / sigma2 + 1 / var_j]^{-1}``.

    Evaluated as ``var_j / (1 + var_j x^H x / sigma2)``, which returns the
    prior variance exactly for a zero-energy block.
    """
    if not sigma2 > 0:
        raise ValueError(f"noise variance must be positive, got {sigma2}")
    if not var_j > 0:
        raise ValueError(f"prior variance must be positive, got {var_j}")
    x = np.asarray(x, dtype=complex)
    energy = float(np.vdot(x, x).real)
    return var_j / (1.0 + var_j * energy / sigma2)


def long_form_mse(x, var_j: float, sigma2: float) -> float:
    """``R_JJ - R_JY R_YY^{-1} R_YJ`` through the ``P x P`` solve.

    The phase factor cancels between ``R_JY`` and ``R_YJ``.
    """
    x = np.asarray(x, dtype=complex)
    A = pilot_covariance(x, var_j, sigma2)
    quad = np.vdot(x, solve_hpd(A, x)).real
    return float(var_j - var_j**2 * quad)


def _simulate_block(params, link, x, phi_eff, var_j, seed, label, block, size):
    stream = derive_stream(seed, label + ("trials", block))
    j = draw_cascade_batch(params, stream, size, link)
    y = transmit_batch(x, phi_eff, j, stream, params.sigma2_noise)
    j_hat = lmmse_scalar_form(x, y, phi_eff, var_j, params.sigma2_noise)
    return j, j_hat


def simulate_link(params: SystemParams, link, k: int = 0, trials: int = 100_000, seed: int = 0,
                  x=None, label: tuple = ("mse",), workers: int = 1):
    """Monte Carlo draws of ``(j, j_hat)`` with the pilots held fixed.

    When ``x`` is omitted the pilots are drawn once from the stream
    ``label + ("pilot", k, link)``.  Trial block ``b`` uses
    ``label + (k, link, "trials", b)``.
    """
    link = LinkId.parse(link)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    label = tuple(label)
    if x is None:
        block = make_pilot_block(params, link, k, derive_stream(seed, label + ("pilot", k, int(link))))
        x = block.x
    x = np.asarray(x, dtype=complex)
    phi_eff = effective_phase(link, params.phi1, params.phi2)
    var_j = theoretical_moments(params).var(link)
    block_label = label + (k, int(link))

    def run(b, size):
        return _simulate_block(params, link, x, phi_eff, var_j, seed, block_label, b, size)

    parts = run_blocks(run, block_sizes(trials, TRIAL_BLOCK), workers)
    j = np.concatenate([p[0] for p in parts])
    j_hat = np.concatenate([p[1] for p in parts])
    return j, j_hat


def empirical_mse(params: SystemParams, link, k: int = 0, trials: int = 100_000, seed: int = 0,
                  x=None, label: tuple = ("mse",), workers: int = 1) -> float:
    """Average ``|j - j_hat|^2`` over independent channel and noise draws."""
    j, j_hat = simulate_link(params, link, k, trials, seed, x=x, label=label, workers=workers)
    err = np.abs(j - j_hat) ** 2
    # exactly rounded sum: independent of block layout
    return math.fsum(err.tolist()) / err.size
