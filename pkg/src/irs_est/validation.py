"""Named invariant checks run by ``irs-est validate``.

Each check measures one quantity and compares it with a fixed threshold.
Failures are report content, not exceptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .channel_model import SystemParams, sample_cascades, theoretical_moments
from .crlb import bayesian_crlb, classical_crlb, empirical_cf, fisher_prior, joint_cf, rayleigh_mle
from .estimation import closed_form_mse, empirical_mse, lmmse_matrix_form, lmmse_scalar_form, long_form_mse, simulate_link
from .numerics import push_through_residual
from .rand_core import derive_stream, sample_cscg, sample_qpsk
from .signal import make_pilot_block

__all__ = ["CheckResult", "random_instances", "run_checks", "format_report"]

N_MC = 100_000


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    threshold: float
    passed: bool
    relation: str = "<="

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: measured={self.measured:.6g} {self.relation} threshold={self.threshold:.6g}"


def _le(name, measured, threshold):
    return CheckResult(name, float(measured), float(threshold), bool(measured <= threshold), "<=")


def _lt(name, measured, threshold):
    return CheckResult(name, float(measured), float(threshold), bool(measured < threshold), "<")


def random_instances(seed: int, count: int = 100, max_length: int = 16):
    """Random ``(x, var_j, sigma2, y, phi)`` tuples for the algebraic identities.

    Pilots are unit-energy QPSK with lengths cycling over ``1..max_length``;
    ``var_j`` and ``sigma2`` are log-uniform on ``[0.1, 10]``.  The received
    covariance then has condition number at most ``1 + 100 * max_length``,
    which bounds the rounding error of the ``P x P`` route (about
    ``2e-16 * cond``).
    """
    out = []
    for i in range(count):
        stream = derive_stream(seed, ("instances", i))
        g = stream.generator
        P = 1 + i % max_length
        x = sample_qpsk(stream, P, 1.0)
        var_j = float(10 ** g.uniform(-1, 1))
        sigma2 = float(10 ** g.uniform(-1, 1))
        y = sample_cscg(stream, P, var_j * P + sigma2)
        phi = complex(np.exp(1j * g.uniform(-np.pi, np.pi)))
        out.append((x, var_j, sigma2, y, phi))
    return out


def _moment_checks(seed):
    results = []
    for n in (1, 5, 60):
        cases = {
            1: replace(SystemParams(), N1=n, sigma1_2=1.0, sigma2_2=1.0),
            2: replace(SystemParams(), N2=n, sigma3_2=1.0, sigma4_2=1.0),
            3: replace(SystemParams(), N1=n, N2=5, sigma1_2=1.0, sigma4_2=1.0, sigma5_2=1.0),
        }
        for link, p in cases.items():
            z = sample_cascades(p, link, N_MC, seed, ("validate-moments", n))
            var = theoretical_moments(p).var(link)
            results.append(_lt(f"moment_mean_J{link}_N{n}", abs(z.mean()), 3 * math.sqrt(var / N_MC)))
            results.append(_le(f"moment_var_J{link}_N{n}", abs(np.var(z) / var - 1), 0.02))
    return results


def _algebra_checks(seed):
    inst = random_instances(seed)
    residual = max(push_through_residual(x, v, s) for x, v, s, _, _ in inst)
    est_gap = max(
        abs(lmmse_matrix_form(x, y, phi, v, s) - lmmse_scalar_form(x, y, phi, v, s))
        / max(abs(lmmse_scalar_form(x, y, phi, v, s)), 1e-300)
        for x, v, s, y, phi in inst
    )
    mse_gap = max(abs(long_form_mse(x, v, s) / closed_form_mse(x, v, s) - 1) for x, v, s, _, _ in inst)
    return [
        _le("push_through_residual_max", residual, 1e-12),
        _le("lmmse_matrix_vs_scalar_rel", est_gap, 1e-10),
        _le("mse_long_vs_closed_rel", mse_gap, 1e-12),
    ]


def _rayleigh_checks(seed):
    b = {}
    ks = {}
    for n1 in (5, 60):
        p = replace(SystemParams(), N1=n1)
        fit = rayleigh_mle(sample_cascades(p, 1, N_MC, seed, ("samples", p.N1, p.N2)))
        b[n1], ks[n1] = fit.b_hat, fit.ks_stat
    return [
        _le("rayleigh_b_hat_N60_rel_to_25.1108", abs(b[60] / 25.1108 - 1), 0.02),
        _le("rayleigh_b_hat_N5_rel_to_7.243", abs(b[5] / 7.243 - 1), 0.02),
        _le("rayleigh_ratio_rel_to_sqrt12", abs(b[60] / b[5] / math.sqrt(12) - 1), 0.02),
        _lt("ks_N60_below_ks_N5", ks[60], ks[5]),
    ]


def _cf_checks(seed):
    results = []
    axis = np.linspace(-2, 2, 9)
    W1, W2 = np.meshgrid(axis, axis, indexing="ij")
    for s in (1, 5, 60):
        stream = derive_stream(seed, ("validate-cf", s))
        a = sample_cscg(stream, (N_MC, s), 1.0)
        bvec = sample_cscg(stream, (N_MC, s), 1.0)
        d = np.einsum("bi,bi->b", a.conj(), bvec)
        emp = empirical_cf(d, W1, W2)
        results.append(_lt(f"cf_sup_gap_S{s}", np.max(np.abs(emp - joint_cf(W1, W2, 1.0, 1.0, s))), 0.01))
        results.append(_lt(f"cf_imag_sup_S{s}", np.max(np.abs(emp.imag)), 0.01))
    return results


def _mse_checks(seed):
    p = SystemParams()
    results = []
    for link in (1, 2, 3):
        ratio = empirical_mse(p, link, 0, N_MC, seed, label=("validate-mse",)) / closed_form_mse(
            make_pilot_block(p, link, 0, derive_stream(seed, ("validate-mse", "pilot", 0, link))).x,
            theoretical_moments(p).var(link), p.sigma2_noise)
        results.append(_le(f"empirical_vs_closed_mse_link{link}", abs(ratio - 1), 0.03))
    j, j_hat = simulate_link(p, 1, 0, N_MC, seed, label=("validate-orth",))
    e = j - j_hat
    orth = abs(np.mean(e * j_hat.conj()))
    sd = np.std(e * j_hat.conj())
    results.append(_lt("orthogonality_link1", orth, 3 * sd / math.sqrt(N_MC)))
    x = sample_qpsk(derive_stream(seed, ("validate-bounds",)), 4, 1.0)
    z = sample_cascades(p, 1, N_MC, seed, ("samples", p.N1, p.N2))
    fp = fisher_prior(z, rayleigh_mle(z).b_hat).value
    gap = max(bayesian_crlb(x * math.sqrt(en / 4), p.sigma2_noise, fp)
              - classical_crlb(x * math.sqrt(en / 4), p.sigma2_noise)
              for en in (1, 2, 4, 8, 16))
    results.append(_le("bayesian_minus_classical_crlb", gap, 0.0))
    return results


def run_checks(seed: int = 0) -> list[CheckResult]:
    results = []
    for group in (_moment_checks, _algebra_checks, _rayleigh_checks, _cf_checks, _mse_checks):
        results.extend(group(seed))
    return results


def format_report(results) -> str:
    passed = sum(r.passed for r in results)
    lines = [r.line() for r in results]
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
