"""Cascaded channel estimation for double-IRS assisted OFDM links.

LMMSE estimation of the three cascaded scalar channels, their closed-form
MSE, and a Bayesian CRLB whose prior term is estimated numerically from a
Rayleigh fit to cascade samples.
"""

__version__ = "0.1.0"

from .rand_core import Seed, RngStream, derive_stream, sample_cscg, sample_cscg_vector, sample_cscg_matrix, sample_qpsk
from .numerics import NotHermitianPositiveDefiniteError, inner_h, inner_t, push_through_residual, solve_hpd
from .channel_model import (
    CascadeTriple,
    ChannelRealization,
    SystemParams,
    cascade,
    cir_to_cfr,
    draw_channels,
    sample_cascades,
    theoretical_moments,
)
from .signal import LinkId, PilotBlock, ReceivedBlock, effective_phase, irs_schedule, make_pilot_block, transmit
from .estimation import (
    LmmseEstimate,
    MsePoint,
    closed_form_mse,
    empirical_mse,
    lmmse_matrix_form,
    lmmse_scalar_form,
)
from .crlb import (
    DegenerateSampleError,
    FisherPrior,
    RayleighFit,
    bayesian_crlb,
    classical_crlb,
    empirical_cf,
    fisher_prior,
    joint_cf,
    ks_statistic,
    rayleigh_mle,
    rayleigh_pdf,
)
from .experiments import ConfigError, ExperimentConfig, run_all, run_hist_fit, run_mse_vs_energy, run_mse_vs_length
