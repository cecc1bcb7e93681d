"""Per-subcarrier channel draws for the double-IRS link and their cascades.

Link objects, with the variance attached to each entry:

=========  ==========  ==================  ==============
object     shape       hop                 entry variance
=========  ==========  ==================  ==============
``h_r1``   ``(N1,)``   MU -> IRS-1         ``sigma1_2``
``h_t1``   ``(N1,)``   IRS-1 -> BS         ``sigma2_2``
``h_r2``   ``(N2,)``   MU -> IRS-2         ``sigma3_2``
``h_t2``   ``(N2,)``   IRS-2 -> BS         ``sigma4_2``
``g``      ``(N2,N1)`` IRS-1 -> IRS-2      ``sigma5_2``
=========  ==========  ==================  ==============

The cascades are ``j1 = h_t1^T h_r1``, ``j2 = h_t2^T h_r2`` and
``j3 = h_t2^T g h_r1`` (plain transposes, no conjugation).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .rand_core import RngStream, block_sizes, derive_stream, run_blocks, sample_cscg
from .numerics import inner_t

__all__ = [
    "DEFAULT_SIGMA_PRODUCT",
    "SystemParams",
    "ChannelRealization",
    "CascadeTriple",
    "CascadeMoments",
    "draw_channels",
    "draw_cascade_batch",
    "sample_cascades",
    "cascade",
    "theoretical_moments",
    "cir_to_cfr",
]

# sigma1^2 * sigma2^2 such that |j1| at N1 = 60 has Rayleigh scale ~25.11
DEFAULT_SIGMA_PRODUCT = 21.0
_SIGMA_DEFAULT = math.sqrt(DEFAULT_SIGMA_PRODUCT)

UNIT_MODULUS_TOL = 1e-12
SAMPLE_BLOCK = 2048


@dataclass(frozen=True)
class SystemParams:
    """Scalar model parameters.

    The reflection coefficients ``phi1`` and ``phi2`` are unit-modulus (all
    elements of one surface share a phase, amplitude is one).  ``P``, ``Q``
    and ``R`` are the pilot lengths of links 1, 2 and 3.
    """

    N: int = 64
    N1: int = 60
    N2: int = 30
    L: int = 8
    sigma2_noise: float = 1.0
    sigma1_2: float = _SIGMA_DEFAULT
    sigma2_2: float = _SIGMA_DEFAULT
    sigma3_2: float = _SIGMA_DEFAULT
    sigma4_2: float = _SIGMA_DEFAULT
    sigma5_2: float = 1.0
    phi1: complex = field(default=cmath.exp(1j * math.pi / 4))
    phi2: complex = field(default=cmath.exp(1j * math.pi / 3))
    P: int = 4
    Q: int = 4
    R: int = 4
    pilot_symbol_energy: float = 1.0

    def __post_init__(self):
        for name in ("N", "N1", "N2", "L", "P", "Q", "R"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {value!r}")
        if self.L > self.N:
            raise ValueError(f"L must not exceed N, got L={self.L}, N={self.N}")
        for name in ("sigma2_noise", "sigma1_2", "sigma2_2", "sigma3_2", "sigma4_2", "sigma5_2"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be a finite nonnegative real, got {value!r}")
        for name in ("phi1", "phi2"):
            value = complex(getattr(self, name))
            if abs(abs(value) - 1.0) > UNIT_MODULUS_TOL:
                raise ValueError(f"{name} must have unit modulus, got |{name}|={abs(value)!r}")
        if not self.pilot_symbol_energy > 0:
            raise ValueError(f"pilot_symbol_energy must be positive, got {self.pilot_symbol_energy!r}")

    def pilot_length(self, link: int) -> int:
        return {1: self.P, 2: self.Q, 3: self.R}[int(link)]

    def with_pilot_length(self, link: int, length: int) -> "SystemParams":
        return replace(self, **{{1: "P", 2: "Q", 3: "R"}[int(link)]: int(length)})

    def to_dict(self) -> dict:
        """JSON-friendly form; reflection coefficients become phases in radians."""
        d = asdict(self)
        d["theta1"] = cmath.phase(d.pop("phi1"))
        d["theta2"] = cmath.phase(d.pop("phi2"))
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SystemParams":
        d = dict(d)
        d["phi1"] = cmath.exp(1j * float(d.pop("theta1")))
        d["phi2"] = cmath.exp(1j * float(d.pop("theta2")))
        return cls(**d)


@dataclass(frozen=True)
class CascadeTriple:
    j1: complex
    j2: complex
    j3: complex

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.j1, self.j2, self.j3)

    def __getitem__(self, link: int) -> complex:
        return self.as_tuple()[int(link) - 1]


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    h_r1: np.ndarray
    h_t1: np.ndarray
    h_r2: np.ndarray
    h_t2: np.ndarray
    g: np.ndarray
    k: int = 0

    def __post_init__(self):
        for name in ("h_r1", "h_t1", "h_r2", "h_t2", "g"):
            arr = np.array(getattr(self, name), dtype=complex)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class CascadeMoments:
    mean: float
    var1: float
    var2: float
    var3: float

    def var(self, link: int) -> float:
        return (self.var1, self.var2, self.var3)[int(link) - 1]


def draw_channels(params: SystemParams, stream: RngStream, k: int = 0) -> ChannelRealization:
    """One realization of all five link objects on subcarrier ``k``.

    The caller supplies a stream derived for this subcarrier; draws are
    taken in the fixed order ``h_r1, h_t1, h_r2, h_t2, g``.
    """
    p = params
    return ChannelRealization(
        h_r1=sample_cscg(stream, (p.N1,), p.sigma1_2),
        h_t1=sample_cscg(stream, (p.N1,), p.sigma2_2),
        h_r2=sample_cscg(stream, (p.N2,), p.sigma3_2),
        h_t2=sample_cscg(stream, (p.N2,), p.sigma4_2),
        g=sample_cscg(stream, (p.N2, p.N1), p.sigma5_2),
        k=k,
    )


def draw_cascade_batch(params: SystemParams, stream: RngStream, size: int, link: int) -> np.ndarray:
    """``size`` independent draws of the cascade of one link.

    Only the objects the link passes through are sampled, as
    ``(size, n)`` blocks in the order they appear in the cascade.
    """
    p = params
    link = int(link)
    if link == 1:
        h_r1 = sample_cscg(stream, (size, p.N1), p.sigma1_2)
        h_t1 = sample_cscg(stream, (size, p.N1), p.sigma2_2)
        return np.einsum("bi,bi->b", h_t1, h_r1)
    if link == 2:
        h_r2 = sample_cscg(stream, (size, p.N2), p.sigma3_2)
        h_t2 = sample_cscg(stream, (size, p.N2), p.sigma4_2)
        return np.einsum("bi,bi->b", h_t2, h_r2)
    if link == 3:
        h_r1 = sample_cscg(stream, (size, p.N1), p.sigma1_2)
        g = sample_cscg(stream, (size, p.N2, p.N1), p.sigma5_2)
        h_t2 = sample_cscg(stream, (size, p.N2), p.sigma4_2)
        g_h = np.matmul(g, h_r1[:, :, None])[:, :, 0]
        return np.einsum("bi,bi->b", h_t2, g_h)
    raise ValueError(f"link must be 1, 2, or 3, got {link}")


def sample_cascades(params: SystemParams, link, n: int, seed: int = 0, label: tuple = ("samples",),
                    k: int = 0, workers: int = 1) -> np.ndarray:
    """``n`` i.i.d. draws of one cascade, generated in independently seeded blocks.

    Block ``b`` is drawn from ``label + (k, link, "block", b)``, so the
    output is fixed by ``(seed, label)`` whatever the worker count.
    """
    link = int(link)
    base = tuple(label) + (k, link)

    def run(b, size):
        return draw_cascade_batch(params, derive_stream(seed, base + ("block", b)), size, link)

    return np.concatenate(run_blocks(run, block_sizes(n, SAMPLE_BLOCK), workers))


def cascade(ch: ChannelRealization) -> CascadeTriple:
    n1, n2 = ch.h_r1.shape[0], ch.h_r2.shape[0]
    if ch.h_t1.shape != (n1,) or ch.h_t2.shape != (n2,) or ch.g.shape != (n2, n1):
        raise ValueError(
            "inconsistent dimensions: "
            f"h_r1 {ch.h_r1.shape}, h_t1 {ch.h_t1.shape}, h_r2 {ch.h_r2.shape}, "
            f"h_t2 {ch.h_t2.shape}, g {ch.g.shape}"
        )
    return CascadeTriple(
        j1=inner_t(ch.h_t1, ch.h_r1),
        j2=inner_t(ch.h_t2, ch.h_r2),
        j3=inner_t(ch.h_t2, ch.g @ ch.h_r1),
    )


def theoretical_moments(params: SystemParams) -> CascadeMoments:
    """Mean and variance of the three cascades (all are zero-mean)."""
    p = params
    return CascadeMoments(
        mean=0.0,
        var1=p.N1 * p.sigma1_2 * p.sigma2_2,
        var2=p.N2 * p.sigma3_2 * p.sigma4_2,
        var3=p.N2 * p.N1 * p.sigma1_2 * p.sigma4_2 * p.sigma5_2,
    )


def cir_to_cfr(taps, N: int) -> np.ndarray:
    """Zero-pad ``L`` channel taps to ``N`` and take the unnormalized DFT."""
    taps = np.asarray(taps, dtype=complex)
    if taps.ndim != 1 or taps.size == 0:
        raise ValueError("taps must be a nonempty 1-D vector")
    if taps.size > N:
        raise ValueError(f"tap count L={taps.size} exceeds subcarrier count N={N}")
    return np.fft.fft(taps, n=N)
