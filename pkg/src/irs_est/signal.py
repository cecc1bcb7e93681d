"""Three-block pilot scheme and the per-subcarrier received-signal model.

Each channel-estimation block targets one cascade by switching surfaces:

* link 1 (MU -> IRS-1 -> BS): IRS-1 on, IRS-2 off
* link 2 (MU -> IRS-2 -> BS): IRS-1 off, IRS-2 on
* link 3 (MU -> IRS-1 -> IRS-2 -> BS): both on

Within a block the received pilots are ``y = phi_eff * x * j + v`` with
``v ~ CN(0, sigma2 I)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .rand_core import RngStream, sample_cscg, sample_qpsk

__all__ = [
    "LinkId",
    "PilotBlock",
    "ReceivedBlock",
    "irs_schedule",
    "effective_phase",
    "make_pilot_block",
    "transmit",
    "transmit_batch",
]


class LinkId(enum.IntEnum):
    IRS1 = 1
    IRS2 = 2
    DOUBLE = 3

    @classmethod
    def parse(cls, value) -> "LinkId":
        try:
            return cls(int(value))
        except (ValueError, TypeError):
            raise ValueError(f"link must be 1, 2, or 3, got {value!r}") from None


_SCHEDULE = {
    LinkId.IRS1: (True, False),
    LinkId.IRS2: (False, True),
    LinkId.DOUBLE: (True, True),
}


@dataclass(frozen=True, eq=False)
class PilotBlock:
    link: LinkId
    k: int
    x: np.ndarray
    phi_eff: complex

    def __post_init__(self):
        x = np.array(self.x, dtype=complex)
        if x.ndim != 1 or x.size == 0:
            raise ValueError(f"pilot vector must be nonempty 1-D, got shape {x.shape}")
        if abs(abs(self.phi_eff) - 1.0) > 1e-12:
            raise ValueError(f"phi_eff must have unit modulus, got {abs(self.phi_eff)!r}")
        x.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "link", LinkId.parse(self.link))

    @property
    def energy(self) -> float:
        """Total block energy ``x^H x``."""
        return float(np.vdot(self.x, self.x).real)


@dataclass(frozen=True, eq=False)
class ReceivedBlock:
    link: LinkId
    k: int
    y: np.ndarray


def irs_schedule(link) -> tuple[bool, bool]:
    """``(irs1_on, irs2_on)`` during the estimation block of ``link``."""
    return _SCHEDULE[LinkId.parse(link)]


def effective_phase(link, phi1: complex, phi2: complex) -> complex:
    """Phase applied to the cascade: the product over the surfaces switched on."""
    irs1_on, irs2_on = irs_schedule(link)
    phase = complex(1.0)
    if irs1_on:
        phase *= phi1
    if irs2_on:
        phase *= phi2
    return phase


def make_pilot_block(params, link, k: int, stream: RngStream, total_energy: float | None = None,
                     length: int | None = None) -> PilotBlock:
    """QPSK pilots for ``link`` on subcarrier ``k``.

    By default the block has the link's configured length and
    ``pilot_symbol_energy`` per symbol.  Passing ``total_energy`` fixes
    ``x^H x`` instead, spread evenly across the symbols.
    """
    link = LinkId.parse(link)
    n = params.pilot_length(link) if length is None else int(length)
    es = params.pilot_symbol_energy if total_energy is None else total_energy / n
    x = sample_qpsk(stream, n, es)
    return PilotBlock(link=link, k=k, x=x, phi_eff=effective_phase(link, params.phi1, params.phi2))


def transmit_batch(x, phi_eff: complex, j, stream: RngStream, sigma2_noise: float) -> np.ndarray:
    """Received blocks for a vector of cascade values, shape ``(len(j), P)``."""
    x = np.asarray(x, dtype=complex)
    j = np.atleast_1d(np.asarray(j, dtype=complex))
    clean = phi_eff * j[:, None] * x[None, :]
    if sigma2_noise == 0:
        return clean
    return clean + sample_cscg(stream, clean.shape, sigma2_noise)


def transmit(block: PilotBlock, j: complex, stream: RngStream, sigma2_noise: float) -> ReceivedBlock:
    y = transmit_batch(block.x, block.phi_eff, [j], stream, sigma2_noise)[0]
    return ReceivedBlock(link=block.link, k=block.k, y=y)
