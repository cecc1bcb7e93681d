"""Deterministic, splittable random streams.

Every stream is derived from a 64-bit seed and a label tuple through
:class:`numpy.random.SeedSequence` (the label becomes the ``spawn_key``), and
drives a :class:`numpy.random.PCG64` bit generator.  Derivation is a pure
function of ``(seed, label)``: the order in which streams are created, or the
thread that creates them, has no influence on the numbers drawn.

Normal variates come from numpy's ziggurat sampler
(``Generator.standard_normal``); the method is fixed for a given numpy
release.  Complex Gaussian entries are built as ``sqrt(var/2) * (u + j v)``
with ``u`` and ``v`` from consecutive standard normal draws.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

__all__ = [
    "Seed",
    "RngStream",
    "derive_stream",
    "sample_cscg",
    "sample_cscg_vector",
    "sample_cscg_matrix",
    "sample_qpsk",
    "block_sizes",
    "run_blocks",
]

MAX_SEED = 2**64 - 1

LabelPart = Union[int, str]


class Seed(int):
    """A 64-bit unsigned seed."""

    def __new__(cls, value: int = 0):
        value = int(value)
        if not 0 <= value <= MAX_SEED:
            raise ValueError(f"seed must be in [0, 2**64 - 1], got {value}")
        return super().__new__(cls, value)


def _label_word(part: LabelPart) -> int:
    if isinstance(part, (bool, np.bool_)):
        raise TypeError("boolean stream labels are ambiguous; use int or str")
    if isinstance(part, (int, np.integer)):
        part = int(part)
        if part < 0:
            raise ValueError(f"integer label parts must be nonnegative, got {part}")
        return part
    if isinstance(part, str):
        # stable across interpreter runs, unlike hash()
        digest = hashlib.blake2b(part.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "little")
    raise TypeError(f"unsupported label part {part!r}")


@dataclass
class RngStream:
    """A labelled random stream; owned by one execution context at a time."""

    seed: Seed
    label: tuple
    generator: np.random.Generator = field(repr=False)

    def standard_normal(self, shape) -> np.ndarray:
        return self.generator.standard_normal(shape)


def derive_stream(seed: int, label: Iterable[LabelPart] = ()) -> RngStream:
    """Return the stream identified by ``(seed, label)``.

    ``label`` is a tuple of nonnegative ints and/or strings, e.g.
    ``("mse-energy", point, "trials", block, k, link)``.
    """
    seed = Seed(seed)
    label = tuple(label)
    key = tuple(_label_word(p) for p in label)
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=key)
    return RngStream(seed=seed, label=label, generator=np.random.Generator(np.random.PCG64(ss)))


def sample_cscg(stream: RngStream, shape, variance: float) -> np.ndarray:
    """Array of i.i.d. CN(0, variance) entries with the given shape."""
    if variance < 0:
        raise ValueError(f"variance must be nonnegative, got {variance}")
    shape = (shape,) if np.isscalar(shape) else tuple(shape)
    if any(int(s) < 1 for s in shape):
        raise ValueError(f"all dimensions must be >= 1, got {shape}")
    # real and imaginary parts interleaved along a trailing axis
    z = stream.standard_normal(shape + (2,))
    out = (z[..., 0] + 1j * z[..., 1]) * np.sqrt(variance / 2.0)
    return out


def sample_cscg_vector(stream: RngStream, n: int, variance: float) -> np.ndarray:
    if n < 1:
        raise ValueError(f"vector length must be >= 1, got {n}")
    return sample_cscg(stream, (n,), variance)


def sample_cscg_matrix(stream: RngStream, rows: int, cols: int, variance: float) -> np.ndarray:
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix dimensions must be >= 1, got ({rows}, {cols})")
    return sample_cscg(stream, (rows, cols), variance)


def sample_qpsk(stream: RngStream, n: int, symbol_energy: float) -> np.ndarray:
    """``n`` QPSK symbols drawn uniformly from ``(+-1 +-j) * sqrt(E/2)``."""
    if n < 1:
        raise ValueError(f"pilot length must be >= 1, got {n}")
    if not symbol_energy > 0:
        raise ValueError(f"symbol energy must be positive, got {symbol_energy}")
    bits = stream.generator.integers(0, 2, size=(n, 2))
    signs = 1.0 - 2.0 * bits
    return (signs[:, 0] + 1j * signs[:, 1]) * np.sqrt(symbol_energy / 2.0)


def block_sizes(total: int, block: int) -> list[int]:
    """Split ``total`` items into consecutive blocks of at most ``block``."""
    if total < 1:
        raise ValueError(f"total must be >= 1, got {total}")
    return [min(block, total - start) for start in range(0, total, block)]


def run_blocks(fn, sizes: list[int], workers: int = 1) -> list:
    """Evaluate ``fn(index, size)`` for every block, results in block order.

    ``fn`` must derive its own stream from the block index; the worker
    count then only changes scheduling, never the output.
    """
    if workers <= 1 or len(sizes) == 1:
        return [fn(b, n) for b, n in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(len(sizes)), sizes))
