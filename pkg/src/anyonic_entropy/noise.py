"""I.i.d. sigma-x / sigma-z noise with reproducible, splittable randomness.

Draws are organised in fixed-size blocks. Block ``b`` of stream
``(seed, stream_id)`` is generated by a Philox (counter-based) bit generator
keyed from ``SeedSequence(seed, spawn_key=(stream_id, b))``, so any block can
be regenerated independently of the others. Work split across processes
therefore reproduces the serial result exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .planar import ErrorPattern, PlanarLayout

#: Error patterns per RNG block. Fixed: changing it changes every sample.
BLOCK_SIZE = 4096


@dataclass(frozen=True)
class NoiseModel:
    p_x: float
    p_z: float

    def __post_init__(self):
        for name in ("p_x", "p_z"):
            value = float(getattr(self, name))
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value!r} is not a probability")
            object.__setattr__(self, name, value)

    @classmethod
    def symmetric(cls, p: float) -> "NoiseModel":
        return cls(p, p)


@dataclass(frozen=True)
class SeededStream:
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if int(self.stream_id) < 0:
            raise ValueError("stream_id must be non-negative")

    def block_generator(self, block: int) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id), int(block)))
        return np.random.Generator(np.random.Philox(ss))


def sample_block(
    layout: PlanarLayout, model: NoiseModel, stream: SeededStream, block: int
) -> tuple[np.ndarray, np.ndarray]:
    """All ``BLOCK_SIZE`` patterns of one block as ``(x_bits, z_bits)`` arrays."""
    u = stream.block_generator(block).random((BLOCK_SIZE, 2, layout.qubit_count))
    x = (u[:, 0, :] < model.p_x).astype(np.uint8)
    z = (u[:, 1, :] < model.p_z).astype(np.uint8)
    return x, z


def iter_blocks(
    layout: PlanarLayout,
    model: NoiseModel,
    stream: SeededStream,
    n_samples: int,
    first_block: int = 0,
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield the first ``n_samples`` patterns block by block (last block truncated)."""
    remaining = n_samples
    block = first_block
    while remaining > 0:
        x, z = sample_block(layout, model, stream, block)
        take = min(remaining, BLOCK_SIZE)
        yield x[:take], z[:take]
        remaining -= take
        block += 1


def sample_error(
    layout: PlanarLayout, model: NoiseModel, stream: SeededStream, index: int = 0
) -> ErrorPattern:
    """The ``index``-th error pattern of the stream."""
    if index < 0:
        raise ValueError("draw index must be non-negative")
    block, offset = divmod(int(index), BLOCK_SIZE)
    x, z = sample_block(layout, model, stream, block)
    return ErrorPattern.from_arrays(x[offset], z[offset])
