"""Seeded random streams.

Every stochastic routine in the package draws from a Philox4x64 counter-based
generator keyed by ``(seed, stream)``.  Reports carry the seed, and sweep
points derive their stream id from the parameter tuple, so a run is
bit-reproducible for a fixed numpy version regardless of execution order or
worker count.
"""

import numpy as np


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Return the Philox generator for (seed, stream)."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))


def stream_id(*parts) -> int:
    """Stable 64-bit stream id for a tuple of small ints (used by sweep points).

    Mixes the parts with the FNV-1a constants; collisions across a sweep's
    parameter grid would need identical mixed tuples.
    """
    h = np.uint64(0xCBF29CE484222325)
    for p in parts:
        h = np.uint64(h ^ np.uint64(int(p) & 0xFFFFFFFFFFFFFFFF))
        h = np.uint64((int(h) * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF)
    return int(h)


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """I.i.d. standard complex Gaussian array (variance 1 per complex entry)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
