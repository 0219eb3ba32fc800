"""Counter-based pseudo-random numbers (splitmix64) with Box-Muller normals.

The generator is deterministic and portable across platforms and processes:
draw i of a stream with key k is ``finalize(k + (i + 1) * GOLDEN)`` where
``finalize`` is the splitmix64 output function, so any draw is reproducible
from (seed, stream, index) alone and streams can be consumed in parallel
without shared state.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(z: int) -> int:
    """splitmix64 output function applied to a 64-bit word."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_key(seed: int, stream: int = 0) -> int:
    """Mix a user seed and a stream index into an independent 64-bit key.

    Used to give every (experiment cell, trial) its own statistically
    independent stream from a single top-level seed.
    """
    return splitmix64((seed & _MASK64) ^ splitmix64((stream + _GOLDEN) & _MASK64))


class CounterRng:
    """Stateless-core counter generator with uniform and normal variates."""

    def __init__(self, seed: int, stream: int = 0):
        self.key = derive_key(seed, stream)
        self._index = 0
        self._spare_normal: float | None = None

    def next_u64(self) -> int:
        """Next raw 64-bit output."""
        self._index += 1
        return splitmix64((self.key + self._index * _GOLDEN) & _MASK64)

    def uniform(self) -> float:
        """Uniform double in (0, 1] (strictly positive, safe for log)."""
        return ((self.next_u64() >> 11) + 1) * 2.0 ** -53

    def normal(self, mean: float = 0.0, sd: float = 1.0) -> float:
        """Gaussian variate via the Box-Muller transform (pairs are cached)."""
        if self._spare_normal is not None:
            z = self._spare_normal
            self._spare_normal = None
        else:
            u1 = self.uniform()
            u2 = self.uniform()
            radius = math.sqrt(-2.0 * math.log(u1))
            theta = 2.0 * math.pi * u2
            z = radius * math.cos(theta)
            self._spare_normal = radius * math.sin(theta)
        return mean + sd * z
