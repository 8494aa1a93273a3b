"""Portable seeded random numbers.

All randomness in the library (dataset splits, the ``learn`` swap loop) goes
through :class:`SplitMix64`, so results are reproducible across platforms and
numpy versions. SplitMix64 is counter based: the i-th 64-bit output is

    mix(seed + i * 0x9E3779B97F4A7C15)        (i = 1, 2, ...)

with Steele, Lea and Flood's finaliser ``mix``. Because each output depends
only on its counter the stream can be generated in vectorised blocks.
Uniform doubles take the top 53 bits; Gaussian values use Box-Muller.
"""

from __future__ import annotations

import numpy as np

from pyopf.exceptions import OPFError

GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Counter-based SplitMix64 generator.

    Args:
        seed: Any Python integer; reduced modulo 2**64.
    """

    def __init__(self, seed: int = 0):
        self.seed = int(seed) & _MASK64
        self.counter = 0

    def next_uint64(self, n: int) -> np.ndarray:
        """Returns the next ``n`` raw 64-bit outputs."""
        idx = np.arange(self.counter + 1, self.counter + n + 1, dtype=np.uint64)
        self.counter += n
        with np.errstate(over="ignore"):
            return _mix(np.uint64(self.seed) + idx * GOLDEN_GAMMA)

    def random(self, n: int) -> np.ndarray:
        """Uniform doubles in [0, 1) with 53 random bits each."""
        return (self.next_uint64(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def uniform(self, low: float, high: float, n: int) -> np.ndarray:
        out = low + (high - low) * self.random(n)
        # low + (high - low) * u can round up to high
        np.minimum(out, np.nextafter(high, low), out=out)
        return out

    def gaussian(self, mean: float, variance: float, n: int) -> np.ndarray:
        pairs = (n + 1) // 2
        u = self.random(2 * pairs)
        u1 = 1.0 - u[0::2]  # (0, 1], keeps log finite
        u2 = u[1::2]
        r = np.sqrt(-2.0 * np.log(u1))
        z = np.empty(2 * pairs)
        z[0::2] = r * np.cos(2.0 * np.pi * u2)
        z[1::2] = r * np.sin(2.0 * np.pi * u2)
        return mean + np.sqrt(variance) * z[:n]

    def integers(self, high: int, n: int) -> np.ndarray:
        """Integers uniform in ``[0, high)``; ``high`` must be below 2**53."""
        return np.floor(self.random(n) * high).astype(np.int64)

    def permutation(self, n: int) -> np.ndarray:
        """Fisher-Yates shuffle of ``0..n-1``."""
        perm = np.arange(n, dtype=np.int64)
        if n < 2:
            return perm
        u = self.random(n - 1)
        for step, i in enumerate(range(n - 1, 0, -1)):
            j = int(u[step] * (i + 1))
            perm[i], perm[j] = perm[j], perm[i]
        return perm


def rng_uniform(low: float, high: float, n: int, seed: int) -> np.ndarray:
    """Draws ``n`` uniform values in ``[low, high)``.

    Raises:
        OPFError: If ``low >= high`` or ``n < 1``.
    """
    if not low < high:
        raise OPFError(f"low ({low}) must be smaller than high ({high})")
    if n < 1:
        raise OPFError("n must be at least 1")
    return SplitMix64(seed).uniform(low, high, n)


def rng_gaussian(mean: float, variance: float, n: int, seed: int) -> np.ndarray:
    """Draws ``n`` normal values with the given mean and variance."""
    if variance < 0:
        raise OPFError(f"variance must be non-negative, got {variance}")
    if n < 1:
        raise OPFError("n must be at least 1")
    return SplitMix64(seed).gaussian(mean, variance, n)
