"""Deterministic 64-bit PRNG used by walks, training and evaluation.

SplitMix64 is used instead of the stdlib / numpy generators because the
compiled training kernel and the pure-Python fallback must consume an
identical random stream: the same integer recurrence is implemented on
both sides, so results are bit-for-bit reproducible across backends,
platforms and library versions.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(*values: int) -> int:
    """Hash a tuple of integers into one well-mixed 64-bit seed."""
    acc = 0x243F6A8885A308D3  # pi fraction, arbitrary non-zero start
    for v in values:
        acc = (acc + (v & _MASK) + _GAMMA) & _MASK
        acc ^= acc >> 30
        acc = (acc * _MIX1) & _MASK
        acc ^= acc >> 27
        acc = (acc * _MIX2) & _MASK
        acc ^= acc >> 31
    return acc


def splitmix64_stream(seed: int, count: int):
    """Vectorized equivalent of ``count`` sequential next_u64() calls.

    The i-th output of SplitMix64 depends only on seed + i*gamma, so the
    whole stream can be produced with wrapping uint64 numpy arithmetic.
    Used to initialize embedding matrices quickly while staying on the
    exact same stream the scalar generator would produce.
    """
    import numpy as np

    idx = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & _MASK) + idx * np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z = z ^ (z >> np.uint64(31))
    return z


class SplitMix64:
    """Sequential SplitMix64 stream over a 64-bit state."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def randbelow(self, n: int) -> int:
        """Integer in [0, n).  Modulo bias is negligible for n << 2**64."""
        return self.next_u64() % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]
