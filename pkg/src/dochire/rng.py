"""Deterministic random primitives pinned for cross-platform replay.

Reruns must be byte-identical across interpreter versions and platforms, so
nothing here delegates to `random` or numpy: the generator is SplitMix64
(Steele, Lea, Flood's 64-bit mixer), bounded ints use rejection sampling,
and shuffling is plain Fisher-Yates.
"""

from __future__ import annotations

from typing import MutableSequence

__all__ = ["SplitMix64", "derive_seed"]

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """SplitMix64 counter PRNG; seed fully determines the stream."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randbelow(self, bound: int) -> int:
        """Uniform int in [0, bound), unbiased via rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % bound

    def uniform_int(self, lo: int, hi: int) -> int:
        """Uniform int in [lo, hi] inclusive."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.randbelow(hi - lo + 1)

    def shuffle(self, items: MutableSequence) -> None:
        """In-place Fisher-Yates."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]


def derive_seed(seed: int, stream: int) -> int:
    """Independent subseed for a named stream of a master seed."""
    return SplitMix64(((seed & _MASK) * 0x100000001B3 + stream) & _MASK).next_u64()
