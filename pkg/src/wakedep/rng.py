"""Deterministic 64-bit random streams shared by every simulation backend.

The simulator needs random streams that can be reproduced bit-for-bit by
both the pure-Python backend and the compiled kernel, so we ship our own
splitmix64 implementation instead of relying on a library generator whose
draw sequence we cannot mirror in C.  splitmix64 is a well-mixed 64-bit
counter generator; its uniform doubles are produced with the standard
53-bit construction ``(x >> 11) * 2**-53``.

Per-replication streams are derived from the master seed with a
counter-based split: replication ``i`` of a run seeds its stream with
``derive_seed(master, offset + i)``.  Splitting by counter keeps
replications reproducible independently of how they are scheduled.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_SPLIT_MULT = 0xD2B74407B1CE6E93
_INV_2_53 = 2.0**-53


def mix64(z: int) -> int:
    """splitmix64 finalizer: bijective avalanche mix of a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    """Counter-based substream seed for replication ``index``.

    Distinct indices give decorrelated stream states; the construction is
    fixed so runs can be split across processes and re-pooled exactly.
    """
    if index < 0:
        raise ValueError(f"substream index must be >= 0, got {index}")
    return mix64((master + (index + 1) * _SPLIT_MULT) & MASK64)


class RandomStream:
    """splitmix64 stream: state advances by a golden-ratio increment."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & MASK64
        return mix64(self.state)

    def next_double(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _INV_2_53

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n) via the multiply-shift reduction.

        The reduction has bias O(n / 2**64), negligible for the small
        ranges (site and phase choices) it is used for.
        """
        if n <= 0:
            raise ValueError(f"range must be positive, got {n}")
        return (self.next_u64() * n) >> 64

    def bernoulli(self, p: float) -> bool:
        """True with probability ``p``; always consumes one draw."""
        return self.next_double() < p
