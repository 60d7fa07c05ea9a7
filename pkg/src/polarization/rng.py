"""splitmix64 stream used for every reproducible random instance.

The generator is the standard one (Steele, Lea & Flood): a Weyl sequence with
increment 0x9E3779B97F4A7C15 followed by the usual xor-shift-multiply mix.
"""
from __future__ import annotations

from gmpy2 import mpq

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Seed of the independent stream number ``index`` under a master seed."""
    return mix64((seed + (index + 1) * GOLDEN) & MASK64)


class SplitMix64:
    def __init__(self, seed: int = 0):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased (rejection sampling)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def unit(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def rational(self, bound: int = 9):
        """Random rational p/q with |p| <= bound and 1 <= q <= bound."""
        return mpq(self.integer(-bound, bound), self.integer(1, bound))

    def scalar(self, field, bound: int = 9):
        if field.characteristic == 0:
            return self.rational(bound)
        return field(self.below(field.characteristic))
