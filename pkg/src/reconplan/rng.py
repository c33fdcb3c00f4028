"""Counter-based pseudo-random streams with value semantics.

Draw k of a stream depends only on (seed, k), so clones replay identical
sequences and streams can be advanced, copied, and compared cheaply. The
generator is a splitmix64 finalizer over a Weyl sequence: pure 64-bit
integer arithmetic, hence bit-identical on every platform. Not suitable
for cryptography.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import NormalDist

_MASK64 = (1 << 64) - 1
_WEYL = 0x9E3779B97F4A7C15
_SPLIT_SALT = 0xD2B74407B1CE6E93

_NORMAL = NormalDist()


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass
class SeededStream:
    """A reproducible stream of random draws identified by (seed, position)."""

    seed: int
    pos: int = 0

    def __post_init__(self):
        self.seed = self.seed & _MASK64
        if self.pos < 0:
            raise ValueError("stream position must be non-negative")

    def _next_bits(self) -> int:
        v = _mix((self.seed + (self.pos + 1) * _WEYL) & _MASK64)
        self.pos += 1
        return v

    def uniform(self) -> float:
        """One draw, uniform on [0, 1) with 53-bit resolution."""
        return (self._next_bits() >> 11) * 2.0**-53

    def gauss(self) -> float:
        """One draw, standard normal via inverse CDF (never hits the tails' poles)."""
        u = ((self._next_bits() >> 11) + 0.5) * 2.0**-53
        return _NORMAL.inv_cdf(u)

    def randint(self, n: int) -> int:
        """One draw, uniform integer in [0, n). Intended for small n."""
        if n <= 0:
            raise ValueError("n must be positive")
        return min(int(self.uniform() * n), n - 1)

    def clone(self) -> "SeededStream":
        """Independent copy that replays the same remaining sequence."""
        return SeededStream(self.seed, self.pos)

    def split(self, key: int) -> "SeededStream":
        """Derive a decorrelated child stream; consumes no draws from self."""
        child = _mix((self.seed ^ ((key + 1) * _SPLIT_SALT & _MASK64)) & _MASK64)
        return SeededStream(child, 0)
