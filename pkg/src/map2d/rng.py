"""SplitMix64 random source with unbiased ranged draws.

Everything random in the generator goes through :class:`SplitMix64`, so a map
is a pure function of its 64-bit initial state on every platform.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 output finalizer (a bijection on 64-bit integers)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_map_state(master_seed: int, index: int) -> int:
    """Initial RNG state of map ``index`` in a dataset seeded with ``master_seed``.

    Derivation is by index, not by stream position, so any map can be
    regenerated on its own and maps can be produced in any order.
    """
    return mix64((master_seed & MASK64) ^ ((index * GOLDEN_GAMMA) & MASK64))


class SplitMix64:
    """64-bit SplitMix generator.

    ``randint(lo, hi)`` draws uniformly from the inclusive range using
    rejection sampling: raw outputs at or above the largest multiple of the
    span that fits in 2**64 are discarded, the rest are reduced modulo the span.
    """

    __slots__ = ("state",)

    def __init__(self, state: int) -> None:
        self.state = state & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def below(self, k: int) -> int:
        """Uniform integer in ``[0, k)``."""
        if k <= 0:
            raise ValueError(f"span must be positive, got {k}")
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % k

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``, both ends inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.below(hi - lo + 1)

    def __repr__(self) -> str:
        return f"SplitMix64(state=0x{self.state:016x})"
