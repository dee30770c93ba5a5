"""Platform-independent seeded random numbers.

The generator is splitmix64: the state advances by the golden-ratio
increment ``0x9E3779B97F4A7C15`` and every output is the state passed
through the splitmix64 finalizer (see :func:`fmix64`). All arithmetic is
modulo 2**64, so a seed yields the same stream on every platform.

Bounded draws use rejection sampling on the low residue so that
``below(k)`` is exactly uniform on ``[0, k)``.
"""
from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MUL1 = 0xBF58476D1CE4E5B9
MUL2 = 0x94D049BB133111EB


def fmix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MUL1) & MASK64
    z = ((z ^ (z >> 27)) * MUL2) & MASK64
    return z ^ (z >> 31)


def to_state(seed: int) -> int:
    """Map any Python int (negative included) onto a 64-bit state."""
    return seed & MASK64


def mix(seed: int, index: int) -> int:
    """Derived seed for sub-stream ``index``.

    Equal to output number ``index + 1`` of a fresh generator seeded with
    ``seed``; used for per-stratum and per-operator seeds.
    """
    return fmix64(to_state(seed) + GOLDEN * (index + 1))


class SeededRng:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = to_state(seed)

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return fmix64(self.state)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        threshold = ((1 << 64) - bound) % bound
        while True:
            r = self.next_u64()
            if r >= threshold:
                return r % bound
