"""Cochran minimum sample size with finite-population correction."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from ..errors import DomainError
from .special import inverse_normal_cdf


@dataclass(frozen=True)
class CochranParams:
    N: int
    confidence: float = 0.95
    margin: float = 0.05
    p: float = 0.5

    def __post_init__(self):
        if self.N < 1:
            raise DomainError(f"frame size must be >= 1, got {self.N}")
        if not 0.0 < self.confidence < 1.0:
            raise DomainError(f"confidence must be in (0, 1), got {self.confidence}")
        if not 0.0 < self.margin < 1.0:
            raise DomainError(f"margin of error must be in (0, 1), got {self.margin}")
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"expected proportion must be in (0, 1), got {self.p}")

    @cached_property
    def z(self) -> float:
        return inverse_normal_cdf((1.0 + self.confidence) / 2.0)

    @cached_property
    def n0(self) -> float:
        """Infinite-population sample size."""
        return self.z ** 2 * self.p * (1.0 - self.p) / self.margin ** 2

    @cached_property
    def n_exact(self) -> float:
        """Size after the finite-population correction, before rounding."""
        return self.n0 / (1.0 + (self.n0 - 1.0) / self.N)


def cochran_min_sample(params: CochranParams, ceiling: bool = False) -> int:
    """Minimum sample size for ``params``.

    Rounds to the nearest integer (halves away from zero) by default;
    ``ceiling=True`` selects the conservative ceiling instead. The result
    never exceeds the frame size.
    """
    n = params.n_exact
    rounded = math.ceil(n) if ceiling else math.floor(n + 0.5)
    return min(params.N, max(1, rounded))
