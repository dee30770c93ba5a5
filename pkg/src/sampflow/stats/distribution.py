"""Distribution comparison tests: two-sample Kolmogorov-Smirnov and
chi-square goodness-of-fit."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .. import accel
from ..errors import (DimensionMismatchError, DomainError, EmptySampleError,
                      NonPositiveExpectedError)
from .special import kolmogorov_sf, regularized_upper_gamma

KS_SMALL_SAMPLE = 25
CHI2_MIN_EXPECTED = 5.0


@dataclass(frozen=True)
class KsResult:
    D: float
    n1: int
    n2: int
    n_e: float
    p_value: float

    @property
    def small_sample(self) -> bool:
        """The asymptotic p-value is unreliable below 25 observations."""
        return min(self.n1, self.n2) < KS_SMALL_SAMPLE


def _as_sorted(values: Sequence[float], name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional")
    if arr.size == 0:
        raise EmptySampleError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite values")
    return np.sort(arr, kind="stable")


def ks_two_sample(xs: Sequence[float], ys: Sequence[float]) -> KsResult:
    x = _as_sorted(xs, "first sample")
    y = _as_sorted(ys, "second sample")
    n1, n2 = x.size, y.size
    d = accel.ks_statistic(x, y)
    n_e = n1 * n2 / (n1 + n2)
    sq = math.sqrt(n_e)
    lam = (sq + 0.12 + 0.11 / sq) * d
    p = min(1.0, max(0.0, kolmogorov_sf(lam)))
    return KsResult(d, n1, n2, n_e, p)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    df: int
    p_value: float
    min_expected: float

    @property
    def low_expected(self) -> bool:
        """At least one expected count is below 5."""
        return self.min_expected < CHI2_MIN_EXPECTED


def chi_square_gof(observed: Sequence[float], expected: Sequence[float]) -> ChiSquareResult:
    obs = [float(o) for o in observed]
    exp = [float(e) for e in expected]
    if len(obs) != len(exp):
        raise DimensionMismatchError(
            f"{len(obs)} observed counts but {len(exp)} expected counts")
    if len(obs) < 2:
        raise DimensionMismatchError("need at least two categories")
    if any(not e > 0 or not math.isfinite(e) for e in exp):
        raise NonPositiveExpectedError("expected counts must be positive")
    if any(o < 0 or not math.isfinite(o) for o in obs):
        raise DomainError("observed counts must be non-negative")
    stat = math.fsum((o - e) ** 2 / e for o, e in zip(obs, exp))
    df = len(obs) - 1
    p = regularized_upper_gamma(df / 2.0, stat / 2.0)
    return ChiSquareResult(stat, df, p, min(exp))
