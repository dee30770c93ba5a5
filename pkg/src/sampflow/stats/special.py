"""Special functions behind the representativeness tests."""
from __future__ import annotations

import math

from ..errors import DomainError

# Acklam's rational approximation of the standard normal quantile.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def inverse_normal_cdf(q: float) -> float:
    """Standard normal quantile.

    Acklam's approximation (relative error about 1e-9) followed by one
    Halley step on ``0.5 * erfc(-x / sqrt 2) - q``.
    """
    if not 0.0 < q < 1.0:
        raise DomainError(f"quantile probability must be in (0, 1), got {q!r}")
    if q < _P_LOW:
        t = math.sqrt(-2.0 * math.log(q))
        x = ((((((_C[0] * t + _C[1]) * t + _C[2]) * t + _C[3]) * t + _C[4]) * t + _C[5])
             / ((((_D[0] * t + _D[1]) * t + _D[2]) * t + _D[3]) * t + 1.0))
    elif q <= 1.0 - _P_LOW:
        s = q - 0.5
        r = s * s
        x = ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * s
             / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))
    else:
        t = math.sqrt(-2.0 * math.log1p(-q))
        x = -((((((_C[0] * t + _C[1]) * t + _C[2]) * t + _C[3]) * t + _C[4]) * t + _C[5])
              / ((((_D[0] * t + _D[1]) * t + _D[2]) * t + _D[3]) * t + 1.0))
    e = normal_cdf(x) - q
    u = e * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def kolmogorov_sf(lam: float) -> float:
    """Survival function of the Kolmogorov distribution,
    ``Q(lam) = 2 * sum_{j>=1} (-1)**(j-1) * exp(-2 j**2 lam**2)``.

    The alternating series stops once a term drops below 1e-12 (or after
    100 terms). Below ``lam = 0.5`` that series converges too slowly, so
    the equivalent theta-function form
    ``1 - sqrt(2 pi)/lam * sum exp(-(2j-1)**2 pi**2 / (8 lam**2))`` is used.
    """
    if lam < 0 or math.isnan(lam):
        raise DomainError(f"lambda must be non-negative, got {lam!r}")
    if lam == 0.0:
        return 1.0
    if lam < 0.5:
        k = math.pi ** 2 / (8.0 * lam * lam)
        total = 0.0
        for j in range(1, 101):
            term = math.exp(-(2 * j - 1) ** 2 * k)
            total += term
            if term < 1e-16:
                break
        return min(1.0, max(0.0, 1.0 - math.sqrt(2.0 * math.pi) / lam * total))
    total = 0.0
    sign = 1.0
    for j in range(1, 101):
        term = math.exp(-2.0 * j * j * lam * lam)
        total += sign * term
        if term < 1e-12:
            break
        sign = -sign
    return min(1.0, max(0.0, 2.0 * total))


_EPS = 1e-16
_ITMAX = 10000
_TINY = 1e-300


def _lower_series(a: float, x: float) -> float:
    # P(a, x) by the power series; converges fast for x < a + 1
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_ITMAX):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _upper_fraction(a: float, x: float) -> float:
    # Q(a, x) by the continued fraction (modified Lentz); for x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _ITMAX):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def _check_gamma_args(a: float, x: float) -> None:
    if not a > 0 or math.isinf(a):
        raise DomainError(f"shape must be positive and finite, got {a!r}")
    if not x >= 0:
        raise DomainError(f"x must be non-negative, got {x!r}")


def regularized_upper_gamma(a: float, x: float) -> float:
    """``Q(a, x) = Gamma(a, x) / Gamma(a)``."""
    _check_gamma_args(a, x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _lower_series(a, x))
    return min(1.0, _upper_fraction(a, x))


def regularized_lower_gamma(a: float, x: float) -> float:
    """``P(a, x) = 1 - Q(a, x)``."""
    _check_gamma_args(a, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(1.0, _lower_series(a, x))
    return max(0.0, 1.0 - _upper_fraction(a, x))
