"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Three loops dominate run time on large frames: drawing sample indices
(partial Fisher-Yates driven by splitmix64), the two-sample KS merge walk
and equal-width histogram binning. Each has a ``*_numba`` and a
``*_numpy`` implementation producing bit-identical results; the public
names are bound to one of them at import time.

Set ``SAMPFLOW_DISABLE_NUMBA=1`` to force the fallback (numba missing or
failing to import has the same effect).
"""
from __future__ import annotations

import os

import numpy as np

from .rng import GOLDEN, MASK64, fmix64, to_state

_DISABLED = os.environ.get("SAMPFLOW_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("disabled by SAMPFLOW_DISABLE_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


# -- pure numpy / python ----------------------------------------------------


def sample_indices_numpy(n_total: int, n: int, seed: int) -> np.ndarray:
    idx = np.arange(n_total, dtype=np.int64)
    state = to_state(seed)
    for i in range(n):
        bound = n_total - i
        threshold = ((1 << 64) - bound) % bound
        while True:
            state = (state + GOLDEN) & MASK64
            r = fmix64(state)
            if r >= threshold:
                break
        j = i + r % bound
        idx[i], idx[j] = idx[j], idx[i]
    return np.sort(idx[:n])


def ks_statistic_numpy(x: np.ndarray, y: np.ndarray) -> float:
    n1, n2 = x.size, y.size
    grid = np.unique(np.concatenate((x, y)))
    f1 = np.searchsorted(x, grid, side="right") / n1
    f2 = np.searchsorted(y, grid, side="right") / n2
    return float(np.max(np.abs(f1 - f2)))


def histogram_counts_numpy(values: np.ndarray, lo: float, hi: float, bins: int):
    counts = np.zeros(bins, dtype=np.int64)
    over = values > hi
    under = values < lo
    inside = values[~(over | under)]
    width = (hi - lo) / bins
    if width == 0.0:
        counts[0] = inside.size
    else:
        k = np.floor((inside - lo) / width).astype(np.int64)
        np.minimum(k, bins - 1, out=k)
        counts += np.bincount(k, minlength=bins)
    return counts, int(over.sum()), int(under.sum())


# -- numba -------------------------------------------------------------------

if HAVE_NUMBA:
    _G = np.uint64(GOLDEN)
    _M1 = np.uint64(0xBF58476D1CE4E5B9)
    _M2 = np.uint64(0x94D049BB133111EB)
    _S30 = np.uint64(30)
    _S27 = np.uint64(27)
    _S31 = np.uint64(31)
    _ZERO = np.uint64(0)

    @njit(cache=True)
    def _fmix_nb(z):
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
        return z ^ (z >> _S31)

    @njit(cache=True)
    def _sample_indices_nb(n_total, n, state):
        idx = np.arange(n_total)
        for i in range(n):
            bound = np.uint64(n_total - i)
            threshold = (_ZERO - bound) % bound
            while True:
                state = state + _G
                r = _fmix_nb(state)
                if r >= threshold:
                    break
            j = i + np.int64(r % bound)
            tmp = idx[i]
            idx[i] = idx[j]
            idx[j] = tmp
        return np.sort(idx[:n])

    @njit(cache=True)
    def _ks_nb(x, y):
        n1 = x.size
        n2 = y.size
        i = 0
        j = 0
        d = 0.0
        while i < n1 and j < n2:
            v = min(x[i], y[j])
            while i < n1 and x[i] <= v:
                i += 1
            while j < n2 and y[j] <= v:
                j += 1
            diff = abs(i / n1 - j / n2)
            if diff > d:
                d = diff
        return d

    @njit(cache=True)
    def _hist_nb(values, lo, hi, bins):
        counts = np.zeros(bins, dtype=np.int64)
        over = 0
        under = 0
        width = (hi - lo) / bins
        for v in values:
            if v > hi:
                over += 1
            elif v < lo:
                under += 1
            elif width == 0.0:
                counts[0] += 1
            else:
                k = np.int64(np.floor((v - lo) / width))
                if k > bins - 1:
                    k = bins - 1
                counts[k] += 1
        return counts, over, under

    def sample_indices_numba(n_total: int, n: int, seed: int) -> np.ndarray:
        return _sample_indices_nb(np.int64(n_total), np.int64(n), np.uint64(to_state(seed)))

    def ks_statistic_numba(x: np.ndarray, y: np.ndarray) -> float:
        return float(_ks_nb(x, y))

    def histogram_counts_numba(values: np.ndarray, lo: float, hi: float, bins: int):
        counts, over, under = _hist_nb(values, float(lo), float(hi), np.int64(bins))
        return counts, int(over), int(under)

    BACKEND = "numba"
    _sample_impl = sample_indices_numba
    _ks_impl = ks_statistic_numba
    _hist_impl = histogram_counts_numba
else:
    BACKEND = "numpy"
    _sample_impl = sample_indices_numpy
    _ks_impl = ks_statistic_numpy
    _hist_impl = histogram_counts_numpy


def sample_indices(n_total: int, n: int, seed: int) -> np.ndarray:
    """Sorted positions of ``n`` of ``n_total`` items, uniform without
    replacement: the first ``n`` slots of a partial Fisher-Yates shuffle."""
    if not 0 <= n <= n_total:
        raise ValueError(f"cannot pick {n} of {n_total}")
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    return _sample_impl(n_total, n, seed)


def ks_statistic(x: np.ndarray, y: np.ndarray) -> float:
    """Sup-distance between the ECDFs of two sorted float64 samples."""
    return _ks_impl(np.ascontiguousarray(x, dtype=np.float64),
                    np.ascontiguousarray(y, dtype=np.float64))


def histogram_counts(values: np.ndarray, lo: float, hi: float, bins: int):
    """Equal-width counts over ``[lo, hi]`` (last bin closed).

    Returns ``(counts, overflow, underflow)``.
    """
    return _hist_impl(np.ascontiguousarray(values, dtype=np.float64), lo, hi, bins)
