"""Histograms and coverage (breadth) of a sample relative to its frame."""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .. import accel
from ..errors import DomainError, EmptyFrameError


def _numeric(values: Iterable) -> tuple[np.ndarray, int]:
    out = []
    missing = 0
    for v in values:
        if v is None:
            missing += 1
        elif isinstance(v, dt.date):
            out.append(v.toordinal())
        else:
            out.append(v)
    return np.asarray(out, dtype=np.float64), missing


@dataclass(frozen=True)
class Histogram:
    edges: tuple[float, ...]
    counts: tuple[int, ...]
    overflow: int
    missing: int

    def to_dict(self) -> dict:
        return {"edges": list(self.edges), "counts": list(self.counts),
                "overflow": self.overflow, "missing": self.missing}


def histogram(values: Iterable, bin_count: int, truncate_max: float | None = None) -> Histogram:
    """Equal-width histogram over ``[min, truncate_max or max]``.

    Values above ``truncate_max`` go to ``overflow``; ``None`` entries are
    counted as missing. Dates are binned by their ordinal.
    """
    if bin_count < 1:
        raise DomainError("bin_count must be >= 1")
    arr, missing = _numeric(values)
    if arr.size == 0:
        edges = np.linspace(0.0, 1.0, bin_count + 1)
        return Histogram(tuple(float(e) for e in edges), (0,) * bin_count, 0, missing)
    lo = float(arr.min())
    hi = float(arr.max()) if truncate_max is None else float(truncate_max)
    if hi < lo:
        # every value is above the truncation point
        lo = hi
    counts, over, _ = accel.histogram_counts(arr, lo, hi, bin_count)
    edges = np.linspace(lo, hi, bin_count + 1)
    return Histogram(tuple(float(e) for e in edges), tuple(int(c) for c in counts),
                     over, missing)


@dataclass(frozen=True)
class Coverage:
    ratio: float
    frame_classes: int
    covered_classes: int
    sample_missing: int
    frame_missing: int


def coverage(sample_vals: Sequence, frame_vals: Sequence,
             bins: int | Sequence[float] | None = None) -> Coverage:
    """Fraction of the frame's classes that the sample also occupies.

    ``bins=None`` treats each distinct value as a class; an int asks for
    that many equal-width bins over the frame's range; a sequence gives
    explicit bin edges (values outside them are ignored).
    """
    if bins is None:
        frame = {v for v in frame_vals if v is not None}
        if not frame:
            raise EmptyFrameError("frame has no non-missing values")
        sample = {v for v in sample_vals if v is not None}
        covered = len(frame & sample)
        return Coverage(covered / len(frame), len(frame), covered,
                        sum(v is None for v in sample_vals),
                        sum(v is None for v in frame_vals))

    f_arr, f_missing = _numeric(frame_vals)
    s_arr, s_missing = _numeric(sample_vals)
    if f_arr.size == 0:
        raise EmptyFrameError("frame has no non-missing values")
    if isinstance(bins, (int, np.integer)):
        if bins < 1:
            raise DomainError("bin count must be >= 1")
        lo, hi = float(f_arr.min()), float(f_arr.max())
        f_counts, _, _ = accel.histogram_counts(f_arr, lo, hi, int(bins))
        s_counts, _, _ = accel.histogram_counts(s_arr, lo, hi, int(bins))
    else:
        edges = np.asarray(bins, dtype=np.float64)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise DomainError("bin edges must be strictly increasing, at least two")
        f_counts = _edge_counts(f_arr, edges)
        s_counts = _edge_counts(s_arr, edges)
    occupied = f_counts > 0
    n_frame = int(occupied.sum())
    if n_frame == 0:
        raise EmptyFrameError("no frame value falls inside the bins")
    covered = int((occupied & (s_counts > 0)).sum())
    return Coverage(covered / n_frame, n_frame, covered, s_missing, f_missing)


def _edge_counts(values: np.ndarray, edges: np.ndarray) -> np.ndarray:
    inside = values[(values >= edges[0]) & (values <= edges[-1])]
    k = np.searchsorted(edges, inside, side="right") - 1
    k = np.minimum(k, edges.size - 2)
    return np.bincount(k, minlength=edges.size - 1)
