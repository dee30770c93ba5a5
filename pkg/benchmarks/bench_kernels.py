"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

Both paths are checked for identical output before timing. The first
numba call (compilation) is excluded.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from sampflow import accel


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    rng = np.random.default_rng(7)
    x = np.sort(rng.lognormal(3, 2, 20_000))
    y = np.sort(rng.lognormal(3.1, 2, 100_000))
    h = rng.lognormal(3, 2, 100_000)
    return [
        ("sample_indices 10000 of 475832", accel.sample_indices_numpy, accel.sample_indices_numba
         if accel.HAVE_NUMBA else None, (475_832, 10_000, 4242)),
        ("ks_statistic 20k vs 100k", accel.ks_statistic_numpy,
         accel.ks_statistic_numba if accel.HAVE_NUMBA else None, (x, y)),
        ("histogram_counts 100k, 20 bins", accel.histogram_counts_numpy,
         accel.histogram_counts_numba if accel.HAVE_NUMBA else None,
         (h, float(h.min()), 3e6, 20)),
    ]


def same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(same(p, q) for p, q in zip(a, b))
    return bool(np.array_equal(np.asarray(a), np.asarray(b)))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"active backend: {accel.BACKEND}")
    print(f"{'kernel':34s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for name, np_fn, nb_fn, call_args in cases():
        t_np = best_of(lambda: np_fn(*call_args), args.repeat)
        if nb_fn is None:
            print(f"{name:34s} {t_np * 1e3:11.2f} {'n/a':>11s} {'':>8s}")
            continue
        ref = np_fn(*call_args)
        got = nb_fn(*call_args)  # compiles
        if not same(ref, got):
            raise SystemExit(f"{name}: numba and numpy results differ")
        t_nb = best_of(lambda: nb_fn(*call_args), args.repeat)
        print(f"{name:34s} {t_np * 1e3:11.2f} {t_nb * 1e3:11.2f} {t_np / t_nb:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
