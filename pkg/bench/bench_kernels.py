"""Benchmark the jitted raster kernels against the pure-numpy fallback.

Run: python bench/bench_kernels.py [--size 1024] [--repeats 5]

The same comparison is forced at runtime by CHANGEGPT_NO_NUMBA=1, which
switches the library onto the numpy path wholesale.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from changegpt.raster import kernels


def timeit(fn, *args, repeats: int) -> float:
    fn(*args)  # warm-up (includes JIT compilation for the numba path)
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - started)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=1024, help="mask edge length in pixels")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    a = rng.integers(0, 7, size=(args.size, args.size), dtype=np.uint8)
    b = rng.integers(0, 7, size=(args.size, args.size), dtype=np.uint8)
    mask = rng.random((args.size, args.size)) < 0.45

    rows = []
    rows.append(
        (
            "pair_counts",
            timeit(kernels.pair_counts_numpy, a, b, 7, repeats=args.repeats),
            timeit(kernels.pair_counts_numba, a, b, 7, repeats=args.repeats)
            if kernels._HAVE_NUMBA
            else None,
        )
    )
    rows.append(
        (
            "connected_components",
            timeit(kernels.connected_component_count_numpy, mask, repeats=args.repeats),
            timeit(kernels.connected_component_count_numba, mask, repeats=args.repeats)
            if kernels._HAVE_NUMBA
            else None,
        )
    )

    print(f"mask size {args.size}x{args.size}, best of {args.repeats}")
    print(f"{'kernel':24s} {'numpy':>12s} {'numba':>12s} {'speedup':>9s}")
    for name, numpy_s, numba_s in rows:
        if numba_s is None:
            print(f"{name:24s} {numpy_s * 1e3:10.2f}ms {'n/a':>12s} {'n/a':>9s}")
        else:
            print(
                f"{name:24s} {numpy_s * 1e3:10.2f}ms {numba_s * 1e3:10.2f}ms "
                f"{numpy_s / numba_s:8.1f}x"
            )


if __name__ == "__main__":
    main()
