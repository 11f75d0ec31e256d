"""Hot raster kernels with two interchangeable implementations.

The numba-jitted path is used by default; setting CHANGEGPT_NO_NUMBA=1 (or
running where numba is unavailable) selects the pure-numpy path. Both paths
are exact integer computations and must agree bit-for-bit; bench/bench_kernels.py
compares their throughput.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


def _numba_disabled() -> bool:
    return os.environ.get("CHANGEGPT_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")


# ---------------------------------------------------------------------------
# Pairwise label counting (transition / confusion matrices)
# ---------------------------------------------------------------------------

def pair_counts_numpy(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """counts[i, j] = number of pixels labeled i in `a` and j in `b`."""
    flat = a.astype(np.int64).ravel() * n + b.astype(np.int64).ravel()
    return np.bincount(flat, minlength=n * n).reshape(n, n)


if _HAVE_NUMBA:

    @njit(cache=True)
    def _pair_counts_jit(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:  # pragma: no cover - jitted
        counts = np.zeros((n, n), dtype=np.int64)
        af = a.ravel()
        bf = b.ravel()
        for k in range(af.size):
            counts[af[k], bf[k]] += 1
        return counts

    def pair_counts_numba(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
        return _pair_counts_jit(np.ascontiguousarray(a), np.ascontiguousarray(b), n)


# ---------------------------------------------------------------------------
# Connected components, 4-connectivity
# ---------------------------------------------------------------------------

def connected_component_count_numpy(mask: np.ndarray) -> int:
    """Count 4-connected components of True pixels by iterative min-label
    propagation. O(pixels x diameter), fine for the mask sizes the agent sees."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        return 0
    h, w = mask.shape
    labels = np.where(mask, np.arange(h * w, dtype=np.int64).reshape(h, w), -1)
    while True:
        prev = labels
        neigh = np.full((4, h, w), np.iinfo(np.int64).max, dtype=np.int64)
        neigh[0, 1:, :] = labels[:-1, :]
        neigh[1, :-1, :] = labels[1:, :]
        neigh[2, :, 1:] = labels[:, :-1]
        neigh[3, :, :-1] = labels[:, 1:]
        neigh[neigh < 0] = np.iinfo(np.int64).max
        best = np.minimum(labels, neigh.min(axis=0))
        labels = np.where(mask, best, -1)
        if np.array_equal(labels, prev):
            break
    return int(np.unique(labels[mask]).size)


if _HAVE_NUMBA:

    @njit(cache=True)
    def _component_count_jit(mask: np.ndarray) -> int:  # pragma: no cover - jitted
        h, w = mask.shape
        labels = np.full((h, w), -1, dtype=np.int64)
        stack = np.empty((h * w, 2), dtype=np.int64)
        count = 0
        for sy in range(h):
            for sx in range(w):
                if not mask[sy, sx] or labels[sy, sx] >= 0:
                    continue
                count += 1
                top = 0
                stack[top, 0] = sy
                stack[top, 1] = sx
                top += 1
                labels[sy, sx] = count
                while top > 0:
                    top -= 1
                    y = stack[top, 0]
                    x = stack[top, 1]
                    if y > 0 and mask[y - 1, x] and labels[y - 1, x] < 0:
                        labels[y - 1, x] = count
                        stack[top, 0] = y - 1
                        stack[top, 1] = x
                        top += 1
                    if y + 1 < h and mask[y + 1, x] and labels[y + 1, x] < 0:
                        labels[y + 1, x] = count
                        stack[top, 0] = y + 1
                        stack[top, 1] = x
                        top += 1
                    if x > 0 and mask[y, x - 1] and labels[y, x - 1] < 0:
                        labels[y, x - 1] = count
                        stack[top, 0] = y
                        stack[top, 1] = x - 1
                        top += 1
                    if x + 1 < w and mask[y, x + 1] and labels[y, x + 1] < 0:
                        labels[y, x + 1] = count
                        stack[top, 0] = y
                        stack[top, 1] = x + 1
                        top += 1
        return count

    def connected_component_count_numba(mask: np.ndarray) -> int:
        return int(_component_count_jit(np.ascontiguousarray(mask, dtype=np.bool_)))


# ---------------------------------------------------------------------------
# Path selection
# ---------------------------------------------------------------------------

def pair_counts(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    if _HAVE_NUMBA and not _numba_disabled():
        return pair_counts_numba(a, b, n)
    return pair_counts_numpy(a, b, n)


def connected_component_count(mask: np.ndarray) -> int:
    if _HAVE_NUMBA and not _numba_disabled():
        return connected_component_count_numba(mask)
    return connected_component_count_numpy(mask)


def active_path() -> str:
    """Which implementation invocations will take right now."""
    return "numba" if (_HAVE_NUMBA and not _numba_disabled()) else "numpy"
