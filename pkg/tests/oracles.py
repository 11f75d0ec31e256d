"""Independent brute-force oracles used by the test suite.

Everything here is deliberately written as plain per-pixel Python so that it
shares no code path with the implementations it checks.
"""

from __future__ import annotations

import numpy as np


def loop_count_class(labels: np.ndarray, class_idx: int) -> int:
    count = 0
    h, w = labels.shape
    for y in range(h):
        for x in range(w):
            if labels[y, x] == class_idx:
                count += 1
    return count


def loop_changed_count(changed: np.ndarray) -> int:
    count = 0
    h, w = changed.shape
    for y in range(h):
        for x in range(w):
            if changed[y, x]:
                count += 1
    return count


def loop_transition_matrix(pre: np.ndarray, cur: np.ndarray, n: int) -> np.ndarray:
    counts = np.zeros((n, n), dtype=np.int64)
    h, w = pre.shape
    for y in range(h):
        for x in range(w):
            counts[pre[y, x], cur[y, x]] += 1
    return counts


def flood_fill_component_count(mask: np.ndarray) -> int:
    """4-connected component count by recursive-style flood fill."""
    h, w = mask.shape
    seen = [[False] * w for _ in range(h)]
    count = 0
    for sy in range(h):
        for sx in range(w):
            if not mask[sy, sx] or seen[sy][sx]:
                continue
            count += 1
            frontier = [(sy, sx)]
            seen[sy][sx] = True
            while frontier:
                y, x = frontier.pop()
                for ny, nx in ((y - 1, x), (y + 1, x), (y, x - 1), (y, x + 1)):
                    if 0 <= ny < h and 0 <= nx < w and mask[ny, nx] and not seen[ny][nx]:
                        seen[ny][nx] = True
                        frontier.append((ny, nx))
    return count


def confusion_matrix(gt: np.ndarray, pred: np.ndarray, n: int) -> np.ndarray:
    return loop_transition_matrix(gt, pred, n)


def seg_scores_from_confusion(confusion: np.ndarray) -> tuple[float, dict[int, float], float, float]:
    """(overall accuracy, per-class IoU, mean IoU, mean F1); classes with an
    empty row AND column are skipped."""
    n = confusion.shape[0]
    total = confusion.sum()
    correct = sum(confusion[c, c] for c in range(n))
    oa = correct / total
    ious: dict[int, float] = {}
    f1s = []
    for c in range(n):
        tp = confusion[c, c]
        fn = confusion[c, :].sum() - tp
        fp = confusion[:, c].sum() - tp
        if tp + fp + fn == 0:
            continue
        ious[c] = tp / (tp + fp + fn)
        f1s.append(2 * tp / (2 * tp + fp + fn))
    return oa, ious, float(np.mean(list(ious.values()))), float(np.mean(f1s))


def multiset_intersection_size(used: list[str], required: list[str]) -> int:
    """Sum over names of min(multiplicity in used, multiplicity in required)."""
    names = set(used) | set(required)
    return sum(min(used.count(name), required.count(name)) for name in names)
