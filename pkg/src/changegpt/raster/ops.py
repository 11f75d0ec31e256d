"""Deterministic calculation operations over raster masks.

These are the numeric ground the agent's answers stand on: every tool
observation that contains a number is produced by one of these functions.
"""

from __future__ import annotations

from typing import NamedTuple, Optional, Union

import numpy as np

from . import kernels
from .types import (
    NUM_CLASSES,
    BadClass,
    BadFilter,
    ChangeMask,
    CropRegion,
    DetectionSet,
    DimensionMismatch,
    LabelMask,
    SegScores,
    CLASS_NAMES,
)

# Sentinel for a class percentage delta whose base count is zero.
NEW_APPEARANCE = "new appearance"

DEFAULT_MIN_SCORE = 0.5


def crop(mask: Union[LabelMask, ChangeMask], region: CropRegion) -> Union[LabelMask, ChangeMask]:
    """Cut `region` out of a mask; output pixel (i, j) = input (y+i, x+j)."""
    region.check_within(mask.width, mask.height)
    if isinstance(mask, LabelMask):
        window = mask.labels[region.y : region.y + region.h, region.x : region.x + region.w]
        return LabelMask.from_array(window)
    window = mask.changed[region.y : region.y + region.h, region.x : region.x + region.w]
    return ChangeMask.from_array(window)


def count_class_pixels(mask: LabelMask, class_idx: int) -> int:
    if not 0 <= class_idx < NUM_CLASSES:
        raise BadClass(f"class index must be < {NUM_CLASSES}, got {class_idx}")
    return int(np.count_nonzero(mask.labels == class_idx))


def changed_fraction(mask: ChangeMask) -> float:
    return float(np.count_nonzero(mask.changed)) / float(mask.width * mask.height)


def whether_change(mask: ChangeMask, min_fraction: float = 0.0) -> bool:
    """True iff the changed fraction strictly exceeds `min_fraction`."""
    if not 0.0 <= min_fraction <= 1.0:
        raise ValueError(f"min_fraction must be in [0, 1], got {min_fraction}")
    return changed_fraction(mask) > min_fraction


class ClassSizeDelta(NamedTuple):
    pre_count: int
    cur_count: int
    # float percentage, or NEW_APPEARANCE when pre_count == 0 < cur_count
    pct_change: Union[float, str]


def class_size_delta(pre: LabelMask, cur: LabelMask, class_idx: int) -> ClassSizeDelta:
    """Pixel-count change of one class between the two dates, as a percentage
    of the earlier count. A class appearing from nothing has no finite
    percentage and is reported with the NEW_APPEARANCE sentinel."""
    if (pre.width, pre.height) != (cur.width, cur.height):
        raise DimensionMismatch(
            f"pre is {pre.width}x{pre.height}, cur is {cur.width}x{cur.height}"
        )
    pre_count = count_class_pixels(pre, class_idx)
    cur_count = count_class_pixels(cur, class_idx)
    if pre_count == 0:
        pct: Union[float, str] = NEW_APPEARANCE if cur_count > 0 else 0.0
    else:
        pct = (cur_count - pre_count) / pre_count * 100.0
    return ClassSizeDelta(pre_count, cur_count, pct)


def class_transition_matrix(pre: LabelMask, cur: LabelMask) -> np.ndarray:
    """7x7 counts; cell (a, b) = pixels labeled a before and b now."""
    if (pre.width, pre.height) != (cur.width, cur.height):
        raise DimensionMismatch(
            f"pre is {pre.width}x{pre.height}, cur is {cur.width}x{cur.height}"
        )
    return kernels.pair_counts(pre.labels, cur.labels, NUM_CLASSES)


def dominant_class(mask: LabelMask) -> int:
    """Class with the most pixels; ties break toward the lower class index."""
    counts = np.bincount(mask.labels.ravel(), minlength=NUM_CLASSES)
    return int(np.argmax(counts))


def count_objects(
    source: Union[DetectionSet, ChangeMask],
    class_name: Optional[str] = None,
    min_score: float = DEFAULT_MIN_SCORE,
) -> int:
    """Object count, either from detector output (filtered by class and
    confidence) or as the number of 4-connected regions of a change mask."""
    if isinstance(source, ChangeMask):
        if class_name is not None:
            raise BadFilter("class filter is not applicable to a change mask")
        return kernels.connected_component_count(source.changed)
    count = 0
    for det in source.entries:
        if det.score < min_score:
            continue
        if class_name is not None and det.class_name != class_name:
            continue
        count += 1
    return count


def segmentation_metrics(pred: LabelMask, gt: LabelMask) -> SegScores:
    """Overall accuracy, per-class IoU, mean IoU and mean F1.

    Classes absent from both the ground truth and the prediction do not
    occur in the scene at all and are excluded from the means; a class
    predicted where the ground truth has none still counts (as IoU 0).
    """
    if (pred.width, pred.height) != (gt.width, gt.height):
        raise DimensionMismatch(
            f"pred is {pred.width}x{pred.height}, gt is {gt.width}x{gt.height}"
        )
    confusion = kernels.pair_counts(gt.labels, pred.labels, NUM_CLASSES)
    total = confusion.sum()
    correct = np.trace(confusion)
    oa = float(correct) / float(total)

    per_class_iou: dict[str, float] = {}
    f1s: list[float] = []
    for c in range(NUM_CLASSES):
        tp = confusion[c, c]
        fn = confusion[c, :].sum() - tp
        fp = confusion[:, c].sum() - tp
        if tp + fp + fn == 0:
            continue  # class occurs in neither raster
        iou = float(tp) / float(tp + fp + fn)
        f1 = 2.0 * float(tp) / float(2 * tp + fp + fn)
        per_class_iou[CLASS_NAMES[c]] = iou
        f1s.append(f1)

    mean_iou = float(np.mean(list(per_class_iou.values())))
    mean_f1 = float(np.mean(f1s))
    return SegScores(
        overall_accuracy=oa,
        per_class_iou=per_class_iou,
        mean_iou=mean_iou,
        mean_f1=mean_f1,
    )
