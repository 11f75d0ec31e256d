"""Raster data types: land-cover label masks, binary change masks, crop
regions, detection sets and segmentation scores.

All types are immutable after construction (arrays are marked read-only),
so every operation on them is pure and safe to share across sessions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Land-cover vocabulary, fixed order. Index in this tuple == label value.
CLASS_NAMES: tuple[str, ...] = (
    "background",
    "water",
    "barren",
    "road",
    "building",
    "forest",
    "farmland",
)
NUM_CLASSES = len(CLASS_NAMES)

# Fixed palette for indexed-PNG encoding, one RGB triple per class.
CLASS_PALETTE: tuple[tuple[int, int, int], ...] = (
    (255, 255, 255),  # background
    (0, 0, 255),      # water
    (139, 105, 20),   # barren
    (128, 128, 128),  # road
    (255, 0, 0),      # building
    (0, 128, 0),      # forest
    (255, 215, 0),    # farmland
)


class RasterError(Exception):
    """Base class for raster-level failures."""


class OutOfBounds(RasterError):
    """A crop region exceeds the bounds of its parent raster."""


class BadClass(RasterError):
    """A class index is outside the 7-class vocabulary."""


class DimensionMismatch(RasterError):
    """Two rasters that must share dimensions do not."""


class BadFilter(RasterError):
    """A class filter was supplied where it is not allowed."""


def class_index(name: str) -> int:
    """Map a class name to its label index, raising BadClass when unknown."""
    try:
        return CLASS_NAMES.index(name)
    except ValueError:
        raise BadClass(f"unknown class name {name!r}") from None


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr)
    if out is arr:
        out = arr.copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class LabelMask:
    """Per-pixel land-cover raster with values in 0..6, row-major."""

    width: int
    height: int
    labels: np.ndarray = field(repr=False)  # (height, width) uint8

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels, dtype=np.uint8).reshape(self.height, self.width)
        if labels.size and labels.max() >= NUM_CLASSES:
            raise BadClass(f"label values must be < {NUM_CLASSES}")
        object.__setattr__(self, "labels", _freeze(labels))

    @classmethod
    def from_array(cls, labels: np.ndarray) -> "LabelMask":
        labels = np.asarray(labels)
        h, w = labels.shape
        return cls(width=w, height=h, labels=labels)

    @property
    def class_names(self) -> tuple[str, ...]:
        return CLASS_NAMES


@dataclass(frozen=True)
class ChangeMask:
    """Per-pixel binary change raster, True where change was detected."""

    width: int
    height: int
    changed: np.ndarray = field(repr=False)  # (height, width) bool

    def __post_init__(self) -> None:
        changed = np.asarray(self.changed, dtype=bool).reshape(self.height, self.width)
        object.__setattr__(self, "changed", _freeze(changed))

    @classmethod
    def from_array(cls, changed: np.ndarray) -> "ChangeMask":
        changed = np.asarray(changed)
        h, w = changed.shape
        return cls(width=w, height=h, changed=changed)


@dataclass(frozen=True)
class CropRegion:
    """Axis-aligned pixel rectangle (x, y) at top-left, w by h."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self) -> None:
        if self.w <= 0 or self.h <= 0:
            raise OutOfBounds(f"crop size must be positive, got {self.w}x{self.h}")
        if self.x < 0 or self.y < 0:
            raise OutOfBounds(f"crop origin must be non-negative, got ({self.x}, {self.y})")

    def check_within(self, width: int, height: int) -> None:
        if self.x + self.w > width or self.y + self.h > height:
            raise OutOfBounds(
                f"region ({self.x}, {self.y}, {self.w}, {self.h}) exceeds "
                f"parent bounds {width}x{height}"
            )


@dataclass(frozen=True)
class Detection:
    """One detected object: class name, bounding box and confidence score."""

    class_name: str
    box: CropRegion
    score: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score must be in [0, 1], got {self.score}")


@dataclass(frozen=True)
class DetectionSet:
    """Detector output for one image."""

    entries: tuple[Detection, ...]

    @classmethod
    def from_dicts(cls, items: list[dict]) -> "DetectionSet":
        entries = tuple(
            Detection(
                class_name=d["class_name"],
                box=CropRegion(*(int(v) for v in d["box"])),
                score=float(d["score"]),
            )
            for d in items
        )
        return cls(entries=entries)

    def to_dicts(self) -> list[dict]:
        return [
            {
                "class_name": e.class_name,
                "box": [e.box.x, e.box.y, e.box.w, e.box.h],
                "score": e.score,
            }
            for e in self.entries
        ]


@dataclass(frozen=True)
class SegScores:
    """Segmentation quality summary: overall accuracy, per-class IoU and
    the means over classes that actually occur (see segmentation_metrics)."""

    overall_accuracy: float
    per_class_iou: dict[str, float]
    mean_iou: float
    mean_f1: float
