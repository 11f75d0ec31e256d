"""Raster core: mask types, calculation operations and PNG I/O."""

from .ops import (
    NEW_APPEARANCE,
    ClassSizeDelta,
    changed_fraction,
    class_size_delta,
    class_transition_matrix,
    count_class_pixels,
    count_objects,
    crop,
    dominant_class,
    segmentation_metrics,
    whether_change,
)
from .types import (
    CLASS_NAMES,
    CLASS_PALETTE,
    NUM_CLASSES,
    BadClass,
    BadFilter,
    ChangeMask,
    CropRegion,
    Detection,
    DetectionSet,
    DimensionMismatch,
    LabelMask,
    OutOfBounds,
    RasterError,
    SegScores,
    class_index,
)

__all__ = [
    "CLASS_NAMES",
    "CLASS_PALETTE",
    "NUM_CLASSES",
    "NEW_APPEARANCE",
    "BadClass",
    "BadFilter",
    "ChangeMask",
    "ClassSizeDelta",
    "CropRegion",
    "Detection",
    "DetectionSet",
    "DimensionMismatch",
    "LabelMask",
    "OutOfBounds",
    "RasterError",
    "SegScores",
    "changed_fraction",
    "class_index",
    "class_size_delta",
    "class_transition_matrix",
    "count_class_pixels",
    "count_objects",
    "crop",
    "dominant_class",
    "segmentation_metrics",
    "whether_change",
]
