"""PNG encoding and decoding for raster masks.

Label masks are stored as indexed 8-bit PNGs carrying the fixed 7-entry
palette; change masks as 8-bit grayscale with 0/255. Plain RGB imagery is
handled generically (the agent only crops it, never interprets pixels).
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

from .types import CLASS_PALETTE, NUM_CLASSES, ChangeMask, CropRegion, LabelMask


class BadImage(Exception):
    """Bytes that are not decodable as the expected PNG kind."""


def encode_label_mask(mask: LabelMask) -> bytes:
    img = Image.fromarray(mask.labels, mode="P")
    palette = []
    for rgb in CLASS_PALETTE:
        palette.extend(rgb)
    img.putpalette(palette)
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def decode_label_mask(data: bytes) -> LabelMask:
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except Exception as exc:
        raise BadImage(f"not a decodable PNG: {exc}") from exc
    if img.mode != "P":
        raise BadImage(f"label mask must be palette-indexed PNG, got mode {img.mode}")
    labels = np.asarray(img, dtype=np.uint8)
    if labels.size and labels.max() >= NUM_CLASSES:
        raise BadImage(f"label values must be < {NUM_CLASSES}, found {labels.max()}")
    return LabelMask.from_array(labels)


def encode_change_mask(mask: ChangeMask) -> bytes:
    img = Image.fromarray(np.where(mask.changed, 255, 0).astype(np.uint8), mode="L")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def decode_change_mask(data: bytes) -> ChangeMask:
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except Exception as exc:
        raise BadImage(f"not a decodable PNG: {exc}") from exc
    if img.mode == "1":
        img = img.convert("L")
    if img.mode != "L":
        raise BadImage(f"change mask must be 1-bit or 8-bit grayscale PNG, got mode {img.mode}")
    values = np.asarray(img, dtype=np.uint8)
    return ChangeMask.from_array(values > 0)


def render_label_mask_rgb(mask: LabelMask) -> bytes:
    """Palette-colored RGB rendering of a label mask (for viewing, not data)."""
    palette = np.array(CLASS_PALETTE, dtype=np.uint8)
    rgb = palette[mask.labels]
    img = Image.fromarray(rgb, mode="RGB")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def png_dimensions(data: bytes) -> tuple[int, int]:
    """(width, height) of any PNG, raising BadImage on undecodable bytes."""
    try:
        img = Image.open(io.BytesIO(data))
        if (img.format or "").upper() != "PNG":
            raise BadImage(f"expected PNG data, got {img.format}")
        return img.size
    except BadImage:
        raise
    except Exception as exc:
        raise BadImage(f"not a decodable image: {exc}") from exc


def crop_png(data: bytes, region: CropRegion) -> bytes:
    """Crop any PNG (RGB imagery or mask) to `region`, preserving mode."""
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except Exception as exc:
        raise BadImage(f"not a decodable PNG: {exc}") from exc
    region.check_within(*img.size)
    window = img.crop((region.x, region.y, region.x + region.w, region.y + region.h))
    buf = io.BytesIO()
    if img.mode == "P" and img.getpalette() is not None:
        window.putpalette(img.getpalette())
    window.save(buf, format="PNG")
    return buf.getvalue()
