"""Fixture store backing the vision-model stubs.

Layout: <root>/<tool>/<image_or_pair_id>.<png|txt|json>. Change-detection
fixtures are keyed by "<pre_id>_<cur_id>"; single-image tools by the image's
self id. Lookups are plain file reads, so identical calls return identical
artifacts.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from ..raster.png import decode_change_mask, decode_label_mask
from ..raster.types import ChangeMask, DetectionSet, LabelMask


class FixtureMissing(Exception):
    """A stub has no stored artifact for the requested image and tool."""


class FixtureStore:
    def __init__(self, root: Union[str, Path]) -> None:
        self.root = Path(root)

    def _lookup(self, tool: str, key: str, extensions: tuple[str, ...]) -> Path:
        for ext in extensions:
            path = self.root / tool / f"{key}.{ext}"
            if path.exists():
                return path
        raise FixtureMissing(f"no {tool} fixture for {key!r} under {self.root}")

    def _put(self, tool: str, key: str, ext: str, data: bytes) -> Path:
        path = self.root / tool / f"{key}.{ext}"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
        return path

    # -- reads ---------------------------------------------------------------

    def change_mask_bytes(self, pre_id: str, cur_id: str) -> bytes:
        return self._lookup("binary_change_detection", f"{pre_id}_{cur_id}", ("png",)).read_bytes()

    def change_mask(self, pre_id: str, cur_id: str) -> ChangeMask:
        return decode_change_mask(self.change_mask_bytes(pre_id, cur_id))

    def label_mask_bytes(self, image_id: str) -> bytes:
        return self._lookup("semantic_segmentation", image_id, ("png",)).read_bytes()

    def label_mask(self, image_id: str) -> LabelMask:
        return decode_label_mask(self.label_mask_bytes(image_id))

    def caption(self, image_id: str) -> str:
        return self._lookup("image_captioning", image_id, ("txt",)).read_text().strip()

    def scene_class(self, image_id: str) -> str:
        return self._lookup("scene_classification", image_id, ("txt",)).read_text().strip()

    def detections(self, image_id: str, tool: str = "object_detection") -> DetectionSet:
        path = self._lookup(tool, image_id, ("json",))
        return DetectionSet.from_dicts(json.loads(path.read_text()))

    # -- writes (used by fixture builders and tests) --------------------------

    def put_change_mask(self, pre_id: str, cur_id: str, data: bytes) -> Path:
        return self._put("binary_change_detection", f"{pre_id}_{cur_id}", "png", data)

    def put_label_mask(self, image_id: str, data: bytes) -> Path:
        return self._put("semantic_segmentation", image_id, "png", data)

    def put_caption(self, image_id: str, text: str) -> Path:
        return self._put("image_captioning", image_id, "txt", text.encode())

    def put_scene_class(self, image_id: str, text: str) -> Path:
        return self._put("scene_classification", image_id, "txt", text.encode())

    def put_detections(self, image_id: str, detections: DetectionSet, tool: str = "object_detection") -> Path:
        return self._put(tool, image_id, "json", json.dumps(detections.to_dicts(), indent=2).encode())
