"""A session: the image registry, reference log and dialogue history that
one conversation accumulates.

Sessions own all mutable state of the agent. One session serves one query
at a time; separate sessions share nothing and may run concurrently.
"""

from __future__ import annotations

import json
import random
import time
from pathlib import Path
from typing import Callable, Optional

from ..raster.png import BadImage, crop_png, png_dimensions
from ..raster.types import CropRegion, DimensionMismatch
from . import naming
from .records import (
    LOG_IMAGE_REGISTERED,
    DialogueTurn,
    ImageRecord,
    LogEntry,
)

Clock = Callable[[], float]


class TickClock:
    """Deterministic clock advancing a fixed step per reading. Used for
    scripted replays so traces (which carry timings) are reproducible."""

    def __init__(self, step_s: float = 0.001) -> None:
        self._now = 0.0
        self._step = step_s

    def __call__(self) -> float:
        self._now += self._step
        return self._now


class UnknownImage(Exception):
    """An image reference that resolves to nothing in this session."""


class UnknownParent(UnknownImage):
    """A crop or derived registration naming an unregistered parent."""


class Session:
    """Image registry + reference log + dialogue history for one dialogue."""

    def __init__(self, seed: int = 0, clock: Optional[Clock] = None) -> None:
        self._rng = random.Random(seed)
        self._clock: Clock = clock if clock is not None else time.monotonic
        self._records: dict[str, ImageRecord] = {}
        self._bytes: dict[str, bytes] = {}
        self._issued_ids: set[str] = set()
        self.log_entries: list[LogEntry] = []
        self.turns: list[DialogueTurn] = []

    # -- ids ---------------------------------------------------------------

    def mint_id(self, data: Optional[bytes] = None, salt: bytes = b"") -> str:
        """A fresh 6-char hex id, unique within this session. With `data`
        the id is content-derived so reruns name images identically."""
        if data is not None:
            new_id = naming.derive_id(data, self._issued_ids, salt=salt)
        else:
            new_id = naming.random_id(self._rng, self._issued_ids)
        self._issued_ids.add(new_id)
        return new_id

    def now(self) -> float:
        return self._clock()

    # -- logging -----------------------------------------------------------

    def log(self, kind: str, payload: str) -> None:
        self.log_entries.append(LogEntry(timestamp=self._clock(), kind=kind, payload=payload))

    # -- registration ------------------------------------------------------

    def register_image(
        self, data: bytes, role: str, pair_id: Optional[str] = None
    ) -> ImageRecord:
        """Store an uploaded pre or cur image. A cur upload may name the pair
        id of an already-registered pre, which pins the pairing and enforces
        matching dimensions."""
        if role not in (naming.ROLE_PRE, naming.ROLE_CUR):
            raise ValueError(f"role must be 'pre' or 'cur', got {role!r}")
        width, height = png_dimensions(data)  # raises BadImage on bad bytes
        if pair_id is None:
            pair_id = self.mint_id(data, salt=b"pair:")
        else:
            counterpart = self._pair_counterpart(pair_id, role)
            if counterpart is not None and (counterpart.width, counterpart.height) != (width, height):
                raise DimensionMismatch(
                    f"{role} image is {width}x{height} but its counterpart "
                    f"{counterpart.filename} is {counterpart.width}x{counterpart.height}"
                )
        self_id = self.mint_id(data)
        record = ImageRecord(
            self_id=self_id, link_id=pair_id, role_token=role, width=width, height=height
        )
        self._store(record, data)
        return record

    def crop_and_register(self, parent_ref: str, region: CropRegion) -> ImageRecord:
        """Crop a registered pre/cur image; the crop keeps its parent's
        temporal side via the crppre/crpcur role token."""
        parent = self.get(parent_ref)
        if parent is None:
            raise UnknownParent(f"no registered image matches {parent_ref!r}")
        token = naming.crop_token_for(parent.role_token)
        cropped = crop_png(self._bytes[parent.self_id], region)  # raises OutOfBounds
        self_id = self.mint_id(cropped)
        record = ImageRecord(
            self_id=self_id,
            link_id=parent.self_id,
            role_token=token,
            width=region.w,
            height=region.h,
            crop_region=region,
        )
        self._store(record, cropped)
        return record

    def register_derived(self, parent_ref: str, tag: str, data: bytes) -> ImageRecord:
        """Store a tool-produced image under `{id}_{parent}_{tag}.png`."""
        parent = self.get(parent_ref)
        if parent is None:
            raise UnknownParent(f"no registered image matches {parent_ref!r}")
        naming.validate_tag(tag)
        width, height = png_dimensions(data)
        self_id = self.mint_id(data)
        record = ImageRecord(
            self_id=self_id, link_id=parent.self_id, role_token=tag, width=width, height=height
        )
        self._store(record, data)
        return record

    def _store(self, record: ImageRecord, data: bytes) -> None:
        self._records[record.self_id] = record
        self._bytes[record.self_id] = data
        self.log(LOG_IMAGE_REGISTERED, record.filename)

    def _pair_counterpart(self, pair_id: str, role: str) -> Optional[ImageRecord]:
        other = naming.ROLE_CUR if role == naming.ROLE_PRE else naming.ROLE_PRE
        for record in self._records.values():
            if record.link_id == pair_id and record.role_token == other:
                return record
        return None

    # -- lookup ------------------------------------------------------------

    def get(self, reference: str) -> Optional[ImageRecord]:
        """Resolve a self id, a filename, or a filename stem to a record."""
        stem = naming.reference_stem(reference)
        if stem is None:
            return None
        if stem in self._records:
            return self._records[stem]
        try:
            self_id, _, _ = naming.parse_filename(stem + ".png")
        except naming.BadName:
            return None
        return self._records.get(self_id)

    def bytes_of(self, reference: str) -> bytes:
        record = self.get(reference)
        if record is None:
            raise UnknownImage(f"no registered image matches {reference!r}")
        return self._bytes[record.self_id]

    def records(self) -> list[ImageRecord]:
        """All records in registration order."""
        return list(self._records.values())

    def derived_records(self) -> list[ImageRecord]:
        return [r for r in self._records.values() if r.is_derived]

    def lineage(self, reference: str) -> list[ImageRecord]:
        """Chain from a record up through its parents to a pre/cur root."""
        record = self.get(reference)
        if record is None:
            raise UnknownImage(f"no registered image matches {reference!r}")
        chain = [record]
        seen = {record.self_id}
        while not (record.is_pre or record.is_cur):
            parent = self._records.get(record.link_id)
            if parent is None:
                raise UnknownParent(f"{record.filename} names unregistered parent {record.link_id}")
            if parent.self_id in seen:
                raise UnknownParent(f"lineage cycle at {parent.filename}")
            seen.add(parent.self_id)
            chain.append(parent)
            record = parent
        return chain

    # -- dialogue history ----------------------------------------------------

    def add_turn(self, query: str, answer: str) -> None:
        self.turns.append(DialogueTurn(query=query, answer=answer))

    def history_view(self, round_number: Optional[int] = None) -> list[DialogueTurn]:
        """Turns visible at `round_number` (1-based): exactly the rounds
        before it. Without an argument, everything recorded so far."""
        if round_number is None:
            return list(self.turns)
        return list(self.turns[: max(round_number - 1, 0)])

    # -- persistence ---------------------------------------------------------

    def export_dir(self, path: Path) -> None:
        path = Path(path)
        (path / "images").mkdir(parents=True, exist_ok=True)
        state = {
            "records": [r.to_dict() for r in self._records.values()],
            "issued_ids": sorted(self._issued_ids),
            "log": [e.to_dict() for e in self.log_entries],
            "turns": [t.to_dict() for t in self.turns],
        }
        (path / "state.json").write_text(json.dumps(state, indent=2, sort_keys=True))
        for self_id, data in self._bytes.items():
            (path / "images" / self._records[self_id].filename).write_bytes(data)

    @classmethod
    def import_dir(cls, path: Path, seed: int = 0, clock: Optional[Clock] = None) -> "Session":
        path = Path(path)
        state = json.loads((path / "state.json").read_text())
        session = cls(seed=seed, clock=clock)
        for record_data in state["records"]:
            record = ImageRecord.from_dict(record_data)
            session._records[record.self_id] = record
            session._bytes[record.self_id] = (path / "images" / record.filename).read_bytes()
        session._issued_ids = set(state["issued_ids"])
        session.log_entries = [
            LogEntry(timestamp=e["timestamp"], kind=e["kind"], payload=e["payload"])
            for e in state["log"]
        ]
        session.turns = [DialogueTurn(**t) for t in state["turns"]]
        return session


__all__ = ["Session", "UnknownImage", "UnknownParent", "BadImage", "Clock"]
