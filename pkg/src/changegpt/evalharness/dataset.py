"""Question dataset: schema and JSON Lines loading.

One question per line: id, type/subtype from the taxonomy, the question
text, the pre/cur image paths with an optional crop instruction, the tool
multiset a correct pipeline needs, and the reference answer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from ..raster.types import CropRegion
from .judge import AnswerSpec

QTYPE_WHETHER = "Whether"
QTYPE_SIZE = "Size"
QTYPE_NUMBER = "Number"
QTYPE_CLASS = "Class"

LEGAL_SUBTYPES = {
    QTYPE_WHETHER: ("/",),
    QTYPE_SIZE: ("Basic", "Certain Class", "Local Area", "Analysis"),
    QTYPE_NUMBER: ("Basic", "Local Area", "Comparison"),
    QTYPE_CLASS: ("Whole Image", "Local Area"),
}

CROP_PARENTS = ("pre", "cur", "both")


class DatasetError(Exception):
    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"dataset line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class CropSpec:
    region: CropRegion
    parent: str  # pre | cur | both

    def to_dict(self) -> dict:
        return {
            "x": self.region.x,
            "y": self.region.y,
            "w": self.region.w,
            "h": self.region.h,
            "parent": self.parent,
        }


@dataclass(frozen=True)
class Question:
    id: str
    qtype: str
    subtype: str
    text: str
    pre_image: str
    cur_image: str
    required_tools: tuple[str, ...]
    reference: AnswerSpec
    crop: Optional[CropSpec] = None

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "type": self.qtype,
            "subtype": self.subtype,
            "text": self.text,
            "images": {"pre": self.pre_image, "cur": self.cur_image},
            "required_tools": list(self.required_tools),
            "reference": self.reference.to_dict(),
        }
        if self.crop is not None:
            out["crop"] = self.crop.to_dict()
        return out


def _parse_question(data: dict, line: int) -> Question:
    def fail(reason: str) -> DatasetError:
        return DatasetError(line, reason)

    for key in ("id", "type", "subtype", "text", "images", "required_tools", "reference"):
        if key not in data:
            raise fail(f"missing field {key!r}")
    qtype = data["type"]
    if qtype not in LEGAL_SUBTYPES:
        raise fail(f"unknown question type {qtype!r}")
    subtype = data["subtype"]
    if subtype not in LEGAL_SUBTYPES[qtype]:
        raise fail(
            f"subtype {subtype!r} is not legal for type {qtype!r} "
            f"(legal: {', '.join(LEGAL_SUBTYPES[qtype])})"
        )
    images = data["images"]
    if not isinstance(images, dict) or "pre" not in images or "cur" not in images:
        raise fail("images must carry 'pre' and 'cur' paths")
    tools = data["required_tools"]
    if not isinstance(tools, list) or not tools or not all(isinstance(t, str) for t in tools):
        raise fail("required_tools must be a non-empty list of tool names")
    try:
        reference = AnswerSpec.from_dict(data["reference"])
    except (KeyError, TypeError, ValueError) as exc:
        raise fail(f"bad reference answer: {exc}") from exc

    crop = None
    if data.get("crop") is not None:
        c = data["crop"]
        try:
            region = CropRegion(int(c["x"]), int(c["y"]), int(c["w"]), int(c["h"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise fail(f"bad crop spec: {exc}") from exc
        parent = c.get("parent", "both")
        if parent not in CROP_PARENTS:
            raise fail(f"crop parent must be one of {CROP_PARENTS}, got {parent!r}")
        crop = CropSpec(region=region, parent=parent)

    return Question(
        id=str(data["id"]),
        qtype=qtype,
        subtype=subtype,
        text=data["text"],
        pre_image=images["pre"],
        cur_image=images["cur"],
        required_tools=tuple(tools),
        reference=reference,
        crop=crop,
    )


def load_dataset(path: Union[str, Path]) -> list[Question]:
    path = Path(path)
    if not path.exists():
        raise DatasetError(0, f"dataset file {path} does not exist")
    questions = []
    seen_ids = set()
    for number, raw in enumerate(path.read_text().splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise DatasetError(number, f"invalid JSON: {exc}") from exc
        question = _parse_question(data, number)
        if question.id in seen_ids:
            raise DatasetError(number, f"duplicate question id {question.id!r}")
        seen_ids.add(question.id)
        questions.append(question)
    if not questions:
        raise DatasetError(0, f"dataset file {path} holds no questions")
    return questions


def save_dataset(questions: list[Question], path: Union[str, Path]) -> None:
    lines = [json.dumps(q.to_dict(), sort_keys=True) for q in questions]
    Path(path).write_text("\n".join(lines) + "\n")
