"""Answer judging: does the agent's free-text answer satisfy a reference?

Four matcher kinds cover the question taxonomy: yes/no questions, numeric
answers within a tolerance, categorical answers (any accepted name must
appear), and checklists of sub-matchers for analytical answers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

KIND_BOOLEAN = "boolean"
KIND_NUMERIC = "numeric"
KIND_CATEGORICAL = "categorical"
KIND_CHECKLIST = "checklist"

YES_TOKENS = {"yes", "yep", "yeah", "true", "correct", "affirmative"}
NO_TOKENS = {"no", "nope", "false", "negative"}

# 12.5, -3, +4.2e1, .5, "25 %"...
NUMBER_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


class NoNumberFound(Exception):
    """A numeric reference but no parseable number in the answer."""


@dataclass(frozen=True)
class AnswerSpec:
    kind: str
    expected_bool: Optional[bool] = None
    value: Optional[float] = None
    tolerance: float = 0.0
    accepted: tuple[str, ...] = ()
    items: tuple["AnswerSpec", ...] = field(default=())

    def to_dict(self) -> dict:
        if self.kind == KIND_BOOLEAN:
            return {"kind": self.kind, "expected": self.expected_bool}
        if self.kind == KIND_NUMERIC:
            return {"kind": self.kind, "value": self.value, "tolerance": self.tolerance}
        if self.kind == KIND_CATEGORICAL:
            return {"kind": self.kind, "accepted": list(self.accepted)}
        return {"kind": self.kind, "items": [i.to_dict() for i in self.items]}

    @classmethod
    def from_dict(cls, data: dict) -> "AnswerSpec":
        kind = data["kind"]
        if kind == KIND_BOOLEAN:
            return boolean(bool(data["expected"]))
        if kind == KIND_NUMERIC:
            return numeric(float(data["value"]), float(data.get("tolerance", 0.0)))
        if kind == KIND_CATEGORICAL:
            return categorical(*data["accepted"])
        if kind == KIND_CHECKLIST:
            return checklist(*(cls.from_dict(i) for i in data["items"]))
        raise ValueError(f"unknown answer kind {kind!r}")


def boolean(expected: bool) -> AnswerSpec:
    return AnswerSpec(kind=KIND_BOOLEAN, expected_bool=expected)


def numeric(value: float, tolerance: float = 0.0) -> AnswerSpec:
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")
    return AnswerSpec(kind=KIND_NUMERIC, value=value, tolerance=tolerance)


def categorical(*accepted: str) -> AnswerSpec:
    if not accepted:
        raise ValueError("categorical spec needs at least one accepted name")
    return AnswerSpec(kind=KIND_CATEGORICAL, accepted=tuple(accepted))


def checklist(*items: AnswerSpec) -> AnswerSpec:
    if not items:
        raise ValueError("checklist spec needs at least one item")
    return AnswerSpec(kind=KIND_CHECKLIST, items=tuple(items))


def _normalize(text: str) -> str:
    return re.sub(r"[^a-z0-9%.+-]+", " ", text.casefold()).strip()


def _judge_boolean(answer: str, expected: bool) -> bool:
    tokens = [t.strip(".%+-") for t in _normalize(answer).split()]
    saw_yes = any(t in YES_TOKENS for t in tokens)
    saw_no = any(t in NO_TOKENS for t in tokens)
    if saw_yes == saw_no:
        return False  # ambiguous or silent answers never pass
    return saw_yes if expected else saw_no


def _judge_numeric(answer: str, value: float, tolerance: float) -> bool:
    match = NUMBER_RE.search(answer)
    if not match:
        raise NoNumberFound(f"no number in answer {answer!r}")
    found = float(match.group(0))
    # relative tolerance for magnitudes beyond 1, absolute near zero
    bound = tolerance * abs(value) if abs(value) > 1.0 else tolerance
    return abs(found - value) <= bound


def _judge_categorical(answer: str, accepted: tuple[str, ...]) -> bool:
    haystack = _normalize(answer)
    return any(_normalize(name) in haystack for name in accepted)


def judge_answer(answer: str, spec: AnswerSpec) -> bool:
    """True iff the answer satisfies the reference. Deterministic and pure."""
    if spec.kind == KIND_BOOLEAN:
        return _judge_boolean(answer, bool(spec.expected_bool))
    if spec.kind == KIND_NUMERIC:
        return _judge_numeric(answer, float(spec.value), spec.tolerance)
    if spec.kind == KIND_CATEGORICAL:
        return _judge_categorical(answer, spec.accepted)
    if spec.kind == KIND_CHECKLIST:
        return all(judge_answer(answer, item) for item in spec.items)
    raise ValueError(f"unknown answer kind {spec.kind!r}")


def judge_answer_safe(answer: str, spec: AnswerSpec) -> tuple[bool, Optional[str]]:
    """(correct, flag). NoNumberFound judges as incorrect but is flagged."""
    try:
        return judge_answer(answer, spec), None
    except NoNumberFound as exc:
        return False, str(exc)
