"""Record types kept by a session: images, reasoning steps, traces, the
reference log and the dialogue history."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from ..raster.types import CropRegion
from . import naming

# How a trace ended.
TRACE_FINAL = "final"
TRACE_STEP_LIMIT = "step_limit"
TRACE_PARSE_FAILURE = "parse_failure"

STEP_LIMIT_ANSWER = "[no answer: step limit exceeded]"
PARSE_FAILURE_ANSWER = "[no answer: model output could not be parsed]"


@dataclass(frozen=True)
class ImageRecord:
    """One stored image: identity, lineage and temporal role."""

    self_id: str
    link_id: str
    role_token: str  # pre | cur | crppre | crpcur | derived tag
    width: int
    height: int
    crop_region: Optional[CropRegion] = None

    @property
    def filename(self) -> str:
        return naming.format_filename(self.self_id, self.link_id, self.role_token)

    @property
    def is_pre(self) -> bool:
        return self.role_token == naming.ROLE_PRE

    @property
    def is_cur(self) -> bool:
        return self.role_token == naming.ROLE_CUR

    @property
    def is_crop(self) -> bool:
        return self.role_token in (naming.ROLE_CROP_PRE, naming.ROLE_CROP_CUR)

    @property
    def is_derived(self) -> bool:
        return self.role_token not in naming.RESERVED_TOKENS

    def to_dict(self) -> dict:
        out = {
            "self_id": self.self_id,
            "link_id": self.link_id,
            "role": self.role_token,
            "filename": self.filename,
            "width": self.width,
            "height": self.height,
        }
        if self.crop_region is not None:
            r = self.crop_region
            out["crop_region"] = {"x": r.x, "y": r.y, "w": r.w, "h": r.h}
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ImageRecord":
        region = None
        if data.get("crop_region"):
            r = data["crop_region"]
            region = CropRegion(r["x"], r["y"], r["w"], r["h"])
        return cls(
            self_id=data["self_id"],
            link_id=data["link_id"],
            role_token=data["role"],
            width=data["width"],
            height=data["height"],
            crop_region=region,
        )


@dataclass
class AgentStep:
    """One reasoning unit: a thought followed by either a tool action (with
    its observation) or the final answer. Exactly one of the two bodies."""

    thought: str
    action: Optional[str] = None
    action_input: Optional[str] = None
    observation: Optional[str] = None
    final_answer: Optional[str] = None
    duration_ms: float = 0.0

    def __post_init__(self) -> None:
        has_action = self.action is not None
        has_final = self.final_answer is not None
        if has_action == has_final:
            raise ValueError("a step carries either an action or a final answer")

    @property
    def is_final(self) -> bool:
        return self.final_answer is not None

    def to_dict(self) -> dict:
        if self.is_final:
            return {"thought": self.thought, "final_answer": self.final_answer}
        return {
            "thought": self.thought,
            "action": self.action,
            "action_input": self.action_input,
            "observation": self.observation,
            "duration_ms": self.duration_ms,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AgentStep":
        if "final_answer" in data:
            return cls(thought=data["thought"], final_answer=data["final_answer"])
        return cls(
            thought=data["thought"],
            action=data["action"],
            action_input=data["action_input"],
            observation=data.get("observation"),
            duration_ms=data.get("duration_ms", 0.0),
        )


@dataclass
class Trace:
    """The ordered reasoning record for one query."""

    steps: list[AgentStep] = field(default_factory=list)
    final_answer: str = ""
    status: str = TRACE_FINAL
    elapsed_ms: float = 0.0

    @property
    def tools_used(self) -> Counter:
        return Counter(s.action for s in self.steps if not s.is_final)

    def tools_used_sequence(self) -> list[str]:
        return [s.action for s in self.steps if not s.is_final]

    def to_dict(self) -> dict:
        return {
            "steps": [s.to_dict() for s in self.steps],
            "tools_used": self.tools_used_sequence(),
            "final_answer": self.final_answer,
            "status": self.status,
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Trace":
        return cls(
            steps=[AgentStep.from_dict(s) for s in data["steps"]],
            final_answer=data["final_answer"],
            status=data["status"],
            elapsed_ms=data.get("elapsed_ms", 0.0),
        )


@dataclass(frozen=True)
class LogEntry:
    """One reference-log line. Kinds: query, step, tool_call,
    image_registered, answer."""

    timestamp: float
    kind: str
    payload: str

    def to_dict(self) -> dict:
        return {"timestamp": self.timestamp, "kind": self.kind, "payload": self.payload}


LOG_QUERY = "query"
LOG_STEP = "step"
LOG_TOOL_CALL = "tool_call"
LOG_IMAGE_REGISTERED = "image_registered"
LOG_ANSWER = "answer"


@dataclass(frozen=True)
class DialogueTurn:
    query: str
    answer: str

    def to_dict(self) -> dict:
        return {"query": self.query, "answer": self.answer}
