"""Evaluation runner: drive the agent over a question dataset and score it.

Each question runs in a fresh session. A question whose agent run fails in
any way still yields a record (incorrect, with whatever tools were used up
to the failure); one broken question never aborts a run.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Union

from ..backends import ScriptedBackend
from ..navigator.loop import BackendFailure, run_query
from ..navigator.records import Trace
from ..navigator.session import Session, TickClock
from ..raster.types import CropRegion
from ..toolkit.registry import ToolRegistry
from .dataset import CropSpec, DatasetError, Question, load_dataset
from .judge import judge_answer_safe
from .metrics import (
    ERROR_CLASSES,
    bucket_difficulty,
    classify_error,
    match_rate,
    precision,
    recall,
)

# An agent runner answers one question: (answer, trace).
AgentRunner = Callable[[Question], tuple[str, Trace]]


@dataclass(frozen=True)
class EvalRecord:
    question_id: str
    qtype: str
    subtype: str
    difficulty: str
    tools_used: tuple[str, ...]
    precision: float
    recall: float
    correct: bool
    error_class: Optional[str]
    latency_ms: float
    answer: str
    flag: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "question_id": self.question_id,
            "type": self.qtype,
            "subtype": self.subtype,
            "difficulty": self.difficulty,
            "tools_used": list(self.tools_used),
            "precision": self.precision,
            "recall": self.recall,
            "correct": self.correct,
            "error_class": self.error_class,
            "latency_ms": self.latency_ms,
            "answer": self.answer,
            "flag": self.flag,
        }


@dataclass(frozen=True)
class GroupStats:
    count: int
    precision: float
    recall: float
    match: float

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "precision": self.precision,
            "recall": self.recall,
            "match": self.match,
        }


def _group_stats(records: list[EvalRecord]) -> GroupStats:
    return GroupStats(
        count=len(records),
        precision=sum(r.precision for r in records) / len(records),
        recall=sum(r.recall for r in records) / len(records),
        match=match_rate([r.correct for r in records]),
    )


@dataclass
class EvalReport:
    records: list[EvalRecord] = field(default_factory=list)

    @property
    def totals(self) -> GroupStats:
        return _group_stats(self.records)

    def by_difficulty(self) -> dict[str, GroupStats]:
        out: dict[str, GroupStats] = {}
        for bucket in ("Easy", "Medium", "Difficult"):
            group = [r for r in self.records if r.difficulty == bucket]
            if group:
                out[bucket] = _group_stats(group)
        return out

    def by_type(self) -> dict[str, GroupStats]:
        out: dict[str, GroupStats] = {}
        for record in self.records:
            key = f"{record.qtype}/{record.subtype}"
            if key not in out:
                group = [
                    r
                    for r in self.records
                    if (r.qtype, r.subtype) == (record.qtype, record.subtype)
                ]
                out[key] = _group_stats(group)
        return out

    def error_histogram(self) -> dict[str, int]:
        counts = Counter(r.error_class for r in self.records if r.error_class)
        return {name: counts.get(name, 0) for name in ERROR_CLASSES}

    def to_dict(self) -> dict:
        return {
            "totals": self.totals.to_dict(),
            "by_difficulty": {k: v.to_dict() for k, v in self.by_difficulty().items()},
            "by_type": {k: v.to_dict() for k, v in self.by_type().items()},
            "error_histogram": self.error_histogram(),
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def summary_line(self) -> str:
        t = self.totals
        return (
            f"P={t.precision * 100:.2f} R={t.recall * 100:.2f} "
            f"Match={t.match * 100:.2f} ({t.count} questions)"
        )

    def to_markdown(self) -> str:
        def row(label: str, stats: GroupStats) -> str:
            return (
                f"| {label} | {stats.count} | {stats.precision * 100:.2f} "
                f"| {stats.recall * 100:.2f} | {stats.match * 100:.2f} |"
            )

        lines = [
            "# Evaluation report",
            "",
            "## By difficulty",
            "",
            "| Questions | Count | Precision | Recall | Match |",
            "| --- | --- | --- | --- | --- |",
        ]
        for bucket, stats in self.by_difficulty().items():
            lines.append(row(bucket, stats))
        lines.append(row("Total", self.totals))
        lines += ["", "## By question type", "", "| Type/Subtype | Count | Precision | Recall | Match |", "| --- | --- | --- | --- | --- |"]
        for key, stats in self.by_type().items():
            lines.append(row(key, stats))
        histogram = self.error_histogram()
        lines += ["", "## Error classes", ""]
        if any(histogram.values()):
            lines += ["| Error | Count |", "| --- | --- |"]
            lines += [f"| {name} | {count} |" for name, count in histogram.items() if count]
        else:
            lines.append("No errors.")
        return "\n".join(lines) + "\n"


def score_question(
    question: Question,
    answer: str,
    tools_used: tuple[str, ...],
    latency_ms: float,
) -> EvalRecord:
    p = precision(tools_used, question.required_tools)
    r = recall(tools_used, question.required_tools)
    correct, flag = judge_answer_safe(answer, question.reference)
    return EvalRecord(
        question_id=question.id,
        qtype=question.qtype,
        subtype=question.subtype,
        difficulty=bucket_difficulty(question.required_tools),
        tools_used=tools_used,
        precision=p,
        recall=r,
        correct=correct,
        error_class=classify_error(p, r, correct),
        latency_ms=latency_ms,
        answer=answer,
        flag=flag,
    )


def run_eval(
    dataset: Union[str, Path, list[Question]],
    agent_runner: AgentRunner,
    registry: Optional[ToolRegistry] = None,
    clock: Optional[Callable[[], float]] = None,
) -> EvalReport:
    """Evaluate the agent over a dataset (path or pre-loaded questions)."""
    questions = dataset if isinstance(dataset, list) else load_dataset(dataset)
    if registry is not None:
        known = set(registry.names())
        for question in questions:
            missing = [t for t in question.required_tools if t not in known]
            if missing:
                raise DatasetError(
                    0,
                    f"question {question.id!r} requires unregistered tools: {', '.join(missing)}",
                )
    if clock is None:
        clock = TickClock()

    report = EvalReport()
    for question in questions:
        started = clock()
        try:
            answer, trace = agent_runner(question)
            tools_used = tuple(trace.tools_used_sequence())
        except BackendFailure as exc:
            answer = f"[agent failure: {exc}]"
            tools_used = tuple(exc.trace.tools_used_sequence())
        except Exception as exc:  # noqa: BLE001 - one bad question must not kill the run
            answer = f"[agent failure: {exc}]"
            tools_used = ()
        latency_ms = (clock() - started) * 1000.0
        report.records.append(score_question(question, answer, tools_used, latency_ms))
    return report


def make_scripted_runner(
    scripts_dir: Union[str, Path],
    registry: ToolRegistry,
    image_root: Union[str, Path],
    max_steps: int = 12,
) -> AgentRunner:
    """Agent runner replaying per-question completion scripts
    (<scripts_dir>/<question_id>.json) against the given registry."""
    scripts_dir = Path(scripts_dir)
    image_root = Path(image_root)

    def runner(question: Question) -> tuple[str, Trace]:
        session = Session(clock=TickClock())
        prepare_session(session, question, image_root)
        backend = ScriptedBackend.from_file(scripts_dir / f"{question.id}.json")
        return run_query(session, question.text, backend, registry, max_steps=max_steps)

    return runner


def prepare_session(session: Session, question: Question, image_root: Path) -> None:
    """Register the question's image pair (and user crop) exactly as the
    application layer would before the query is posed."""
    pre_bytes = (image_root / question.pre_image).read_bytes()
    cur_bytes = (image_root / question.cur_image).read_bytes()
    stage_session(session, pre_bytes, cur_bytes, question.crop)


def stage_session(
    session: Session,
    pre_bytes: bytes,
    cur_bytes: bytes,
    crop: Optional[CropSpec] = None,
) -> tuple:
    """(pre record, cur record, crop records). The one canonical staging
    order; anything that must predict session ids replays exactly this."""
    pre = session.register_image(pre_bytes, "pre")
    cur = session.register_image(cur_bytes, "cur", pair_id=pre.link_id)
    crops = apply_crop(session, crop) if crop is not None else []
    return pre, cur, crops


def apply_crop(session: Session, crop: CropSpec) -> list:
    region: CropRegion = crop.region
    produced = []
    for record in list(session.records()):
        if crop.parent in ("pre", "both") and record.is_pre:
            produced.append(session.crop_and_register(record.self_id, region))
        if crop.parent in ("cur", "both") and record.is_cur:
            produced.append(session.crop_and_register(record.self_id, region))
    return produced
