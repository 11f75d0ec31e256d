"""Evaluation harness: dataset schema, metrics, judging, stats, runner."""

from .dataset import (
    CropSpec,
    DatasetError,
    Question,
    load_dataset,
    save_dataset,
)
from .judge import AnswerSpec, NoNumberFound, boolean, categorical, checklist, judge_answer, numeric
from .metrics import (
    DIFFICULT,
    EASY,
    ERROR_CLASSES,
    INCORRECT_TOOLS,
    INSUFFICIENT_TOOLS,
    MEDIUM,
    MISUNDERSTOOD,
    TOO_COMPLEX,
    bucket_difficulty,
    classify_error,
    estimate_latency,
    match_rate,
    precision,
    recall,
)
from .runner import (
    AgentRunner,
    EvalRecord,
    EvalReport,
    make_scripted_runner,
    prepare_session,
    run_eval,
    score_question,
)
from .stats import NoDiscordantPairs, mcnemar

__all__ = [
    "AgentRunner",
    "AnswerSpec",
    "CropSpec",
    "DIFFICULT",
    "DatasetError",
    "EASY",
    "ERROR_CLASSES",
    "EvalRecord",
    "EvalReport",
    "INCORRECT_TOOLS",
    "INSUFFICIENT_TOOLS",
    "MEDIUM",
    "MISUNDERSTOOD",
    "NoDiscordantPairs",
    "NoNumberFound",
    "Question",
    "TOO_COMPLEX",
    "boolean",
    "bucket_difficulty",
    "categorical",
    "checklist",
    "classify_error",
    "estimate_latency",
    "judge_answer",
    "load_dataset",
    "make_scripted_runner",
    "match_rate",
    "mcnemar",
    "numeric",
    "precision",
    "prepare_session",
    "recall",
    "run_eval",
    "save_dataset",
    "score_question",
]
