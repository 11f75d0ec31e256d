"""Planning navigator: naming protocol, sessions, prompts, parsing, loop."""

from . import naming
from .loop import BackendFailure, DEFAULT_MAX_STEPS, assemble_prompt, run_query
from .parsing import MalformedStep, parse_step
from .prompts import (
    CHANGEGPT_FORMAT_INSTRUCTIONS,
    CHANGEGPT_PREFIX,
    CHANGEGPT_SUFFIX,
    PromptBundle,
)
from .records import (
    AgentStep,
    DialogueTurn,
    ImageRecord,
    LogEntry,
    PARSE_FAILURE_ANSWER,
    STEP_LIMIT_ANSWER,
    TRACE_FINAL,
    TRACE_PARSE_FAILURE,
    TRACE_STEP_LIMIT,
    Trace,
)
from .session import Session, UnknownImage, UnknownParent

__all__ = [
    "AgentStep",
    "BackendFailure",
    "CHANGEGPT_FORMAT_INSTRUCTIONS",
    "CHANGEGPT_PREFIX",
    "CHANGEGPT_SUFFIX",
    "DEFAULT_MAX_STEPS",
    "DialogueTurn",
    "ImageRecord",
    "LogEntry",
    "MalformedStep",
    "PARSE_FAILURE_ANSWER",
    "PromptBundle",
    "STEP_LIMIT_ANSWER",
    "Session",
    "TRACE_FINAL",
    "TRACE_PARSE_FAILURE",
    "TRACE_STEP_LIMIT",
    "Trace",
    "UnknownImage",
    "UnknownParent",
    "assemble_prompt",
    "naming",
    "parse_step",
    "run_query",
]
