"""Tool-selection and answer metrics.

Precision and recall score the agent's tool choices against the tools a
question actually needs; Match is the fraction of questions answered
correctly. Tool multisets are compared per-name by multiplicity, so a
pipeline that legitimately needs pixel counting twice is only satisfied by
two pixel-counting calls.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Mapping, Optional, Union

ToolMultiset = Union[Mapping[str, int], Iterable[str]]

EASY = "Easy"
MEDIUM = "Medium"
DIFFICULT = "Difficult"

MISUNDERSTOOD = "Misunderstood"
INSUFFICIENT_TOOLS = "InsufficientTools"
INCORRECT_TOOLS = "IncorrectTools"
TOO_COMPLEX = "TooComplex"

ERROR_CLASSES = (MISUNDERSTOOD, INSUFFICIENT_TOOLS, INCORRECT_TOOLS, TOO_COMPLEX)


class EmptyRequirement(ValueError):
    pass


class EmptySet(ValueError):
    pass


def _as_counter(tools: ToolMultiset) -> Counter:
    if isinstance(tools, Mapping):
        return Counter(dict(tools))
    return Counter(tools)


def intersection_size(used: ToolMultiset, required: ToolMultiset) -> int:
    used_c, required_c = _as_counter(used), _as_counter(required)
    return sum((used_c & required_c).values())


def precision(used: ToolMultiset, required: ToolMultiset) -> float:
    """Right tool selections over all tool selections; 0 when the agent
    used nothing at all (it failed to apply any tool)."""
    used_c = _as_counter(used)
    total_used = sum(used_c.values())
    if total_used == 0:
        return 0.0
    return intersection_size(used_c, required) / total_used


def recall(used: ToolMultiset, required: ToolMultiset) -> float:
    """Right tool selections over the tools actually needed."""
    required_c = _as_counter(required)
    total_required = sum(required_c.values())
    if total_required == 0:
        raise EmptyRequirement("a question must require at least one tool")
    return intersection_size(used, required_c) / total_required


def match_rate(correct_flags: Iterable[bool]) -> float:
    flags = list(correct_flags)
    if not flags:
        raise EmptySet("match rate needs at least one record")
    return sum(flags) / len(flags)


def bucket_difficulty(required: ToolMultiset) -> str:
    """Easy = one tool, Medium = two, Difficult = more than two."""
    count = sum(_as_counter(required).values())
    if count <= 0:
        raise EmptyRequirement("a question must require at least one tool")
    if count == 1:
        return EASY
    if count == 2:
        return MEDIUM
    return DIFFICULT


def classify_error(precision_value: float, recall_value: float, correct: bool) -> Optional[str]:
    """Failure class of a wrongly answered question, from its (P, R).

    Order of the rules matters: both-zero reads as a query too complex to
    plan at all; both-perfect means the plan was right but the semantics
    were misunderstood; otherwise the smaller side names the defect. The
    P == R in (0, 1) case (outside the published taxonomy) is treated as
    IncorrectTools since irrelevant selections are observably present.
    """
    if correct:
        return None
    if precision_value == 0.0 and recall_value == 0.0:
        return TOO_COMPLEX
    if precision_value == 1.0 and recall_value == 1.0:
        return MISUNDERSTOOD
    if recall_value < precision_value:
        return INSUFFICIENT_TOOLS
    return INCORRECT_TOOLS


def estimate_latency(
    tool_count: int,
    tool_time_s: tuple[float, float],
    api_time_s: tuple[float, float],
) -> tuple[int, tuple[float, float]]:
    """(api rounds, total latency range in seconds).

    Rounds = tools + 2: one round to plan each tool call, plus the opening
    round and the final-answer round. Total = tool inference time plus one
    API round-trip per round.
    """
    if tool_count < 1:
        raise ValueError("tool_count must be >= 1")
    rounds = tool_count + 2
    low = tool_count * tool_time_s[0] + rounds * api_time_s[0]
    high = tool_count * tool_time_s[1] + rounds * api_time_s[1]
    return rounds, (low, high)
