"""Parsing of model completions into agent steps.

The model replies in the Thought / Action / Action Input / Final Answer
text protocol. Anything the model writes after an "Observation:" marker is
a fabricated tool result and is discarded before parsing; real observations
only ever enter a trace through tool execution.
"""

from __future__ import annotations

import re
from typing import Iterable

from .records import AgentStep

THOUGHT_RE = re.compile(r"Thought\s*:", re.IGNORECASE)
ACTION_RE = re.compile(r"^\s*Action\s*:", re.IGNORECASE | re.MULTILINE)
ACTION_INPUT_RE = re.compile(r"^\s*Action\s+Input\s*:", re.IGNORECASE | re.MULTILINE)
FINAL_ANSWER_RE = re.compile(r"Final\s+Answer\s*:", re.IGNORECASE)
OBSERVATION_RE = re.compile(r"Observation\s*:", re.IGNORECASE)


class MalformedStep(Exception):
    """A completion that fits neither the action nor the final-answer shape."""

    def __init__(self, message: str, completion: str) -> None:
        super().__init__(message)
        self.completion = completion


def strip_fabricated_observations(completion: str) -> str:
    """Cut the completion at the first Observation marker."""
    match = OBSERVATION_RE.search(completion)
    return completion[: match.start()] if match else completion


def normalize_tool_name(raw: str, registered: Iterable[str]) -> str:
    """Trim and case-fold the model's action token; when it matches a
    registered tool up to case, return the canonical registered name."""
    name = raw.strip().strip("'\"`").casefold()
    for canonical in registered:
        if canonical.casefold() == name:
            return canonical
    return name


def parse_step(completion: str, registered_tools: Iterable[str]) -> AgentStep:
    """Extract one AgentStep from a completion.

    Takes the first Thought, then whichever of Action / Final Answer comes
    first. Raises MalformedStep when the required markers are missing.
    """
    text = strip_fabricated_observations(completion)

    thought_match = THOUGHT_RE.search(text)
    if not thought_match:
        raise MalformedStep("completion has no Thought", completion)
    after_thought = text[thought_match.end():]

    action_match = ACTION_RE.search(after_thought)
    final_match = FINAL_ANSWER_RE.search(after_thought)

    thought_end = len(after_thought)
    for match in (action_match, final_match):
        if match:
            thought_end = min(thought_end, match.start())
    thought = after_thought[:thought_end].strip()

    if final_match and (not action_match or final_match.start() < action_match.start()):
        answer = after_thought[final_match.end():].strip()
        return AgentStep(thought=thought, final_answer=answer)

    if action_match:
        after_action = after_thought[action_match.end():]
        input_match = ACTION_INPUT_RE.search(after_action)
        if not input_match:
            raise MalformedStep("Action without Action Input", completion)
        raw_name = after_action[: input_match.start()]
        action = normalize_tool_name(raw_name, registered_tools)
        if not action:
            raise MalformedStep("empty Action", completion)
        action_input = after_action[input_match.end():].strip()
        # a later Thought line belongs to the next round, not to the input
        next_thought = THOUGHT_RE.search(action_input)
        if next_thought:
            action_input = action_input[: next_thought.start()].strip()
        return AgentStep(thought=thought, action=action, action_input=action_input)

    raise MalformedStep("completion has neither Action nor Final Answer", completion)
