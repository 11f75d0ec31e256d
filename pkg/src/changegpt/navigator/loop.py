"""The reasoning loop: prompt the model, parse its step, execute the tool,
feed the observation back, until it commits to a final answer.

Tool-level failures (unknown tool, bad arguments, missing fixture) are fed
back to the model as error observations so it can correct course; they are
not crashes. Malformed completions get one corrective re-prompt; a second
consecutive failure aborts the query.
"""

from __future__ import annotations

from typing import Optional, Tuple

from ..backends import Backend, BackendError, CompletionRequest, OBSERVATION_STOP
from ..raster.png import BadImage
from ..raster.types import RasterError
from ..toolkit.arguments import BadInput
from ..toolkit.fixtures import FixtureMissing
from ..toolkit.registry import ToolRegistry, ToolkitError
from ..toolkit.remote import RemoteToolError
from . import naming
from .parsing import MalformedStep, parse_step
from .prompts import PromptBundle, assemble_bundle
from .records import (
    LOG_ANSWER,
    LOG_QUERY,
    LOG_STEP,
    LOG_TOOL_CALL,
    PARSE_FAILURE_ANSWER,
    STEP_LIMIT_ANSWER,
    TRACE_FINAL,
    TRACE_PARSE_FAILURE,
    TRACE_STEP_LIMIT,
    Trace,
)
from .session import Session, UnknownImage

DEFAULT_MAX_STEPS = 12

# Failures a tool may legitimately signal; they become error observations.
TOOL_ERRORS = (
    ToolkitError,
    BadInput,
    FixtureMissing,
    RemoteToolError,
    RasterError,
    BadImage,
    UnknownImage,
    naming.BadName,
)


class BackendFailure(Exception):
    """The completion provider failed; carries the partial trace."""

    def __init__(self, message: str, trace: Trace) -> None:
        super().__init__(message)
        self.trace = trace


def assemble_prompt(
    session: Session,
    query: str,
    trace: Trace,
    registry: ToolRegistry,
    correction: str = "",
) -> PromptBundle:
    tools_block, tool_names = registry.render_tool_prompt()
    return assemble_bundle(
        records=session.records(),
        derived=session.derived_records(),
        log_entries=session.log_entries,
        turns=session.history_view(),
        tools_block=tools_block,
        tool_names=tool_names,
        query=query,
        steps=[s for s in trace.steps if not s.is_final],
        correction=correction,
    )


def run_query(
    session: Session,
    query: str,
    backend: Backend,
    registry: ToolRegistry,
    max_steps: int = DEFAULT_MAX_STEPS,
    temperature: float = 0.0,
) -> Tuple[str, Trace]:
    """Answer one query; returns (answer, trace). The trace records every
    step whether the run ends in an answer or a failure marker."""
    if not session.records():
        raise ValueError("a query needs at least one registered image")

    trace = Trace()
    started = session.now()
    session.log(LOG_QUERY, query)
    correction = ""
    malformed_streak = 0

    for _ in range(max_steps):
        bundle = assemble_prompt(session, query, trace, registry, correction)
        request = CompletionRequest(
            prompt=bundle.full_text,
            stop_sequences=(OBSERVATION_STOP,),
            temperature=temperature,
        )
        try:
            completion = backend.complete(request)
        except BackendError as exc:
            trace.status = TRACE_STEP_LIMIT
            trace.elapsed_ms = (session.now() - started) * 1000.0
            raise BackendFailure(str(exc), trace) from exc

        try:
            step = parse_step(completion, registry.names())
        except MalformedStep as exc:
            malformed_streak += 1
            session.log(LOG_STEP, f"malformed completion: {exc}")
            if malformed_streak >= 2:
                return _finish(
                    session, query, trace, PARSE_FAILURE_ANSWER, TRACE_PARSE_FAILURE, started
                )
            correction = exc.completion
            continue

        malformed_streak = 0
        correction = ""

        if step.is_final:
            trace.steps.append(step)
            session.log(LOG_STEP, f"final answer: {step.final_answer}")
            return _finish(session, query, trace, step.final_answer, TRACE_FINAL, started)

        session.log(LOG_STEP, f"action {step.action}({step.action_input})")
        call_started = session.now()
        try:
            invocation = registry.invoke(session, step.action, step.action_input)
            step.observation = invocation.observation
            step.duration_ms = invocation.duration_ms
        except TOOL_ERRORS as exc:
            step.observation = f"Error: {exc}"
            step.duration_ms = (session.now() - call_started) * 1000.0
        session.log(LOG_TOOL_CALL, f"{step.action}({step.action_input}) -> {step.observation}")
        trace.steps.append(step)

    return _finish(session, query, trace, STEP_LIMIT_ANSWER, TRACE_STEP_LIMIT, started)


def _finish(
    session: Session,
    query: str,
    trace: Trace,
    answer: str,
    status: str,
    started: float,
) -> Tuple[str, Trace]:
    trace.final_answer = answer
    trace.status = status
    trace.elapsed_ms = (session.now() - started) * 1000.0
    session.add_turn(query, answer)
    session.log(LOG_ANSWER, answer)
    return answer, trace


def history_view(session: Session, round_number: Optional[int] = None):
    return session.history_view(round_number)
