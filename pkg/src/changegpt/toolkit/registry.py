"""Tool registry: the closed set of actions the planner may take.

Each tool carries a prompt-rendered description (that text is all the model
sees when choosing tools) and a backing: native calculation, fixture-backed
stub, or remote service.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from ..navigator.session import Session
from .arguments import BadInput
from .fixtures import FixtureStore

BACKING_NATIVE = "native"
BACKING_STUB = "stub"
BACKING_REMOTE = "remote"


class ToolkitError(Exception):
    """Base class for toolkit failures surfaced to the planner."""


class DuplicateName(ToolkitError):
    pass


class EmptyRegistry(ToolkitError):
    pass


class UnknownTool(ToolkitError):
    """The planner picked a name outside the registry."""


@dataclass
class ToolContext:
    """Everything a tool handler may touch during one invocation."""

    session: Session
    fixtures: Optional[FixtureStore]
    min_score: float = 0.5
    min_fraction: float = 0.0

    def require_fixtures(self) -> FixtureStore:
        if self.fixtures is None:
            from .fixtures import FixtureMissing

            raise FixtureMissing("no fixture directory configured")
        return self.fixtures


@dataclass
class ToolResult:
    observation: str
    produced_images: list[str] = field(default_factory=list)


ToolHandler = Callable[[ToolContext, str], ToolResult]


@dataclass(frozen=True)
class ToolSpec:
    name: str
    description: str
    arg_grammar: str
    backing: str  # native | stub | remote
    handler: ToolHandler
    endpoint: str = ""  # remote backing only

    def __post_init__(self) -> None:
        if not self.name or any(c.isspace() for c in self.name):
            raise ValueError(f"tool name must be a whitespace-free token, got {self.name!r}")
        if not self.description:
            raise ValueError("tool description must be non-empty; the model selects tools by it")


@dataclass(frozen=True)
class ToolInvocation:
    tool: str
    input: str
    observation: str
    produced_images: tuple[str, ...]
    duration_ms: float


class ToolRegistry:
    """Ordered, name-unique collection of invocable tools."""

    def __init__(
        self,
        fixtures: Optional[FixtureStore] = None,
        min_score: float = 0.5,
        min_fraction: float = 0.0,
    ) -> None:
        self._tools: dict[str, ToolSpec] = {}
        self._frozen = False
        self.fixtures = fixtures
        self.min_score = min_score
        self.min_fraction = min_fraction

    def register(self, spec: ToolSpec) -> None:
        if self._frozen:
            raise ToolkitError("registry is frozen; tools are fixed at startup")
        if spec.name in self._tools:
            raise DuplicateName(f"tool {spec.name!r} is already registered")
        self._tools[spec.name] = spec

    def freeze(self) -> "ToolRegistry":
        self._frozen = True
        return self

    def names(self) -> list[str]:
        return list(self._tools)

    def get(self, name: str) -> Optional[ToolSpec]:
        return self._tools.get(name)

    def __len__(self) -> int:
        return len(self._tools)

    def render_tool_prompt(self) -> tuple[str, str]:
        """(tools_block, tool_names) for the prompt templates: one
        "name: description" line per tool, and the comma-separated names."""
        if not self._tools:
            raise EmptyRegistry("no tools registered")
        block = "\n".join(f"{t.name}: {t.description}" for t in self._tools.values())
        names = ", ".join(self._tools)
        return block, names

    def invoke(self, session: Session, tool: str, input_text: str) -> ToolInvocation:
        """Execute a registered tool. Raises UnknownTool / BadInput /
        FixtureMissing; those are planner-visible errors, not crashes."""
        spec = self._tools.get(tool)
        if spec is None:
            raise UnknownTool(
                f"tool {tool!r} is not in the toolkit (available: {', '.join(self._tools)})"
            )
        context = ToolContext(
            session=session,
            fixtures=self.fixtures,
            min_score=self.min_score,
            min_fraction=self.min_fraction,
        )
        started = session.now()
        result = spec.handler(context, input_text)
        if not result.observation:
            raise ToolkitError(f"tool {tool!r} returned an empty observation")
        duration_ms = (session.now() - started) * 1000.0
        return ToolInvocation(
            tool=tool,
            input=input_text,
            observation=result.observation,
            produced_images=tuple(result.produced_images),
            duration_ms=duration_ms,
        )


__all__ = [
    "BACKING_NATIVE",
    "BACKING_REMOTE",
    "BACKING_STUB",
    "BadInput",
    "DuplicateName",
    "EmptyRegistry",
    "ToolContext",
    "ToolHandler",
    "ToolInvocation",
    "ToolRegistry",
    "ToolResult",
    "ToolSpec",
    "ToolkitError",
    "UnknownTool",
]
