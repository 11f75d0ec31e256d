"""Executing layer: tool registry, argument grammar, stubs and remote adapter."""

from .arguments import BadInput
from .fixtures import FixtureMissing, FixtureStore
from .registry import (
    DuplicateName,
    EmptyRegistry,
    ToolContext,
    ToolInvocation,
    ToolRegistry,
    ToolResult,
    ToolSpec,
    ToolkitError,
    UnknownTool,
)
from .tools import TAG_CHANGEMAP, TAG_LANDUSE, build_default_registry, default_specs

__all__ = [
    "BadInput",
    "DuplicateName",
    "EmptyRegistry",
    "FixtureMissing",
    "FixtureStore",
    "TAG_CHANGEMAP",
    "TAG_LANDUSE",
    "ToolContext",
    "ToolInvocation",
    "ToolRegistry",
    "ToolResult",
    "ToolSpec",
    "ToolkitError",
    "UnknownTool",
    "build_default_registry",
    "default_specs",
]
