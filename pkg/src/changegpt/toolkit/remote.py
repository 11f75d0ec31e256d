"""Adapter for tools served by a remote model process.

One-endpoint JSON contract:

    POST <endpoint>
    request:  {"tool": str, "image_ids": [str, ...], "args": {str: str}}
    response: {"observation": str,
               "images": [{"tag": str, "parent_id": str, "png_base64": str}, ...]}

Returned images are registered as derived records of their named parents, so
remote outputs obey the same naming protocol as stub outputs.
"""

from __future__ import annotations

import base64

import httpx

from .arguments import BadInput, parse_key_values
from .registry import BACKING_REMOTE, ToolContext, ToolResult, ToolSpec


class RemoteToolError(Exception):
    """The remote service failed or replied off-contract."""


def call_remote_tool(
    endpoint: str, tool: str, context: ToolContext, input_text: str, timeout_s: float = 60.0
) -> ToolResult:
    args = parse_key_values(input_text, ("image", "pre", "cur", "class", "min_fraction"))
    image_ids = []
    for key in ("image", "pre", "cur"):
        if key in args:
            record = context.session.get(args[key])
            if record is None:
                raise BadInput(f"unknown image {args[key]!r}")
            image_ids.append(record.self_id)
    body = {"tool": tool, "image_ids": image_ids, "args": args}
    try:
        response = httpx.post(endpoint, json=body, timeout=timeout_s)
    except httpx.HTTPError as exc:
        raise RemoteToolError(f"remote tool {tool!r} unreachable: {exc}") from exc
    if response.status_code != 200:
        raise RemoteToolError(f"remote tool {tool!r} returned HTTP {response.status_code}")
    payload = response.json()
    if "observation" not in payload:
        raise RemoteToolError(f"remote tool {tool!r} reply lacks an observation")
    produced = []
    for item in payload.get("images", []):
        data = base64.b64decode(item["png_base64"])
        record = context.session.register_derived(item["parent_id"], item["tag"], data)
        produced.append(record.self_id)
    return ToolResult(observation=payload["observation"], produced_images=produced)


def remote_spec(name: str, description: str, arg_grammar: str, endpoint: str) -> ToolSpec:
    def handler(context: ToolContext, input_text: str) -> ToolResult:
        return call_remote_tool(endpoint, name, context, input_text)

    return ToolSpec(
        name=name,
        description=description,
        arg_grammar=arg_grammar,
        backing=BACKING_REMOTE,
        handler=handler,
        endpoint=endpoint,
    )
