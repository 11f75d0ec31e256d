"""Completion providers.

Two interchangeable backends drive the reasoning loop: a scripted backend
that replays a fixed list of completions (the reproducible test double) and
a live chat-completions client for real models. A recording wrapper turns
any live session into a replayable script.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Protocol, Union

import httpx

# The model must never invent tool results, so generation always stops
# before it can write one.
OBSERVATION_STOP = "Observation:"

ENV_BASE_URL = "CHANGEGPT_BASE_URL"
ENV_API_KEY = "CHANGEGPT_API_KEY"
ENV_MODEL = "CHANGEGPT_MODEL"

DEFAULT_SYSTEM_MESSAGE = (
    "You are ChangeGPT, an assistant that answers queries about changes in "
    "remote sensing image pairs by invoking the tools you are given. Follow "
    "the requested reply format exactly."
)


class BackendError(Exception):
    """Base class for completion-provider failures."""


class ScriptExhausted(BackendError):
    """The scripted backend was asked for more completions than it holds."""


class HttpError(BackendError):
    def __init__(self, status: int, body: str) -> None:
        super().__init__(f"backend HTTP {status}: {body[:200]}")
        self.status = status
        self.body = body


@dataclass(frozen=True)
class CompletionRequest:
    prompt: str
    stop_sequences: tuple[str, ...] = (OBSERVATION_STOP,)
    temperature: float = 0.0


class Backend(Protocol):
    def complete(self, request: CompletionRequest) -> str: ...


def truncate_at_stop(text: str, stop_sequences: tuple[str, ...]) -> str:
    cut = len(text)
    for stop in stop_sequences:
        idx = text.find(stop)
        if idx >= 0:
            cut = min(cut, idx)
    return text[:cut]


@dataclass
class ScriptedBackend:
    """Replays completions strictly in order; running past the end is an
    error, never silence."""

    entries: list[str]
    cursor: int = 0

    def complete(self, request: CompletionRequest) -> str:
        if self.cursor >= len(self.entries):
            raise ScriptExhausted(
                f"script has {len(self.entries)} entries, call {self.cursor + 1} requested"
            )
        entry = self.entries[self.cursor]
        self.cursor += 1
        return entry

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ScriptedBackend":
        data = json.loads(Path(path).read_text())
        if isinstance(data, dict) and "entries" in data:
            data = data["entries"]
        entries = []
        for item in data:
            if isinstance(item, str):
                entries.append(item)
            elif isinstance(item, dict) and "completion" in item:
                entries.append(item["completion"])  # recorded (prompt, completion) pair
            else:
                raise ValueError(f"unrecognized script entry: {item!r}")
        return cls(entries=entries)


def _validate_chat_body(body: dict) -> None:
    """Cheap schema check so malformed requests never go on the wire."""
    assert isinstance(body["model"], str) and body["model"]
    assert isinstance(body["temperature"], (int, float))
    assert isinstance(body["messages"], list) and body["messages"]
    for message in body["messages"]:
        assert message["role"] in ("system", "user", "assistant")
        assert isinstance(message["content"], str)
    assert isinstance(body["stop"], list)


@dataclass
class LiveBackend:
    """Chat-completions JSON-over-HTTP client (vendor-neutral contract).

    The assembled prompt travels as a single user message after a fixed
    system message; the configured temperature and stop sequences are sent
    verbatim on every call.
    """

    base_url: str
    api_key: str = ""
    model: str = "gpt-4-turbo"
    system_message: str = DEFAULT_SYSTEM_MESSAGE
    timeout_s: float = 60.0
    max_retries: int = 2
    backoff_s: float = 0.5
    _client: Optional[httpx.Client] = field(default=None, repr=False)

    @classmethod
    def from_env(cls) -> "LiveBackend":
        base_url = os.environ.get(ENV_BASE_URL, "")
        if not base_url:
            raise BackendError(f"{ENV_BASE_URL} is not set")
        return cls(
            base_url=base_url,
            api_key=os.environ.get(ENV_API_KEY, ""),
            model=os.environ.get(ENV_MODEL, "gpt-4-turbo"),
        )

    def _http(self) -> httpx.Client:
        if self._client is None:
            headers = {"Content-Type": "application/json"}
            if self.api_key:
                headers["Authorization"] = f"Bearer {self.api_key}"
            self._client = httpx.Client(
                base_url=self.base_url, headers=headers, timeout=self.timeout_s
            )
        return self._client

    def complete(self, request: CompletionRequest) -> str:
        body = {
            "model": self.model,
            "messages": [
                {"role": "system", "content": self.system_message},
                {"role": "user", "content": request.prompt},
            ],
            "temperature": request.temperature,
            "stop": list(request.stop_sequences),
        }
        _validate_chat_body(body)
        attempt = 0
        while True:
            try:
                response = self._http().post("/chat/completions", json=body)
            except httpx.TimeoutException as exc:
                raise BackendError(f"backend timed out after {self.timeout_s}s") from exc
            except httpx.HTTPError as exc:
                raise BackendError(f"backend transport failure: {exc}") from exc
            if response.status_code == 429 or response.status_code >= 500:
                if attempt < self.max_retries:
                    time.sleep(self.backoff_s * (2**attempt))
                    attempt += 1
                    continue
                raise HttpError(response.status_code, response.text)
            if response.status_code != 200:
                raise HttpError(response.status_code, response.text)
            payload = response.json()
            try:
                text = payload["choices"][0]["message"]["content"]
            except (KeyError, IndexError, TypeError) as exc:
                raise BackendError(f"malformed completion payload: {payload!r}") from exc
            # servers are not trusted to honor stop sequences
            return truncate_at_stop(text, request.stop_sequences)


@dataclass
class RecordingBackend:
    """Proxies another backend while appending every (prompt, completion)
    pair to a JSON sink that ScriptedBackend can replay."""

    inner: Backend
    sink: Path

    def __post_init__(self) -> None:
        self.sink = Path(self.sink)
        self._pairs: list[dict] = []
        self._flush()

    def complete(self, request: CompletionRequest) -> str:
        completion = self.inner.complete(request)
        self._pairs.append({"prompt": request.prompt, "completion": completion})
        self._flush()
        return completion

    def _flush(self) -> None:
        try:
            self.sink.write_text(json.dumps(self._pairs, indent=2))
        except OSError as exc:
            raise BackendError(f"cannot write recording sink {self.sink}: {exc}") from exc
