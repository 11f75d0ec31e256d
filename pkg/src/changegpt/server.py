"""HTTP gateway: sessions, image upload, cropping, querying and trace
retrieval for the UI.

All state lives in the session store (optionally persisted to a directory);
the service itself is stateless. Requests within one session are serialized;
a query already in flight answers further queries on that session with 409.
"""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .backends import Backend, ScriptedBackend
from .navigator.loop import BackendFailure, run_query
from .navigator.session import Session, TickClock
from .raster.png import BadImage
from .raster.types import CropRegion, DimensionMismatch, OutOfBounds
from .toolkit.registry import ToolRegistry

MAX_UPLOAD_BYTES = 32 * 1024 * 1024

SELECTOR_SCRIPTED = "scripted"
SELECTOR_HTTP = "http"


class ApiError(Exception):
    def __init__(self, status: int, message: str, extra: Optional[dict] = None) -> None:
        super().__init__(message)
        self.status = status
        self.message = message
        self.extra = extra or {}


@dataclass
class ManagedSession:
    session: Session
    lock: threading.Lock = field(default_factory=threading.Lock)
    created_at: float = 0.0


class SessionStore:
    """In-memory session map with optional directory persistence."""

    def __init__(self, persist_dir: Optional[Path] = None, deterministic: bool = False) -> None:
        self._sessions: dict[str, ManagedSession] = {}
        self._guard = threading.Lock()
        self._persist_dir = Path(persist_dir) if persist_dir else None
        self._deterministic = deterministic
        if self._persist_dir and self._persist_dir.exists():
            for entry in sorted(self._persist_dir.iterdir()):
                if (entry / "state.json").exists():
                    session = Session.import_dir(entry, clock=self._new_clock())
                    self._sessions[entry.name] = ManagedSession(session=session)

    def _new_clock(self):
        return TickClock() if self._deterministic else None

    def create(self) -> tuple[str, ManagedSession]:
        import time

        session_id = secrets.token_hex(6)
        managed = ManagedSession(session=Session(clock=self._new_clock()), created_at=time.time())
        with self._guard:
            self._sessions[session_id] = managed
        self.persist(session_id)
        return session_id, managed

    def get(self, session_id: str) -> ManagedSession:
        managed = self._sessions.get(session_id)
        if managed is None:
            raise ApiError(404, f"unknown session {session_id!r}")
        return managed

    def persist(self, session_id: str) -> None:
        if self._persist_dir is None:
            return
        managed = self._sessions.get(session_id)
        if managed is not None:
            managed.session.export_dir(self._persist_dir / session_id)

    def find_image(self, image_id: str) -> bytes:
        for managed in self._sessions.values():
            record = managed.session.get(image_id)
            if record is not None:
                return managed.session.bytes_of(record.self_id)
        raise ApiError(404, f"unknown image {image_id!r}")

    def ids(self) -> list[str]:
        return list(self._sessions)


class CropBody(BaseModel):
    parent_id: str
    x: int
    y: int
    w: int
    h: int


class QueryBody(BaseModel):
    question: str


def create_app(
    registry: ToolRegistry,
    backend_selector: str = "http",
    script_path: Optional[Path] = None,
    static_dir: Optional[Path] = None,
    persist_dir: Optional[Path] = None,
    max_steps: int = 12,
) -> FastAPI:
    """Build the gateway app.

    backend_selector: "http" (live client from the CHANGEGPT_* environment)
    or "scripted" with `script_path` naming a completion script replayed
    afresh for every query (the reproducible demo/test mode).
    """
    deterministic = backend_selector == SELECTOR_SCRIPTED
    store = SessionStore(persist_dir=persist_dir, deterministic=deterministic)
    app = FastAPI(title="changegpt gateway")
    app.state.store = store
    app.state.registry = registry

    def make_backend() -> Backend:
        if backend_selector == SELECTOR_SCRIPTED:
            if script_path is None:
                raise ApiError(502, "scripted backend configured without a script")
            return ScriptedBackend.from_file(script_path)
        from .backends import LiveBackend

        try:
            return LiveBackend.from_env()
        except Exception as exc:
            raise ApiError(502, f"live backend unavailable: {exc}") from exc

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"error": exc.message, **exc.extra})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.post("/sessions")
    def create_session():
        session_id, managed = store.create()
        return {
            "session_id": session_id,
            "created_at": managed.created_at,
            "image_count": 0,
        }

    @app.post("/sessions/{session_id}/images")
    async def upload_image(session_id: str, request: Request, role: str, pair_id: Optional[str] = None):
        managed = store.get(session_id)
        if role not in ("pre", "cur"):
            raise ApiError(400, f"role must be 'pre' or 'cur', got {role!r}")
        data = await request.body()
        if len(data) > MAX_UPLOAD_BYTES:
            raise ApiError(400, f"upload exceeds {MAX_UPLOAD_BYTES} bytes")
        with managed.lock:
            try:
                record = managed.session.register_image(data, role, pair_id=pair_id)
            except BadImage as exc:
                raise ApiError(400, str(exc)) from exc
            except DimensionMismatch as exc:
                raise ApiError(409, str(exc)) from exc
        store.persist(session_id)
        return record.to_dict()

    @app.post("/sessions/{session_id}/crop")
    def crop_image(session_id: str, body: CropBody):
        managed = store.get(session_id)
        with managed.lock:
            try:
                region = CropRegion(body.x, body.y, body.w, body.h)
                record = managed.session.crop_and_register(body.parent_id, region)
            except OutOfBounds as exc:
                raise ApiError(400, str(exc)) from exc
            except Exception as exc:
                from .navigator.session import UnknownParent

                if isinstance(exc, UnknownParent):
                    raise ApiError(404, str(exc)) from exc
                raise ApiError(400, str(exc)) from exc
        store.persist(session_id)
        return record.to_dict()

    @app.post("/sessions/{session_id}/query")
    def query(session_id: str, body: QueryBody):
        managed = store.get(session_id)
        if not managed.lock.acquire(blocking=False):
            raise ApiError(409, "a query is already in flight on this session")
        try:
            if not managed.session.records():
                raise ApiError(400, "register at least one image before querying")
            backend = make_backend()
            try:
                answer, trace = run_query(
                    managed.session, body.question, backend, registry, max_steps=max_steps
                )
            except BackendFailure as exc:
                raise ApiError(
                    502, f"backend failure: {exc}", extra={"trace": exc.trace.to_dict()}
                ) from exc
        finally:
            managed.lock.release()
        store.persist(session_id)
        return {
            "answer": answer,
            "tools_used": trace.tools_used_sequence(),
            "trace": trace.to_dict(),
        }

    @app.get("/sessions/{session_id}/history")
    def history(session_id: str):
        managed = store.get(session_id)
        return {"turns": [t.to_dict() for t in managed.session.history_view()]}

    @app.get("/sessions/{session_id}/images")
    def list_images(session_id: str):
        managed = store.get(session_id)
        return {"images": [r.to_dict() for r in managed.session.records()]}

    @app.get("/images/{image_id}")
    def get_image(image_id: str):
        data = store.find_image(image_id)
        return Response(content=data, media_type="image/png")

    @app.get("/tools")
    def list_tools():
        return {
            "tools": [
                {
                    "name": spec.name,
                    "description": spec.description,
                    "arg_grammar": spec.arg_grammar,
                    "backing": spec.backing,
                }
                for name in registry.names()
                for spec in (registry.get(name),)
            ]
        }

    if static_dir is not None and Path(static_dir).exists():
        app.mount("/ui", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
