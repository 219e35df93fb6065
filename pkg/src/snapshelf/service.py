"""Local HTTP API over the store, the desktop provider, and restore.

The service is a thin composition layer: every handler parses its
request by hand, calls the underlying module operations, and shapes
their result as JSON. All errors, including framework-level ones, are
normalized to ``{"status", "code", "message"}``.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import HTMLResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from starlette.exceptions import HTTPException as StarletteHTTPException

from .desktop import (
    DesktopProvider,
    SimulatedProvider,
    load_scenario,
    resolve_scenario_path,
)
from .errors import (
    InvalidEditError,
    InvalidImageError,
    InvalidInputError,
    InvalidRegionError,
    NotFoundError,
    ProviderError,
    RegistryError,
    ScenarioError,
    SnapshelfError,
    StorageError,
)
from .model import CaptureEdits, CaptureMode, CaptureRecord, apply_user_edits
from .pipeline import draft_payload, perform_capture, record_payload, reopen_payload
from .restore import (
    CommandExecutor,
    EchoExecutor,
    ScriptRegistry,
    execute_restore,
    plan_restore,
)
from .store import CaptureStore, SearchQuery
from .visibility import Rect

DRAFT_TTL_SECONDS = 600.0

_STATUS_BY_ERROR = (
    (NotFoundError, 404, "not_found"),
    (InvalidEditError, 400, "invalid_edit"),
    (InvalidRegionError, 400, "invalid_region"),
    (InvalidImageError, 400, "invalid_image"),
    (ScenarioError, 400, "invalid_scenario"),
    (InvalidInputError, 400, "invalid_input"),
    (ProviderError, 502, "provider_error"),
    (RegistryError, 500, "registry_error"),
    (StorageError, 500, "storage_error"),
)


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        {"status": status, "code": code, "message": message}, status_code=status
    )


@dataclass
class _PendingDraft:
    record: CaptureRecord
    image_bytes: bytes
    deadline: float


class DraftBox:
    """Holds unsaved captures in memory. Drafts are single-use and
    expire after a TTL; expired images are dropped on the next access."""

    def __init__(self, ttl_seconds: float = DRAFT_TTL_SECONDS, time_func=time.monotonic):
        self.ttl_seconds = ttl_seconds
        self._time = time_func
        self._lock = threading.Lock()
        self._drafts: dict[str, _PendingDraft] = {}

    def put(self, record: CaptureRecord, image_bytes: bytes) -> None:
        with self._lock:
            self._purge()
            self._drafts[record.capture_id] = _PendingDraft(
                record, image_bytes, self._time() + self.ttl_seconds
            )

    def pop(self, draft_id: str) -> tuple[CaptureRecord, bytes]:
        with self._lock:
            self._purge()
            pending = self._drafts.pop(draft_id, None)
        if pending is None:
            raise NotFoundError(f"no such draft (or it expired): {draft_id}")
        return pending.record, pending.image_bytes

    def peek_image(self, draft_id: str) -> Optional[bytes]:
        with self._lock:
            self._purge()
            pending = self._drafts.get(draft_id)
        return pending.image_bytes if pending else None

    def _purge(self) -> None:
        now = self._time()
        for key in [k for k, p in self._drafts.items() if p.deadline <= now]:
            del self._drafts[key]


# --- request parsing helpers ----------------------------------------------------


async def _json_object(request: Request, *, allow_empty: bool = False) -> dict:
    raw = await request.body()
    if not raw:
        if allow_empty:
            return {}
        raise InvalidInputError("request body must be a JSON object")
    try:
        parsed = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"request body is not valid JSON: {exc}") from exc
    if not isinstance(parsed, dict):
        raise InvalidInputError("request body must be a JSON object")
    return parsed


def _require_str(body: dict, key: str) -> str:
    value = body.get(key)
    if not isinstance(value, str):
        raise InvalidInputError(f"{key} must be a string")
    return value


def _optional_str(body: dict, key: str) -> Optional[str]:
    value = body.get(key)
    if value is None:
        return None
    if not isinstance(value, str):
        raise InvalidInputError(f"{key} must be a string")
    return value


def _optional_bool(body: dict, key: str) -> Optional[bool]:
    value = body.get(key)
    if value is None:
        return None
    if not isinstance(value, bool):
        raise InvalidInputError(f"{key} must be a boolean")
    return value


def _optional_str_list(body: dict, key: str) -> Optional[list[str]]:
    value = body.get(key)
    if value is None:
        return None
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InvalidInputError(f"{key} must be a list of strings")
    return value


def _int_field(obj: dict, key: str) -> int:
    value = obj.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidInputError(f"region.{key} must be an integer")
    return value


def _parse_region(body: dict) -> Optional[Rect]:
    region = body.get("region")
    if region is None:
        return None
    if not isinstance(region, dict):
        raise InvalidInputError("region must be an object with x, y, w, h")
    return Rect(*(_int_field(region, k) for k in ("x", "y", "w", "h")))


def _parse_mode(body: dict) -> CaptureMode:
    mode = body.get("mode")
    try:
        return CaptureMode(mode)
    except ValueError:
        choices = ", ".join(m.value for m in CaptureMode)
        raise InvalidInputError(f"mode must be one of: {choices}") from None


def _parse_edits(body: dict) -> CaptureEdits:
    edits = body.get("edits") or {}
    if not isinstance(edits, dict):
        raise InvalidInputError("edits must be an object")
    unknown = set(edits) - {"title", "description", "deselect_ids", "add_invisible_ids"}
    if unknown:
        raise InvalidInputError(f"unknown edit fields: {sorted(unknown)}")
    return CaptureEdits(
        title=_optional_str(edits, "title"),
        description=_optional_str(edits, "description"),
        deselect_ids=frozenset(_optional_str_list(edits, "deselect_ids") or ()),
        add_invisible_ids=frozenset(_optional_str_list(edits, "add_invisible_ids") or ()),
    )


def _safe_id(capture_id: str) -> str:
    if not capture_id or not all(c.isalnum() or c in "-_" for c in capture_id):
        raise NotFoundError(f"no such capture: {capture_id}")
    return capture_id


# --- app factory ------------------------------------------------------------------


def create_app(
    store: CaptureStore,
    registry: ScriptRegistry,
    *,
    provider: Optional[DesktopProvider] = None,
    executor: Optional[CommandExecutor] = None,
    clock: Optional[Callable[[], datetime]] = None,
    ui_dir: Optional[str] = None,
    draft_ttl_seconds: float = DRAFT_TTL_SECONDS,
) -> FastAPI:
    """Wire the HTTP app around an opened store.

    ``provider`` backs full-screen/region capture; requests may override
    it per-call with ``scenario_override``. ``clock`` exists so tests
    can pin record timestamps.
    """
    executor = executor if executor is not None else EchoExecutor()
    clock = clock or (lambda: datetime.now(timezone.utc))
    drafts = DraftBox(ttl_seconds=draft_ttl_seconds)

    app = FastAPI(title="snapshelf", docs_url=None, redoc_url=None, openapi_url=None)

    def payload(record: CaptureRecord) -> dict:
        return record_payload(record, clock())

    # -- error normalization --

    @app.exception_handler(SnapshelfError)
    async def snapshelf_error(request: Request, exc: SnapshelfError):
        for klass, status, code in _STATUS_BY_ERROR:
            if isinstance(exc, klass):
                return _error_response(status, code, str(exc))
        return _error_response(500, "internal_error", str(exc))

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        return _error_response(400, "invalid_input", str(exc))

    @app.exception_handler(StarletteHTTPException)
    async def http_error(request: Request, exc: StarletteHTTPException):
        code = {404: "not_found", 405: "method_not_allowed"}.get(exc.status_code, "http_error")
        return _error_response(exc.status_code, code, str(exc.detail))

    # -- capture flow --

    @app.post("/api/drafts", status_code=201)
    async def create_draft(request: Request):
        body = await _json_object(request)
        mode = _parse_mode(body)
        region = _parse_region(body)
        override = _optional_str(body, "scenario_override")
        if override is not None:
            active = SimulatedProvider(load_scenario(resolve_scenario_path(override)))
        elif provider is not None:
            active = provider
        else:
            raise ProviderError("no desktop provider configured and no scenario_override given")

        draft, image_bytes = perform_capture(active, mode, region, clock())
        drafts.put(draft, image_bytes)
        return JSONResponse(draft_payload(draft), status_code=201)

    @app.post("/api/captures", status_code=201)
    async def save_capture(request: Request):
        body = await _json_object(request)
        draft_id = _require_str(body, "draft_id")
        edits = _parse_edits(body)
        record, image_bytes = drafts.pop(draft_id)
        final = apply_user_edits(record, edits)
        store.save(final, image_bytes)
        return JSONResponse(payload(final), status_code=201)

    # -- browse / search --

    @app.get("/api/captures")
    async def list_captures(q: Optional[str] = None):
        if q is None:
            records = store.list_sorted()
        else:
            records = store.search(SearchQuery.parse(q))
        return JSONResponse([payload(r) for r in records])

    @app.get("/api/captures/{capture_id}")
    async def get_capture(capture_id: str):
        return JSONResponse(payload(store.get(_safe_id(capture_id))))

    @app.patch("/api/captures/{capture_id}")
    async def patch_capture(capture_id: str, request: Request):
        body = await _json_object(request)
        unknown = set(body) - {"title", "description", "liked"}
        if unknown:
            raise InvalidInputError(f"unknown fields: {sorted(unknown)}")
        updated = store.update_fields(
            _safe_id(capture_id),
            title=_optional_str(body, "title"),
            description=_optional_str(body, "description"),
            liked=_optional_bool(body, "liked"),
        )
        return JSONResponse(payload(updated))

    @app.delete("/api/captures/{capture_id}", status_code=204)
    async def delete_capture(capture_id: str):
        store.delete(_safe_id(capture_id))
        return Response(status_code=204)

    # -- reopen --

    @app.post("/api/captures/{capture_id}/reopen")
    async def reopen_capture(capture_id: str, request: Request):
        body = await _json_object(request, allow_empty=True)
        ids = _optional_str_list(body, "resource_ids")
        record = store.get(_safe_id(capture_id))
        plan = plan_restore(record, None if ids is None else set(ids), registry)
        done = execute_restore(plan.actions, executor)
        return JSONResponse(reopen_payload(record.capture_id, done, plan.skipped))

    # -- images --

    @app.get("/images/{capture_id}.png")
    async def get_image(capture_id: str):
        capture_id = _safe_id(capture_id)
        try:
            data = store.image_bytes(capture_id)
        except NotFoundError:
            data = drafts.peek_image(capture_id)
            if data is None:
                raise
        return Response(content=data, media_type="image/png")

    # -- UI --

    if ui_dir:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        async def placeholder():
            return HTMLResponse(
                "<!doctype html><title>snapshelf</title>"
                "<p>snapshelf API is running. The web UI is not installed; "
                'browse the API at <a href="/api/captures">/api/captures</a>.</p>'
            )

    return app
