"""Durable local store for capture records and screenshot images.

Layout under the data directory: one JSON document per record in
``records/<id>.json`` and the screenshot in ``images/<id>.png``. An
in-memory index is rebuilt by scanning ``records/`` on startup. Writes
go through a temp file and an atomic rename, so a completed save
survives a crash. Mutations serialize through one lock; reads hand out
immutable record objects and never block each other.
"""

from __future__ import annotations

import io
import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Optional

from PIL import Image, UnidentifiedImageError

from .errors import InvalidEditError, InvalidImageError, NotFoundError, StorageError
from .model import (
    CaptureMode,
    CaptureRecord,
    ResourceKind,
    ResourceLocator,
    ResourceRecord,
)
from .visibility import Rect


class SortSpec(str, Enum):
    LIKED_FIRST_THEN_RECENT = "liked_first_then_recent"
    RECENT_ONLY = "recent_only"


DEFAULT_SORT = SortSpec.LIKED_FIRST_THEN_RECENT


@dataclass(frozen=True)
class SearchQuery:
    raw: str
    tokens: tuple[str, ...]

    @classmethod
    def parse(cls, raw: str) -> "SearchQuery":
        return cls(raw=raw, tokens=tuple(raw.lower().split()))


# --- record (de)serialization --------------------------------------------
# Field names below are the on-disk schema; do not rename.


def _rect_to_dict(r: Rect) -> dict:
    return {"x": r.x, "y": r.y, "w": r.w, "h": r.h}


def _rect_from_dict(d: dict) -> Rect:
    return Rect(d["x"], d["y"], d["w"], d["h"])


def record_to_dict(record: CaptureRecord) -> dict:
    return {
        "capture_id": record.capture_id,
        "created_at": record.created_at.isoformat(timespec="milliseconds"),
        "mode": record.mode.value,
        "region": _rect_to_dict(record.region),
        "image_ref": record.image_ref,
        "title": record.title,
        "description": record.description,
        "liked": record.liked,
        "resources": [
            {
                "window_id": r.window_id,
                "app_name": r.app_name,
                "window_title": r.window_title,
                "bounds": _rect_to_dict(r.bounds),
                "z_index": r.z_index,
                "visible": r.visible,
                "selected": r.selected,
                "locator": (
                    {"kind": r.locator.kind.value, "value": r.locator.value}
                    if r.locator
                    else None
                ),
            }
            for r in record.resources
        ],
    }


def record_from_dict(d: dict) -> CaptureRecord:
    return CaptureRecord(
        capture_id=d["capture_id"],
        created_at=datetime.fromisoformat(d["created_at"]).astimezone(timezone.utc),
        mode=CaptureMode(d["mode"]),
        region=_rect_from_dict(d["region"]),
        image_ref=d["image_ref"],
        title=d["title"],
        description=d["description"],
        liked=d["liked"],
        resources=tuple(
            ResourceRecord(
                window_id=r["window_id"],
                app_name=r["app_name"],
                window_title=r["window_title"],
                bounds=_rect_from_dict(r["bounds"]),
                z_index=r["z_index"],
                visible=r["visible"],
                selected=r["selected"],
                locator=(
                    ResourceLocator(ResourceKind(r["locator"]["kind"]), r["locator"]["value"])
                    if r["locator"]
                    else None
                ),
            )
            for r in d["resources"]
        ),
    )


def _validate_png(image_bytes: bytes) -> None:
    if not image_bytes:
        raise InvalidImageError("image is empty")
    try:
        with Image.open(io.BytesIO(image_bytes)) as img:
            fmt = img.format
            img.verify()
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise InvalidImageError(f"not a decodable image: {exc}") from exc
    if fmt != "PNG":
        raise InvalidImageError(f"expected PNG, got {fmt}")


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_bytes(data)
        os.replace(tmp, path)
    except OSError as exc:
        raise StorageError(f"write failed for {path}: {exc}") from exc


class CaptureStore:
    """Single-writer, multi-reader capture persistence."""

    def __init__(self, data_dir: str | os.PathLike):
        self.data_dir = Path(data_dir)
        self.records_dir = self.data_dir / "records"
        self.images_dir = self.data_dir / "images"
        self.records_dir.mkdir(parents=True, exist_ok=True)
        self.images_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._records: dict[str, CaptureRecord] = {}
        self._haystacks: dict[str, tuple[str, ...]] = {}
        self._load()

    def _load(self) -> None:
        for path in sorted(self.records_dir.glob("*.json")):
            try:
                record = record_from_dict(json.loads(path.read_text(encoding="utf-8")))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise StorageError(f"corrupt record file {path}: {exc}") from exc
            self._records[record.capture_id] = record
            self._haystacks[record.capture_id] = _searchable_fields(record)

    # -- mutations ---------------------------------------------------------

    def save(self, record: CaptureRecord, image_bytes: bytes) -> str:
        _validate_png(image_bytes)
        with self._lock:
            if record.capture_id in self._records:
                raise StorageError(f"capture_id already exists: {record.capture_id}")
            _atomic_write(self._image_path(record.capture_id), image_bytes)
            payload = json.dumps(record_to_dict(record), ensure_ascii=False, indent=2)
            _atomic_write(self._record_path(record.capture_id), payload.encode("utf-8"))
            self._records[record.capture_id] = record
            self._haystacks[record.capture_id] = _searchable_fields(record)
        return record.capture_id

    def update_fields(
        self,
        capture_id: str,
        title: Optional[str] = None,
        description: Optional[str] = None,
        liked: Optional[bool] = None,
    ) -> CaptureRecord:
        """Change only the provided fields; created_at and resources are
        immutable through this operation."""
        from dataclasses import replace

        if title is not None and not title.strip():
            raise InvalidEditError("title must be non-empty")
        with self._lock:
            record = self._get(capture_id)
            updated = replace(
                record,
                title=record.title if title is None else title,
                description=record.description if description is None else description,
                liked=record.liked if liked is None else liked,
            )
            if updated != record:
                payload = json.dumps(record_to_dict(updated), ensure_ascii=False, indent=2)
                _atomic_write(self._record_path(capture_id), payload.encode("utf-8"))
                self._records[capture_id] = updated
                self._haystacks[capture_id] = _searchable_fields(updated)
            return updated

    def delete(self, capture_id: str) -> None:
        with self._lock:
            self._get(capture_id)
            try:
                self._record_path(capture_id).unlink()
                self._image_path(capture_id).unlink(missing_ok=True)
            except OSError as exc:
                raise StorageError(f"delete failed for {capture_id}: {exc}") from exc
            del self._records[capture_id]
            del self._haystacks[capture_id]

    # -- queries -------------------------------------------------------------

    def get(self, capture_id: str) -> CaptureRecord:
        with self._lock:
            return self._get(capture_id)

    def image_bytes(self, capture_id: str) -> bytes:
        path = self._image_path(capture_id)
        if not path.is_file():
            raise NotFoundError(f"no image for capture: {capture_id}")
        return path.read_bytes()

    def list_sorted(self, sort: SortSpec = DEFAULT_SORT) -> list[CaptureRecord]:
        with self._lock:
            records = list(self._records.values())
        if sort is SortSpec.LIKED_FIRST_THEN_RECENT:
            key = lambda r: (r.liked, r.created_at, r.capture_id)  # noqa: E731
        else:
            key = lambda r: (r.created_at, r.capture_id)  # noqa: E731
        return sorted(records, key=key, reverse=True)

    def search(self, query: SearchQuery, sort: SortSpec = DEFAULT_SORT) -> list[CaptureRecord]:
        """Keyword filter: a record matches when any token is a
        case-insensitive substring of any searchable field (window titles,
        app names, locator values, the capture date, title, description)."""
        if not query.tokens:
            return self.list_sorted(sort)
        with self._lock:
            haystacks = dict(self._haystacks)
        matched = {
            cid
            for cid, fields in haystacks.items()
            if any(tok in f for tok in query.tokens for f in fields)
        }
        return [r for r in self.list_sorted(sort) if r.capture_id in matched]

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)

    # -- internals -----------------------------------------------------------

    def _get(self, capture_id: str) -> CaptureRecord:
        try:
            return self._records[capture_id]
        except KeyError:
            raise NotFoundError(f"no such capture: {capture_id}") from None

    def _record_path(self, capture_id: str) -> Path:
        return self.records_dir / f"{capture_id}.json"

    def _image_path(self, capture_id: str) -> Path:
        return self.images_dir / f"{capture_id}.png"


def _searchable_fields(record: CaptureRecord) -> tuple[str, ...]:
    fields = [
        record.title.lower(),
        record.description.lower(),
        record.created_at.strftime("%Y-%m-%d"),
    ]
    for r in record.resources:
        fields.append(r.window_title.lower())
        fields.append(r.app_name.lower())
        if r.locator:
            fields.append(r.locator.value.lower())
    return tuple(fields)
