"""Domain records for captures and their bundled resources.

A capture bundles one screenshot with the windows that were on screen
when it was taken. Each window becomes a resource row carrying the
metadata needed to reopen it later; visible windows start out selected
and the user may deselect them or pull in occluded ones before saving.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Optional, Sequence
from urllib.parse import urlparse

from .errors import InvalidEditError, InvalidInputError
from .visibility import Rect, VisibilityReport


class ResourceKind(str, Enum):
    WEB_PAGE = "web_page"
    FILE = "file"
    APPLICATION = "application"


class CaptureMode(str, Enum):
    FULL_SCREEN = "full_screen"
    SELECTED_AREA = "selected_area"


@dataclass(frozen=True)
class ResourceLocator:
    """Restorable handle: a URL, an absolute file path, or an app identifier."""

    kind: ResourceKind
    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise InvalidInputError("locator value must be non-empty")
        if self.kind is ResourceKind.WEB_PAGE:
            parsed = urlparse(self.value)
            if not parsed.scheme or not parsed.netloc:
                raise InvalidInputError(f"not a parseable URL: {self.value!r}")


@dataclass(frozen=True)
class WindowSnapshot:
    """One on-screen window at capture time."""

    window_id: str
    app_name: str
    window_title: str
    bounds: Rect
    z_index: int  # 0 = frontmost
    locator: Optional[ResourceLocator] = None

    def __post_init__(self) -> None:
        if not self.window_id:
            raise InvalidInputError("window_id must be non-empty")
        if self.z_index < 0:
            raise InvalidInputError(f"z_index must be >= 0, got {self.z_index}")


@dataclass(frozen=True)
class ResourceRecord:
    """A window snapshot plus its visibility verdict and selection flag."""

    window_id: str
    app_name: str
    window_title: str
    bounds: Rect
    z_index: int
    visible: bool
    selected: bool
    locator: Optional[ResourceLocator] = None

    @classmethod
    def from_snapshot(cls, snap: WindowSnapshot, visible: bool) -> "ResourceRecord":
        return cls(
            window_id=snap.window_id,
            app_name=snap.app_name,
            window_title=snap.window_title,
            bounds=snap.bounds,
            z_index=snap.z_index,
            visible=visible,
            selected=visible,  # visible windows are preselected
            locator=snap.locator,
        )


@dataclass(frozen=True)
class CaptureRecord:
    """One screenshot bookmark."""

    capture_id: str
    created_at: datetime  # UTC, millisecond precision
    mode: CaptureMode
    region: Rect
    image_ref: str
    title: str
    description: str
    liked: bool
    resources: tuple[ResourceRecord, ...]

    def resource(self, window_id: str) -> ResourceRecord:
        for r in self.resources:
            if r.window_id == window_id:
                return r
        raise InvalidEditError(f"unknown window_id: {window_id!r}")

    def selected_resources(self) -> tuple[ResourceRecord, ...]:
        return tuple(r for r in self.resources if r.selected)


@dataclass(frozen=True)
class CaptureEdits:
    """User changes applied between draft and save."""

    title: Optional[str] = None
    description: Optional[str] = None
    deselect_ids: frozenset[str] = field(default_factory=frozenset)
    add_invisible_ids: frozenset[str] = field(default_factory=frozenset)


def new_capture_id() -> str:
    return uuid.uuid4().hex


def quantize_utc_ms(ts: datetime) -> datetime:
    """Normalize to UTC and truncate to millisecond precision."""
    if ts.tzinfo is None:
        raise InvalidInputError("timestamps must be timezone-aware")
    ts = ts.astimezone(timezone.utc)
    return ts.replace(microsecond=(ts.microsecond // 1000) * 1000)


def default_title(created_at: datetime) -> str:
    """Capture time formatted for humans, in the machine's local timezone."""
    return created_at.astimezone().strftime("%Y-%m-%d %H:%M:%S")


def new_capture_draft(
    snapshots: Sequence[WindowSnapshot],
    report: VisibilityReport,
    mode: CaptureMode,
    region: Rect,
    image_ref: str,
    now: datetime,
) -> CaptureRecord:
    """Build the draft record presented for editing right after capture.

    Every enumerated window becomes a resource; the visible ones are
    preselected. The title defaults to the formatted capture time.
    """
    for idx in set(report.visible_ids) | set(report.overlap_cells):
        if not 0 <= idx < len(snapshots):
            raise InvalidInputError(
                f"visibility report references window index {idx} "
                f"but only {len(snapshots)} snapshots were given"
            )
    seen: set[str] = set()
    for snap in snapshots:
        if snap.window_id in seen:
            raise InvalidInputError(f"duplicate window_id: {snap.window_id!r}")
        seen.add(snap.window_id)

    created_at = quantize_utc_ms(now)
    visible = set(report.visible_ids)
    return CaptureRecord(
        capture_id=new_capture_id(),
        created_at=created_at,
        mode=mode,
        region=region,
        image_ref=image_ref,
        title=default_title(created_at),
        description="",
        liked=False,
        resources=tuple(
            ResourceRecord.from_snapshot(snap, visible=k in visible)
            for k, snap in enumerate(snapshots)
        ),
    )


def apply_user_edits(draft: CaptureRecord, edits: CaptureEdits) -> CaptureRecord:
    """Apply Capture View edits: the final selected set is
    (visible ids \\ deselect_ids) ∪ add_invisible_ids."""
    by_id = {r.window_id: r for r in draft.resources}
    for wid in edits.deselect_ids | edits.add_invisible_ids:
        if wid not in by_id:
            raise InvalidEditError(f"unknown window_id: {wid!r}")
    for wid in edits.deselect_ids:
        if not by_id[wid].visible:
            raise InvalidEditError(f"cannot deselect non-visible window: {wid!r}")
    for wid in edits.add_invisible_ids:
        if by_id[wid].visible:
            raise InvalidEditError(f"window is already visible, not addable: {wid!r}")

    resources = tuple(
        replace(
            r,
            selected=(
                (r.visible and r.window_id not in edits.deselect_ids)
                or (not r.visible and r.window_id in edits.add_invisible_ids)
            ),
        )
        for r in draft.resources
    )
    # A blank title means the user cleared the field; keep the default.
    title = draft.title if edits.title is None or not edits.title.strip() else edits.title
    description = draft.description if edits.description is None else edits.description
    return replace(draft, title=title, description=description, resources=resources)


_MINUTE = 60
_HOUR = 3600
_DAY = 86400
_WEEK = 7 * 86400


def relative_timestamp(created_at: datetime, now: datetime) -> str:
    """Humanized age of a capture, largest unit only (floor division)."""
    delta = (now - created_at).total_seconds()
    if delta < 0:
        raise InvalidInputError("capture time lies in the future")
    if delta < _MINUTE:
        return "just now"
    if delta < _HOUR:
        return _plural(int(delta // _MINUTE), "minute")
    if delta < _DAY:
        return _plural(int(delta // _HOUR), "hour")
    if delta < _WEEK:
        return _plural(int(delta // _DAY), "day")
    return _plural(int(delta // _WEEK), "week")


def _plural(n: int, unit: str) -> str:
    return f"1 {unit} ago" if n == 1 else f"{n} {unit}s ago"
