"""Capture and response shaping shared by the HTTP service and the CLI.

Both front ends must produce the same JSON for the same operation, so
the composition of enumerate/grab/visibility/draft lives here, as does
the payload shaping.
"""

from __future__ import annotations

from dataclasses import replace
from datetime import datetime
from typing import Iterable, Optional

from .desktop import DesktopProvider, enumerate_windows, grab_screenshot
from .model import CaptureMode, CaptureRecord, new_capture_draft, relative_timestamp
from .restore import RestoreAction, SkippedResource
from .store import record_to_dict
from .visibility import Rect, identify_visible_windows


def perform_capture(
    provider: DesktopProvider,
    mode: CaptureMode,
    region: Optional[Rect],
    now: datetime,
) -> tuple[CaptureRecord, bytes]:
    """Snapshot the desktop into an unsaved draft record plus its PNG."""
    screen, windows = enumerate_windows(provider)
    image_bytes, effective = grab_screenshot(provider, mode, region)
    report = identify_visible_windows(effective, windows, screen)
    draft = new_capture_draft(windows, report, mode, effective, "", now)
    draft = replace(draft, image_ref=f"{draft.capture_id}.png")
    return draft, image_bytes


def image_url(capture_id: str) -> str:
    return f"/images/{capture_id}.png"


def record_payload(record: CaptureRecord, now: datetime) -> dict:
    payload = record_to_dict(record)
    payload["image_url"] = image_url(record.capture_id)
    payload["relative_time"] = relative_timestamp(record.created_at, now)
    return payload


def draft_payload(record: CaptureRecord) -> dict:
    full = record_to_dict(record)
    return {
        "draft_id": record.capture_id,
        "created_at": full["created_at"],
        "mode": full["mode"],
        "region": full["region"],
        "title": full["title"],
        "description": full["description"],
        "image_url": image_url(record.capture_id),
        "resources": full["resources"],
    }


def reopen_payload(
    capture_id: str,
    actions: Iterable[RestoreAction],
    skipped: Iterable[SkippedResource],
) -> dict:
    return {
        "capture_id": capture_id,
        "actions": [
            {
                "capture_id": a.capture_id,
                "window_id": a.window_id,
                "command": a.command,
                "executed": a.executed,
                "error": a.error,
            }
            for a in actions
        ],
        "skipped": [{"window_id": s.window_id, "reason": s.reason.value} for s in skipped],
    }
