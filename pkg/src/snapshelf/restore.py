"""Reopening the resources behind a capture via a script registry.

The registry is a CSV mapping (app matcher, resource kind) to a shell
command template. Planning picks the resources to reopen, substitutes
each locator value into the first matching template, and reports
resources it cannot handle as skipped rather than failing the batch.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Protocol

from .errors import InvalidInputError, RegistryError
from .model import CaptureRecord, ResourceKind

REGISTRY_HEADER = "app_matcher,resource_kind,command_template"
PLACEHOLDER = "{value}"


@dataclass(frozen=True)
class RegistryEntry:
    app_matcher: str
    resource_kind: ResourceKind
    command_template: str

    def matches(self, app_name: str, kind: ResourceKind) -> bool:
        if self.resource_kind is not kind:
            return False
        return self.app_matcher == "*" or self.app_matcher.lower() == app_name.lower()


@dataclass(frozen=True)
class ScriptRegistry:
    entries: tuple[RegistryEntry, ...]

    def find(self, app_name: str, kind: ResourceKind) -> Optional[RegistryEntry]:
        """First matching entry wins; order is the file order."""
        for entry in self.entries:
            if entry.matches(app_name, kind):
                return entry
        return None


def load_script_registry(path: str | Path) -> ScriptRegistry:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise RegistryError(f"cannot read registry {path}: {exc}") from exc
    return parse_script_registry(text, source=str(path))


def parse_script_registry(text: str, source: str = "<registry>") -> ScriptRegistry:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines or lines[0] != REGISTRY_HEADER:
        raise RegistryError(f"{source}: first line must be exactly {REGISTRY_HEADER!r}")
    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        # Command templates may contain unquoted commas, so split off
        # only the first two fields.
        parts = line.split(",", 2)
        if len(parts) < 3:
            raise RegistryError(f"{source}:{lineno}: missing column in {line!r}")
        matcher, kind_text, template = parts[0].strip(), parts[1].strip(), parts[2]
        if not matcher:
            raise RegistryError(f"{source}:{lineno}: empty app_matcher")
        try:
            kind = ResourceKind(kind_text)
        except ValueError:
            raise RegistryError(
                f"{source}:{lineno}: unknown resource_kind {kind_text!r}"
            ) from None
        if template.count(PLACEHOLDER) != 1:
            raise RegistryError(
                f"{source}:{lineno}: template must contain {PLACEHOLDER} exactly once"
            )
        entries.append(RegistryEntry(matcher, kind, template))
    return ScriptRegistry(entries=tuple(entries))


# --- planning -----------------------------------------------------------------


class SkipReason(str, Enum):
    NO_LOCATOR = "no_locator"
    NO_REGISTRY_MATCH = "no_registry_match"


@dataclass(frozen=True)
class SkippedResource:
    window_id: str
    reason: SkipReason


@dataclass(frozen=True)
class RestoreAction:
    capture_id: str
    window_id: str
    command: str
    executed: bool = False
    error: Optional[str] = None


@dataclass(frozen=True)
class RestorePlan:
    actions: tuple[RestoreAction, ...]
    skipped: tuple[SkippedResource, ...]


def plan_restore(
    record: CaptureRecord,
    resource_ids: Optional[Iterable[str]],
    registry: ScriptRegistry,
) -> RestorePlan:
    """Pick the resources to reopen and build their commands.

    ``resource_ids=None`` means the record's selected set; an explicit
    set is honored as-is, including the empty set. Resources without a
    locator or without a registry match are skipped, never errors.
    """
    if resource_ids is None:
        chosen = [r for r in record.resources if r.selected]
    else:
        ids = set(resource_ids)
        known = {r.window_id for r in record.resources}
        unknown = ids - known
        if unknown:
            raise InvalidInputError(f"unknown resource ids: {sorted(unknown)}")
        chosen = [r for r in record.resources if r.window_id in ids]

    actions = []
    skipped = []
    for res in chosen:
        if res.locator is None:
            skipped.append(SkippedResource(res.window_id, SkipReason.NO_LOCATOR))
            continue
        entry = registry.find(res.app_name, res.locator.kind)
        if entry is None:
            skipped.append(SkippedResource(res.window_id, SkipReason.NO_REGISTRY_MATCH))
            continue
        # replace, not str.format: locator values go in verbatim even if
        # they contain braces.
        command = entry.command_template.replace(PLACEHOLDER, res.locator.value)
        actions.append(RestoreAction(record.capture_id, res.window_id, command))
    return RestorePlan(actions=tuple(actions), skipped=tuple(skipped))


# --- execution ------------------------------------------------------------------


class CommandExecutor(Protocol):
    def run(self, command: str) -> None: ...


class EchoExecutor:
    """Logs commands instead of spawning them."""

    def __init__(self):
        self.commands: list[str] = []

    def run(self, command: str) -> None:
        self.commands.append(command)


def execute_restore(
    actions: Iterable[RestoreAction], executor: CommandExecutor
) -> list[RestoreAction]:
    """Run every action; one failure never aborts the rest."""
    results = []
    for action in actions:
        try:
            executor.run(action.command)
        except Exception as exc:
            results.append(replace(action, executed=False, error=str(exc)))
        else:
            results.append(replace(action, executed=True, error=None))
    return results
