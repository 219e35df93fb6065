"""Command-line front end: run the service or drive captures headlessly.

Exit codes: 0 success, 1 user error (bad arguments, unknown ids,
malformed scenario/registry files), 2 internal failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from .desktop import (
    SimulatedProvider,
    bundled_data_dir,
    load_scenario,
    resolve_scenario_path,
)
from .errors import (
    InvalidEditError,
    InvalidImageError,
    InvalidInputError,
    InvalidRegionError,
    NotFoundError,
    RegistryError,
    ScenarioError,
    SnapshelfError,
)
from .model import CaptureEdits, CaptureMode, apply_user_edits, relative_timestamp
from .pipeline import perform_capture, record_payload, reopen_payload
from .restore import EchoExecutor, execute_restore, load_script_registry, plan_restore
from .store import CaptureStore, SearchQuery
from .visibility import Rect

DATA_DIR_ENV = "SNAPSHELF_DATA_DIR"
DEFAULT_PORT = 8765

_USER_ERRORS = (
    InvalidInputError,
    InvalidEditError,
    InvalidRegionError,
    InvalidImageError,
    NotFoundError,
    ScenarioError,
    RegistryError,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; this tool reserves 2 for
    # internal failures, so downgrade usage problems to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _region_arg(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("region must be x,y,w,h")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("region values must be integers") from None


def _id_list(text: str) -> list[str]:
    return [t for t in (p.strip() for p in text.split(",")) if t]


def _default_data_dir() -> str:
    return os.environ.get(DATA_DIR_ENV) or str(Path.home() / ".snapshelf")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="snapshelf", description="Screenshot bookmarks for your desktop.")
    parser.add_argument(
        "--data-dir",
        default=None,
        help=f"storage directory (default: ${DATA_DIR_ENV} or ~/.snapshelf)",
    )
    parser.add_argument("--json", action="store_true", help="print machine-readable JSON")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    serve = sub.add_parser("serve", help="run the local HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=DEFAULT_PORT)
    serve.add_argument("--scenario", help="scenario file backing capture requests")
    serve.add_argument("--registry", help="script registry CSV (default: bundled)")
    serve.add_argument("--ui-dir", help="directory of built web UI assets to serve at /")
    serve.set_defaults(func=cmd_serve)

    capture = sub.add_parser("capture", help="take and save a capture in one step")
    target = capture.add_mutually_exclusive_group(required=True)
    target.add_argument("--full", action="store_true", help="capture the whole screen")
    target.add_argument("--region", type=_region_arg, help="capture area as x,y,w,h")
    capture.add_argument("--scenario", required=True, help="scenario file or bundled name")
    capture.add_argument("--title", help="title override")
    capture.add_argument("--desc", help="description")
    capture.add_argument(
        "--deselect", type=_id_list, default=[], help="visible window ids to drop, comma-separated"
    )
    capture.add_argument(
        "--add-invisible",
        type=_id_list,
        default=[],
        help="invisible window ids to include, comma-separated",
    )
    capture.set_defaults(func=cmd_capture)

    listing = sub.add_parser("list", help="list captures, liked first then newest")
    listing.set_defaults(func=cmd_list)

    search = sub.add_parser("search", help="keyword search over captures")
    search.add_argument("query")
    search.set_defaults(func=cmd_search)

    like = sub.add_parser("like", help="pin a capture to the front of the collection")
    like.add_argument("capture_id")
    like.add_argument("--off", action="store_true", help="remove the like")
    like.set_defaults(func=cmd_like)

    reopen = sub.add_parser("reopen", help="relaunch the resources behind a capture")
    reopen.add_argument("capture_id")
    reopen.add_argument(
        "--resources", type=_id_list, help="window ids to reopen (default: selected set)"
    )
    reopen.add_argument("--registry", help="script registry CSV (default: bundled)")
    reopen.set_defaults(func=cmd_reopen)

    delete = sub.add_parser("delete", help="remove a capture and its image")
    delete.add_argument("capture_id")
    delete.set_defaults(func=cmd_delete)

    return parser


def _open_store(args) -> CaptureStore:
    return CaptureStore(args.data_dir or _default_data_dir())


def _now() -> datetime:
    return datetime.now(timezone.utc)


def _emit(args, payload) -> None:
    if args.json:
        print(json.dumps(payload, ensure_ascii=False, indent=2))


def _print_table(records, now) -> None:
    headers = ("id", "captured", "title", "liked", "resources")
    rows = [
        (
            r.capture_id,
            relative_timestamp(r.created_at, now),
            r.title,
            "yes" if r.liked else "no",
            str(len(r.resources)),
        )
        for r in records
    ]
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h) for i, h in enumerate(headers)]
    line = "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))
    print(line.rstrip())
    for row in rows:
        print("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())


# --- subcommands -----------------------------------------------------------------


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    store = _open_store(args)
    registry = load_script_registry(args.registry or bundled_data_dir() / "registry.csv")
    provider = None
    if args.scenario:
        provider = SimulatedProvider(load_scenario(resolve_scenario_path(args.scenario)))
    app = create_app(store, registry, provider=provider, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_capture(args) -> int:
    store = _open_store(args)
    provider = SimulatedProvider(load_scenario(resolve_scenario_path(args.scenario)))
    mode = CaptureMode.FULL_SCREEN if args.full else CaptureMode.SELECTED_AREA
    region = Rect(*args.region) if args.region else None
    now = _now()
    draft, image_bytes = perform_capture(provider, mode, region, now)
    edits = CaptureEdits(
        title=args.title,
        description=args.desc,
        deselect_ids=frozenset(args.deselect),
        add_invisible_ids=frozenset(args.add_invisible),
    )
    final = apply_user_edits(draft, edits)
    store.save(final, image_bytes)
    if args.json:
        _emit(args, record_payload(final, now))
    else:
        print(final.capture_id)
    return 0


def cmd_list(args) -> int:
    store = _open_store(args)
    now = _now()
    records = store.list_sorted()
    if args.json:
        _emit(args, [record_payload(r, now) for r in records])
    else:
        _print_table(records, now)
    return 0


def cmd_search(args) -> int:
    store = _open_store(args)
    now = _now()
    records = store.search(SearchQuery.parse(args.query))
    if args.json:
        _emit(args, [record_payload(r, now) for r in records])
    else:
        _print_table(records, now)
    return 0


def cmd_like(args) -> int:
    store = _open_store(args)
    record = store.update_fields(args.capture_id, liked=not args.off)
    if args.json:
        _emit(args, record_payload(record, _now()))
    else:
        print(f"{'unliked' if args.off else 'liked'} {record.capture_id}")
    return 0


def cmd_reopen(args) -> int:
    store = _open_store(args)
    registry = load_script_registry(args.registry or bundled_data_dir() / "registry.csv")
    record = store.get(args.capture_id)
    ids = set(args.resources) if args.resources is not None else None
    plan = plan_restore(record, ids, registry)
    executor = EchoExecutor()
    done = execute_restore(plan.actions, executor)
    if args.json:
        _emit(args, reopen_payload(record.capture_id, done, plan.skipped))
    else:
        for action in done:
            status = "ok" if action.executed else f"failed: {action.error}"
            print(f"[{status}] {action.command}")
        for skip in plan.skipped:
            print(f"[skipped] {skip.window_id}: {skip.reason.value}")
    return 0


def cmd_delete(args) -> int:
    store = _open_store(args)
    store.delete(args.capture_id)
    if args.json:
        _emit(args, {"deleted": args.capture_id})
    else:
        print(f"deleted {args.capture_id}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SnapshelfError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
