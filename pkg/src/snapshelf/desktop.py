"""Desktop access layer: window enumeration and screen capture.

The only in-repo implementation is scenario-backed: a JSON file describes
the screen and the window stack, and screenshots are rendered from it as
solid rectangles labeled with the app name. A native adapter would
implement the same ``DesktopProvider`` protocol against OS APIs.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from importlib.resources import files
from pathlib import Path
from typing import Optional, Protocol, runtime_checkable

from PIL import Image, ImageDraw, ImageFont

from .errors import (
    InvalidInputError,
    InvalidRegionError,
    ProviderError,
    ScenarioError,
    SnapshelfError,
)
from .model import CaptureMode, ResourceKind, ResourceLocator, WindowSnapshot
from .visibility import Rect, ScreenDims

BACKGROUND_COLOR = (0x20, 0x20, 0x20)

# Fill colors assigned to windows without an explicit scenario color,
# cycled by stacking index. Label text uses a darkened fill, so every
# window contributes exactly two colors to the rendered image.
_PALETTE = (
    "#e6194b",
    "#3cb44b",
    "#ffe119",
    "#4363d8",
    "#f58231",
    "#911eb4",
    "#46f0f0",
    "#f032e6",
    "#bcf60c",
    "#fabebe",
)

_LABEL_SHADE = 0.55


def parse_color(text: str) -> tuple[int, int, int]:
    if len(text) != 7 or text[0] != "#":
        raise ScenarioError(f"color must look like #rrggbb, got {text!r}")
    try:
        return tuple(int(text[i : i + 2], 16) for i in (1, 3, 5))
    except ValueError:
        raise ScenarioError(f"color must look like #rrggbb, got {text!r}") from None


def label_color(fill: tuple[int, int, int]) -> tuple[int, int, int]:
    return tuple(int(c * _LABEL_SHADE) for c in fill)


@dataclass(frozen=True)
class Scenario:
    """A screen plus its window stack, front-to-back."""

    screen: ScreenDims
    windows: tuple[WindowSnapshot, ...]
    colors: tuple[Optional[str], ...] = field(default=())

    def __post_init__(self):
        if not self.colors:
            object.__setattr__(self, "colors", (None,) * len(self.windows))
        if len(self.colors) != len(self.windows):
            raise ScenarioError("colors must align one-to-one with windows")
        for i, win in enumerate(self.windows):
            if win.z_index != i:
                raise ScenarioError(
                    f"window {win.window_id!r} has z_index {win.z_index}, "
                    f"expected {i} from stack order"
                )
        ids = [w.window_id for w in self.windows]
        if len(set(ids)) != len(ids):
            raise ScenarioError("duplicate window_id in scenario")
        for color in self.colors:
            if color is not None:
                parse_color(color)

    def fill_color(self, index: int) -> tuple[int, int, int]:
        explicit = self.colors[index]
        if explicit is not None:
            return parse_color(explicit)
        return parse_color(_PALETTE[index % len(_PALETTE)])


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario {path} is not valid JSON: {exc}") from exc
    return scenario_from_dict(raw)


def scenario_from_dict(raw: dict) -> Scenario:
    try:
        screen = ScreenDims(raw["screen"]["width_px"], raw["screen"]["height_px"])
        windows = []
        colors = []
        for i, w in enumerate(raw["windows"]):
            locator = None
            if w.get("locator") is not None:
                locator = ResourceLocator(
                    kind=ResourceKind(w["locator"]["kind"]),
                    value=w["locator"]["value"],
                )
            bounds = w["bounds"]
            windows.append(
                WindowSnapshot(
                    window_id=w["window_id"],
                    app_name=w["app_name"],
                    window_title=w["window_title"],
                    bounds=Rect(bounds["x"], bounds["y"], bounds["w"], bounds["h"]),
                    z_index=i,
                    locator=locator,
                )
            )
            colors.append(w.get("color"))
    except (KeyError, TypeError) as exc:
        raise ScenarioError(f"scenario missing or malformed field: {exc}") from exc
    except (ValueError, InvalidInputError) as exc:
        raise ScenarioError(f"invalid scenario value: {exc}") from exc
    return Scenario(screen=screen, windows=tuple(windows), colors=tuple(colors))


def bundled_data_dir() -> Path:
    return Path(str(files("snapshelf").joinpath("data")))


def resolve_scenario_path(name: str | Path) -> Path:
    """Accept either a filesystem path or the bare name of a bundled file."""
    direct = Path(name)
    if direct.is_file():
        return direct
    bundled = bundled_data_dir() / str(name)
    if bundled.is_file():
        return bundled
    raise ScenarioError(f"scenario not found: {name}")


# --- provider ----------------------------------------------------------------


@runtime_checkable
class DesktopProvider(Protocol):
    def screen(self) -> ScreenDims: ...

    def windows(self) -> tuple[WindowSnapshot, ...]: ...

    def screenshot_png(self, region: Rect) -> bytes: ...


class SimulatedProvider:
    """Serves scenario contents as the live desktop state."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self._rendered: Optional[Image.Image] = None

    def screen(self) -> ScreenDims:
        return self.scenario.screen

    def windows(self) -> tuple[WindowSnapshot, ...]:
        return self.scenario.windows

    def screenshot_png(self, region: Rect) -> bytes:
        clipped = region.clipped(self.scenario.screen)
        if clipped.is_empty():
            raise InvalidRegionError(f"region {region} lies outside the screen")
        if self._rendered is None:
            self._rendered = render_desktop_image(self.scenario)
        crop = self._rendered.crop(
            (clipped.x, clipped.y, clipped.right, clipped.bottom)
        )
        buf = io.BytesIO()
        crop.save(buf, format="PNG")
        return buf.getvalue()


def render_desktop_image(scenario: Scenario) -> Image.Image:
    """Paint the stack back-to-front: solid fill per window, app name
    stamped in a darkened shade of the same fill."""
    screen = scenario.screen
    img = Image.new("RGB", (screen.width_px, screen.height_px), BACKGROUND_COLOR)
    font = ImageFont.load_default()
    for index in range(len(scenario.windows) - 1, -1, -1):
        win = scenario.windows[index]
        rect = win.bounds.clipped(screen)
        if rect.is_empty():
            continue
        fill = scenario.fill_color(index)
        img.paste(fill, (rect.x, rect.y, rect.right, rect.bottom))
        _stamp_label(img, rect, win.app_name, label_color(fill), font)
    return img


def _stamp_label(img, rect, text, color, font):
    if not text:
        return
    # Draw into a window-sized stencil and hard-threshold it, so the
    # label never bleeds over the window edge and never antialiases
    # into in-between colors.
    stencil = Image.new("L", (rect.w, rect.h), 0)
    ImageDraw.Draw(stencil).text((4, 2), text, fill=255, font=font)
    mask = stencil.point(lambda v: 255 if v >= 128 else 0).convert("1")
    solid = Image.new("RGB", (rect.w, rect.h), color)
    img.paste(solid, (rect.x, rect.y), mask)


# --- capture operations --------------------------------------------------------


def enumerate_windows(provider: DesktopProvider) -> tuple[ScreenDims, tuple[WindowSnapshot, ...]]:
    try:
        return provider.screen(), provider.windows()
    except SnapshelfError:
        raise
    except Exception as exc:
        raise ProviderError(f"window enumeration failed: {exc}") from exc


def grab_screenshot(
    provider: DesktopProvider,
    mode: CaptureMode,
    region: Optional[Rect] = None,
) -> tuple[bytes, Rect]:
    """Returns PNG bytes plus the region actually captured (clipped to
    the screen; the whole screen in full-screen mode)."""
    try:
        screen = provider.screen()
        if mode is CaptureMode.FULL_SCREEN:
            effective = screen.full_rect()
        else:
            if region is None:
                raise InvalidRegionError("selected_area capture requires a region")
            effective = region.clipped(screen)
            if effective.is_empty():
                raise InvalidRegionError(
                    f"region {region} is empty after clipping to the screen"
                )
        return provider.screenshot_png(effective), effective
    except SnapshelfError:
        raise
    except Exception as exc:
        raise ProviderError(f"screen capture failed: {exc}") from exc
