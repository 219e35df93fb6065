"""Window-visibility detection on a downsampled screen grid.

A capture region and a stack of windows (ordered front to back) are
rasterized onto a coarse boolean grid. Walking the stack front to back,
each window claims the grid cells it still owns inside the remaining
area of interest; a window counts as visible when its claimed cell count
strictly exceeds the configured threshold. The area of interest shrinks
as fronter windows claim cells, and the walk stops early once what is
left can no longer push any window over the threshold.

``rasterize_oracle`` computes the same ground truth by painting windows
back to front and counting topmost cells per window. It shares nothing
with the incremental algorithm beyond the cell-coverage rule and exists
so the two can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Protocol, Sequence

import numpy as np

from .errors import InvalidInputError

DEFAULT_DOWNSAMPLE_PX = 10
DEFAULT_THRESHOLD_CELLS = 0


@dataclass(frozen=True)
class Rect:
    """Axis-aligned pixel rectangle; x/y may be negative (off-screen hang)."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self) -> None:
        if self.w < 0 or self.h < 0:
            raise InvalidInputError(f"rect width/height must be >= 0, got {self.w}x{self.h}")

    @property
    def right(self) -> int:
        return self.x + self.w

    @property
    def bottom(self) -> int:
        return self.y + self.h

    def is_empty(self) -> bool:
        return self.w == 0 or self.h == 0

    def clipped(self, screen: "ScreenDims") -> "Rect":
        """Intersection with the screen; empty rects collapse to w=0/h=0."""
        x0 = max(self.x, 0)
        y0 = max(self.y, 0)
        x1 = min(self.right, screen.width_px)
        y1 = min(self.bottom, screen.height_px)
        if x1 <= x0 or y1 <= y0:
            return Rect(0, 0, 0, 0)
        return Rect(x0, y0, x1 - x0, y1 - y0)


@dataclass(frozen=True)
class ScreenDims:
    width_px: int
    height_px: int

    def __post_init__(self) -> None:
        if self.width_px < 1 or self.height_px < 1:
            raise InvalidInputError(
                f"screen dimensions must be >= 1, got {self.width_px}x{self.height_px}"
            )

    def full_rect(self) -> Rect:
        return Rect(0, 0, self.width_px, self.height_px)


@dataclass(frozen=True)
class VisibilityConfig:
    """Grid coarseness and the visibility cutoff.

    ``downsample_px`` is the side length of one grid cell in pixels.
    ``threshold_cells`` is exclusive: a window needs strictly more
    unoccluded cells than this to count as visible.
    """

    downsample_px: int = DEFAULT_DOWNSAMPLE_PX
    threshold_cells: int = DEFAULT_THRESHOLD_CELLS

    def __post_init__(self) -> None:
        if self.downsample_px < 1:
            raise InvalidInputError(f"downsample_px must be >= 1, got {self.downsample_px}")
        if self.threshold_cells < 0:
            raise InvalidInputError(f"threshold_cells must be >= 0, got {self.threshold_cells}")


@dataclass(eq=False)
class AreaMask:
    """Boolean occupancy grid over the downsampled screen, row-major."""

    cells: np.ndarray

    def __post_init__(self) -> None:
        if self.cells.dtype != np.bool_ or self.cells.ndim != 2:
            raise InvalidInputError("mask cells must be a 2-D boolean grid")

    @property
    def rows(self) -> int:
        return self.cells.shape[0]

    @property
    def cols(self) -> int:
        return self.cells.shape[1]

    def count(self) -> int:
        """Population count of occupied cells."""
        return int(np.count_nonzero(self.cells))


@dataclass(frozen=True)
class VisibilityReport:
    """Outcome of one visibility pass.

    ``visible_ids`` holds window indices front-to-back. ``overlap_cells``
    has an entry for every window examined before termination; windows
    skipped by an early exit are absent. ``terminated_early`` is set when
    the remaining area of interest dropped to the threshold or below
    before (or exactly as) the stack ran out.
    """

    visible_ids: tuple[int, ...]
    overlap_cells: Mapping[int, int]
    terminated_early: bool


class _HasBounds(Protocol):
    bounds: Rect


def _cell_centers(extent_px: int, downsample_px: int) -> np.ndarray:
    """Center-pixel coordinate of every cell along one axis.

    Cell ``j`` spans pixels ``[j*d, min((j+1)*d, extent))``; its center is
    the midpoint of the span actually on screen, so a partial edge cell
    keeps a valid on-screen center.
    """
    n = -(-extent_px // downsample_px)
    lo = np.arange(n, dtype=np.int64) * downsample_px
    hi = np.minimum(lo + downsample_px, extent_px)
    return lo + (hi - lo) // 2


def _center_span(centers: np.ndarray, lo: int, hi: int) -> tuple[int, int]:
    """Half-open index range of cells whose center c satisfies lo <= c < hi."""
    return (
        int(np.searchsorted(centers, lo, side="left")),
        int(np.searchsorted(centers, hi, side="left")),
    )


def _grid_shape(screen: ScreenDims, cfg: VisibilityConfig) -> tuple[int, int]:
    d = cfg.downsample_px
    return (-(-screen.height_px // d), -(-screen.width_px // d))


def _rect_mask(rect: Rect, screen: ScreenDims, cfg: VisibilityConfig) -> AreaMask:
    cells = np.zeros(_grid_shape(screen, cfg), dtype=np.bool_)
    cy = _cell_centers(screen.height_px, cfg.downsample_px)
    cx = _cell_centers(screen.width_px, cfg.downsample_px)
    r0, r1 = _center_span(cy, rect.y, rect.bottom)
    c0, c1 = _center_span(cx, rect.x, rect.right)
    cells[r0:r1, c0:c1] = True
    return AreaMask(cells)


def make_region_mask(region: Rect, screen: ScreenDims, cfg: VisibilityConfig) -> AreaMask:
    """Rasterize a capture region: cell true iff its center pixel lies in
    region ∩ screen. A full-screen region yields an all-true mask; an
    empty intersection yields an all-false one."""
    return _rect_mask(region, screen, cfg)


def window_mask(bounds: Rect, screen: ScreenDims, cfg: VisibilityConfig) -> AreaMask:
    """Rasterize window bounds under the same coverage rule as regions."""
    return _rect_mask(bounds, screen, cfg)


def identify_visible_windows(
    region: Rect,
    windows: Sequence[_HasBounds],
    screen: ScreenDims,
    cfg: Optional[VisibilityConfig] = None,
) -> VisibilityReport:
    """Decide which windows are (sufficiently) visible inside the region.

    Walks ``windows`` front to back over a shrinking area-of-interest
    grid. For window k the overlap with the remaining area is counted
    (the intersection of the window's cells with the area of interest);
    the window is visible iff that count strictly exceeds the threshold.
    The window's cells are then removed from the area of interest whether
    or not the window qualified, and the walk breaks as soon as the
    remaining cell count is at or below the threshold.

    ``windows`` must be strictly ordered frontmost first. An empty list
    yields an empty report.
    """
    cfg = cfg or VisibilityConfig()
    area = make_region_mask(region, screen, cfg).cells
    remaining = int(np.count_nonzero(area))
    cy = _cell_centers(screen.height_px, cfg.downsample_px)
    cx = _cell_centers(screen.width_px, cfg.downsample_px)

    visible: list[int] = []
    overlaps: dict[int, int] = {}
    terminated_early = False
    for k, win in enumerate(windows):
        b = win.bounds
        r0, r1 = _center_span(cy, b.y, b.bottom)
        c0, c1 = _center_span(cx, b.x, b.right)
        # The window's cells form a contiguous block, so the overlap with
        # the area of interest lives entirely inside this subgrid.
        sub = area[r0:r1, c0:c1]
        overlap = int(np.count_nonzero(sub))
        overlaps[k] = overlap
        if overlap > cfg.threshold_cells:
            visible.append(k)
        sub[:] = False  # subtract the window from the area of interest, unconditionally
        remaining -= overlap
        if remaining <= cfg.threshold_cells:
            terminated_early = True
            break

    return VisibilityReport(tuple(visible), overlaps, terminated_early)


def rasterize_oracle(
    region: Rect,
    windows: Sequence[_HasBounds],
    screen: ScreenDims,
    cfg: Optional[VisibilityConfig] = None,
) -> dict[int, int]:
    """Ground-truth topmost cell counts via painter's-algorithm rasterization.

    Paints windows back to front into an ownership grid, then counts, per
    window, the cells it tops within the region. A window is genuinely
    visible iff its count strictly exceeds the threshold. Deliberately a
    separate code path from :func:`identify_visible_windows`.
    """
    cfg = cfg or VisibilityConfig()
    cy = _cell_centers(screen.height_px, cfg.downsample_px)
    cx = _cell_centers(screen.width_px, cfg.downsample_px)

    def _covers(rect: Rect) -> np.ndarray:
        rows_in = (cy >= rect.y) & (cy < rect.bottom)
        cols_in = (cx >= rect.x) & (cx < rect.right)
        return rows_in[:, None] & cols_in[None, :]

    owner = np.zeros((len(cy), len(cx)), dtype=np.int32)
    for k in range(len(windows) - 1, -1, -1):
        owner[_covers(windows[k].bounds)] = k + 1  # 0 stays "no window"

    in_region = _covers(region)
    counts = np.bincount(owner[in_region], minlength=len(windows) + 1)
    return {k: int(counts[k + 1]) for k in range(len(windows))}
