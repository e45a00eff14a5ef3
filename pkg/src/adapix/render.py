"""Deterministic raster and vector rendering of pixelated grids.

Every cell is painted one flat color: observed cells by palette position
``(z_display - lo) / (hi - lo)``, missing cells blue, certain zeros white.
Images are exact: ``n_x * px_per_cell`` by ``n_y * px_per_cell`` device
pixels (plus a fixed-height legend strip when enabled), row 0 of the image
is the northernmost row, and identical inputs yield identical PNG bytes.

The default palette runs from cream to dark red in five stops:
(255, 245, 224), (252, 199, 141), (240, 128, 77), (196, 48, 43),
(110, 9, 16), evenly spaced on [0, 1].
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .alloc import AllocationMap
from .engine import PixelatedGrid
from .errors import DegenerateRangeWarning, InconsistentInputs
from .grid import CellKind
from .ladder import BigPixelPartition

__all__ = [
    "DEFAULT_PALETTE",
    "MISSING_COLOR",
    "ZERO_COLOR",
    "LEGEND_HEIGHT",
    "RenderConfig",
    "render_map",
    "render_allocation",
    "render_svg",
]

RGB = tuple[int, int, int]

DEFAULT_PALETTE: tuple[RGB, ...] = (
    (255, 245, 224),
    (252, 199, 141),
    (240, 128, 77),
    (196, 48, 43),
    (110, 9, 16),
)
MISSING_COLOR: RGB = (65, 105, 225)
ZERO_COLOR: RGB = (255, 255, 255)

# Legend strip: a white gap then a horizontal palette ramp, appended below
# the map when enabled.  Fixed height regardless of grid size.
LEGEND_GAP = 4
LEGEND_RAMP = 12
LEGEND_HEIGHT = LEGEND_GAP + LEGEND_RAMP


@dataclass(frozen=True)
class RenderConfig:
    """Rendering options shared by the raster and vector backends.

    Attributes:
        px_per_cell: Device pixels per grid cell (>= 1).
        palette: At least two RGB stops, evenly spaced on [0, 1], linearly
            interpolated in between.
        missing_color: Fill for missing cells.
        zero_color: Fill for certain-zero cells.
        value_range: Optional (lo, hi) overriding the observed display range
            used for palette normalization; values outside clamp.
        legend: Append the palette ramp strip below raster maps.
    """

    px_per_cell: int = 1
    palette: tuple[RGB, ...] = DEFAULT_PALETTE
    missing_color: RGB = MISSING_COLOR
    zero_color: RGB = ZERO_COLOR
    value_range: tuple[float, float] | None = None
    legend: bool = False

    def __post_init__(self) -> None:
        if self.px_per_cell < 1:
            raise ValueError("px_per_cell must be >= 1")
        if len(self.palette) < 2:
            raise ValueError("palette needs at least two stops")
        for color in (*self.palette, self.missing_color, self.zero_color):
            if len(color) != 3 or any(not (0 <= c <= 255) for c in color):
                raise ValueError(f"bad RGB color {color!r}")
        if self.value_range is not None and not (self.value_range[0] < self.value_range[1]):
            raise ValueError("value_range must satisfy lo < hi")


# --- palette --------------------------------------------------------------


def _palette_rgb(t: np.ndarray, palette: tuple[RGB, ...]) -> np.ndarray:
    """Interpolate palette colors at positions ``t`` (clamped to [0, 1])."""
    stops = np.asarray(palette, dtype=np.float64)
    pos = np.linspace(0.0, 1.0, len(palette))
    t = np.clip(np.asarray(t, dtype=np.float64), 0.0, 1.0)
    idx = np.clip(np.searchsorted(pos, t, side="right") - 1, 0, len(palette) - 2)
    span = pos[idx + 1] - pos[idx]
    frac = (t - pos[idx]) / span
    rgb = stops[idx] * (1.0 - frac)[..., None] + stops[idx + 1] * frac[..., None]
    return np.rint(rgb).astype(np.uint8)


def _norm_bounds(observed_values: np.ndarray, config: RenderConfig) -> tuple[float, float] | None:
    """Normalization range for display values, or None to pin everything to
    the lowest stop (empty or single-valued range with no override).
    """
    if config.value_range is not None:
        return config.value_range
    if observed_values.size == 0:
        return None
    lo, hi = float(observed_values.min()), float(observed_values.max())
    if lo == hi:
        warnings.warn(
            "all display values are equal; painting the lowest palette stop",
            DegenerateRangeWarning,
            stacklevel=3,
        )
        return None
    return lo, hi


def _positions(values: np.ndarray, bounds: tuple[float, float] | None) -> np.ndarray:
    if bounds is None:
        return np.zeros(np.shape(values), dtype=np.float64)
    lo, hi = bounds
    return np.clip((np.asarray(values, dtype=np.float64) - lo) / (hi - lo), 0.0, 1.0)


# --- raster backend -------------------------------------------------------


def _encode_png(cells: np.ndarray, config: RenderConfig) -> bytes:
    """Flip to north-up, scale by px_per_cell, append legend, encode PNG."""
    scaled = np.repeat(
        np.repeat(np.flipud(cells), config.px_per_cell, axis=0), config.px_per_cell, axis=1
    )
    if config.legend:
        width = scaled.shape[1]
        gap = np.full((LEGEND_GAP, width, 3), 255, dtype=np.uint8)
        t = np.zeros(width) if width == 1 else np.arange(width) / (width - 1)
        ramp = np.repeat(_palette_rgb(t, config.palette)[None, :, :], LEGEND_RAMP, axis=0)
        scaled = np.concatenate([scaled, gap, ramp], axis=0)
    buf = io.BytesIO()
    Image.fromarray(np.ascontiguousarray(scaled), mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def _cell_colors(pixelated: PixelatedGrid, config: RenderConfig) -> np.ndarray:
    colors = np.empty((pixelated.spec.n_y, pixelated.spec.n_x, 3), dtype=np.uint8)
    colors[:, :] = config.missing_color
    colors[pixelated.kind == CellKind.CERTAIN_ZERO] = config.zero_color
    observed = pixelated.observed_mask
    if bool(observed.any()):
        values = pixelated.display_value[observed]
        t = _positions(values, _norm_bounds(values, config))
        colors[observed] = _palette_rgb(t, config.palette)
    return colors


def render_map(pixelated: PixelatedGrid, config: RenderConfig = RenderConfig()) -> bytes:
    """Render the pixelated values map as PNG bytes.

    Returns:
        PNG data, byte-identical across runs for identical inputs.
    """
    return _encode_png(_cell_colors(pixelated, config), config)


def render_allocation(
    partition: BigPixelPartition,
    alloc: AllocationMap,
    config: RenderConfig = RenderConfig(),
) -> bytes:
    """Render the per-big-pixel interval allocation as PNG bytes.

    Each allocated big pixel is one flat tone from a K-step discretization
    of the palette (interval K darkest); unallocated big pixels take the
    missing color.  The image covers the same cell extent as
    :func:`render_map`.
    """
    if alloc.interval.shape != (partition.n_big_y, partition.n_big_x):
        raise InconsistentInputs("allocation shape does not match the partition")
    k_count = alloc.num_sizes
    lut = np.empty((k_count + 1, 3), dtype=np.uint8)
    lut[0] = config.missing_color
    steps = np.arange(k_count) / max(k_count - 1, 1)
    lut[1:] = _palette_rgb(steps, config.palette)

    per_cell = np.repeat(
        np.repeat(alloc.interval, partition.big_side, axis=0), partition.big_side, axis=1
    )[: partition.spec.n_y, : partition.spec.n_x]
    return _encode_png(lut[per_cell], config)


# --- vector backend -------------------------------------------------------


def _hex(color: np.ndarray | RGB) -> str:
    r, g, b = (int(c) for c in color)
    return f"#{r:02x}{g:02x}{b:02x}"


def render_svg(pixelated: PixelatedGrid, config: RenderConfig = RenderConfig()) -> str:
    """Render the pixelated map as SVG: one rectangle per nested pixel.

    Observed regions contribute one rect per nested pixel (its full clipped
    footprint); missing and certain-zero cells contribute one single-cell
    rect each.  Colors match :func:`render_map` exactly.
    """
    spec = pixelated.spec
    scale = config.px_per_cell
    width, height = spec.n_x * scale, spec.n_y * scale
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]

    fill_by_pixel: dict[int, str] = {}
    if pixelated.pixels:
        # Normalize against the observed display values, like render_map;
        # every observed cell shows its pixel's mean, so the colors agree.
        bounds = _norm_bounds(pixelated.display_value[pixelated.observed_mask], config)
        means = np.asarray([p.prediction_mean for p in pixelated.pixels])
        colors = _palette_rgb(_positions(means, bounds), config.palette)
        fill_by_pixel = {p.pixel_id: _hex(colors[n]) for n, p in enumerate(pixelated.pixels)}

    for p in pixelated.pixels:
        x = p.x0 * scale
        y = (spec.n_y - p.y1) * scale
        w = (p.x1 - p.x0) * scale
        h = (p.y1 - p.y0) * scale
        parts.append(
            f'<rect x="{x}" y="{y}" width="{w}" height="{h}" fill="{fill_by_pixel[p.pixel_id]}"/>'
        )

    for j in range(spec.n_y):
        for i in range(spec.n_x):
            k = pixelated.kind[j, i]
            if k == CellKind.OBSERVED:
                continue
            fill = config.zero_color if k == CellKind.CERTAIN_ZERO else config.missing_color
            x, y = i * scale, (spec.n_y - j - 1) * scale
            parts.append(
                f'<rect x="{x}" y="{y}" width="{scale}" height="{scale}" fill="{_hex(fill)}"/>'
            )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
