"""Diagnostic report figure rendered with matplotlib.

One multi-panel PNG per run: the pixelated map, the interval allocation,
and the uncertainty distribution with its quantile boundaries.  This is a
human-facing companion to the byte-exact rasters from
:mod:`adapix.render`; figure bytes are not part of the stability contract.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .grid import PredictionGrid
from .pipeline import PipelineResult
from .render import RenderConfig, _cell_colors, _palette_rgb

__all__ = ["save_report_figure"]


def save_report_figure(
    grid: PredictionGrid,
    result: PipelineResult,
    path: str | Path,
    config: RenderConfig = RenderConfig(),
    dpi: int = 150,
) -> None:
    """Write the three-panel diagnostic figure for one pixelation run.

    Args:
        grid: The input grid (used for the uncertainty histogram).
        result: Pipeline output to visualize.
        path: Destination image file; format follows the extension.
        config: Colors shared with the exact renderers.
        dpi: Figure resolution.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    spec = grid.spec
    extent = (
        spec.origin_x - spec.cell_w / 2,
        spec.origin_x + (spec.n_x - 0.5) * spec.cell_w,
        spec.origin_y - spec.cell_h / 2,
        spec.origin_y + (spec.n_y - 0.5) * spec.cell_h,
    )

    fig, axes = plt.subplots(1, 3, figsize=(15, 5), constrained_layout=True)

    ax = axes[0]
    ax.imshow(_cell_colors(result.pixelated, config), origin="lower", extent=extent)
    ax.set_title("pixelated predictions")
    ax.set_xlabel("x")
    ax.set_ylabel("y")

    ax = axes[1]
    k_count = result.alloc.num_sizes
    lut = np.empty((k_count + 1, 3), dtype=np.uint8)
    lut[0] = config.missing_color
    lut[1:] = _palette_rgb(np.arange(k_count) / max(k_count - 1, 1), config.palette)
    per_cell = np.repeat(
        np.repeat(result.alloc.interval, result.partition.big_side, axis=0),
        result.partition.big_side,
        axis=1,
    )[: spec.n_y, : spec.n_x]
    ax.imshow(lut[per_cell], origin="lower", extent=extent)
    ax.set_title(f"size-class allocation (K={k_count})")
    ax.set_xlabel("x")

    ax = axes[2]
    counts = result.partition.included_count
    if counts is not None and int(counts.sum()) > 0:
        values = result.partition.avg_uncertainty[counts > 0]
        ax.hist(values, bins=min(30, max(5, values.size // 4)), color="#c4302b", alpha=0.8)
        for q in result.alloc.boundaries:
            if np.isfinite(q):
                ax.axvline(q, color="black", linestyle="--", linewidth=1)
        ax.set_title("big-pixel avg uncertainty and quantile cuts")
        ax.set_xlabel("average uncertainty")
        ax.set_ylabel("big pixels")
    else:
        ax.set_axis_off()
        ax.text(0.5, 0.5, "no observed cells", ha="center", va="center")

    fig.savefig(path, dpi=dpi)
    plt.close(fig)
