"""One-call composition of the pixelation steps.

Convenience layer used by the CLI and the report figures; each step remains
individually callable for finer control.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alloc import AllocationMap, allocate_intervals, empirical_quantiles
from .engine import PixelatedGrid, SummaryTable, pixelate, summarize
from .grid import PredictionGrid
from .ladder import BigPixelPartition, SizeLadder, big_pixel_stats, build_ladder, partition_grid

__all__ = ["PixelationParams", "PipelineResult", "run_allocation", "run_pipeline"]


@dataclass(frozen=True)
class PixelationParams:
    """Tunable knobs of a pixelation run, with the standard defaults."""

    num_sizes: int = 6
    scale_mode: str = "imult"
    factor: int = 1
    min_big: tuple[int, int] = (12, 12)


@dataclass(frozen=True)
class PipelineResult:
    ladder: SizeLadder
    partition: BigPixelPartition
    alloc: AllocationMap
    pixelated: PixelatedGrid
    summary: SummaryTable


def run_allocation(
    grid: PredictionGrid, params: PixelationParams = PixelationParams()
) -> tuple[SizeLadder, BigPixelPartition, AllocationMap]:
    """Ladder, partition with statistics, and interval allocation for a grid.

    A grid with no observed cells skips quantile estimation (an empty sample
    has none) and gets an all-unallocated map.
    """
    ladder = build_ladder(params.num_sizes, params.scale_mode, params.factor)
    partition = big_pixel_stats(grid, partition_grid(grid.spec, ladder, params.min_big))
    counts = partition.included_count
    assert counts is not None
    if int(counts.sum()) == 0:
        alloc = AllocationMap.empty(ladder.num_sizes, counts.shape)
    else:
        values = partition.avg_uncertainty[counts > 0]
        boundaries = empirical_quantiles([float(v) for v in values], ladder.num_sizes)
        alloc = allocate_intervals(partition, boundaries, ladder.num_sizes)
    return ladder, partition, alloc


def run_pipeline(grid: PredictionGrid, params: PixelationParams = PixelationParams()) -> PipelineResult:
    """Ladder, partition, allocate, pixelate and summarize a grid in one call."""
    ladder, partition, alloc = run_allocation(grid, params)
    pixelated = pixelate(grid, partition, alloc, ladder)
    summary = summarize(pixelated, alloc, ladder)
    return PipelineResult(
        ladder=ladder, partition=partition, alloc=alloc, pixelated=pixelated, summary=summary
    )
