"""Adaptive pixelation: replace values by nested block averages.

Each big pixel is tiled by blocks of the ladder size matching its allocated
interval, anchored at the big pixel's lower-left corner and clipped at big
pixel and grid edges.  Observed cells take their block's mean value; missing
and certain-zero cells pass through untouched.

Block means are defined as sequential accumulation over observed member
cells in row-major order from the lower-left, so the fast path and the naive
reference path (:func:`pixelate_naive`) produce bit-identical grids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alloc import AllocationMap
from .errors import InconsistentInputs
from .grid import CellKind, LatticeSpec, PredictionGrid
from .ladder import BigPixelPartition, SizeLadder

__all__ = [
    "PixelInfo",
    "PixelatedGrid",
    "SummaryRow",
    "SummaryTable",
    "pixelate",
    "pixelate_naive",
    "summarize",
]


@dataclass(frozen=True)
class PixelInfo:
    """One nested pixel: its id, footprint and block statistics.

    ``(x0, y0, x1, y1)`` is the half-open cell range the pixel covers after
    clipping.  ``pixel_id`` encodes (big-pixel index, block index) as
    ``big_index * big_side**2 + block_index`` and is stable across runs.
    """

    pixel_id: int
    size_class: int
    x0: int
    y0: int
    x1: int
    y1: int
    included_count: int
    prediction_mean: float
    uncertainty_mean: float


@dataclass(frozen=True)
class PixelatedGrid:
    """Result of pixelation over a :class:`PredictionGrid`.

    Per-cell arrays are shaped ``(n_y, n_x)`` like the source grid.  For
    cells that are not observed, ``display_value``/``pixel_u_mean`` hold NaN
    (0.0 for certain zeros in ``display_value``), ``size_class`` holds 0 and
    ``pixel_id`` holds -1.
    """

    spec: LatticeSpec
    kind: np.ndarray
    display_value: np.ndarray
    size_class: np.ndarray
    pixel_id: np.ndarray
    pixel_u_mean: np.ndarray
    pixels: tuple[PixelInfo, ...]

    def __post_init__(self) -> None:
        for name in ("kind", "display_value", "size_class", "pixel_id", "pixel_u_mean"):
            getattr(self, name).setflags(write=False)

    @property
    def observed_mask(self) -> np.ndarray:
        return self.kind == CellKind.OBSERVED

    def equals(self, other: "PixelatedGrid") -> bool:
        """Exact (bitwise) equality of every array and the pixel table."""
        return (
            self.spec == other.spec
            and np.array_equal(self.kind, other.kind)
            and np.array_equal(self.display_value, other.display_value, equal_nan=True)
            and np.array_equal(self.size_class, other.size_class)
            and np.array_equal(self.pixel_id, other.pixel_id)
            and np.array_equal(self.pixel_u_mean, other.pixel_u_mean, equal_nan=True)
            and self.pixels == other.pixels
        )


# --- shared validation ----------------------------------------------------


def _check_inputs(
    grid: PredictionGrid,
    partition: BigPixelPartition,
    alloc: AllocationMap,
    ladder: SizeLadder,
) -> None:
    if partition.spec != grid.spec:
        raise InconsistentInputs("partition was built for a different lattice")
    if alloc.interval.shape != (partition.n_big_y, partition.n_big_x):
        raise InconsistentInputs("allocation shape does not match the partition")
    if alloc.num_sizes != ladder.num_sizes:
        raise InconsistentInputs("allocation and ladder disagree on the number of sizes")
    if partition.big_side != ladder.big_side:
        raise InconsistentInputs("partition and ladder disagree on the big-pixel side")
    if alloc.interval.size and int(alloc.interval.max()) > ladder.num_sizes:
        raise InconsistentInputs("allocation contains an interval beyond the ladder")


def _sequential_mean(values: np.ndarray) -> float:
    """Mean by explicit left-to-right accumulation (the contract order)."""
    acc = 0.0
    for v in values.tolist():
        acc += v
    return acc / values.size


# --- fast path ------------------------------------------------------------


def pixelate(
    grid: PredictionGrid,
    partition: BigPixelPartition,
    alloc: AllocationMap,
    ladder: SizeLadder,
) -> PixelatedGrid:
    """Pixelate a grid according to an interval allocation.

    Args:
        grid: Source prediction grid.
        partition: Big-pixel partition of ``grid``'s lattice.
        alloc: Interval per big pixel (from :func:`adapix.alloc.allocate_intervals`).
        ladder: Size ladder shared by ``partition`` and ``alloc``.

    Returns:
        The pixelated grid; bit-identical to :func:`pixelate_naive` on the
        same inputs.

    Raises:
        InconsistentInputs: The inputs do not describe one coherent run.
    """
    _check_inputs(grid, partition, alloc, ladder)
    spec = grid.spec
    n_x, n_y = spec.n_x, spec.n_y
    side = partition.big_side

    iy, ix = np.indices((n_y, n_x))
    big_i = ix // side
    big_j = iy // side
    k_map = alloc.interval[big_j, big_i]

    observed = grid.kind == CellKind.OBSERVED
    if bool(np.any(observed & (k_map == 0))):
        raise InconsistentInputs("observed cell inside an unallocated big pixel")

    # Per-cell block geometry, vectorized; index 0 of the size lookup is a
    # sentinel for unallocated big pixels and never reaches an observed cell.
    size_lut = np.asarray((1,) + ladder.sizes, dtype=np.int64)
    s_map = size_lut[k_map]
    local_i = ix - big_i * side
    local_j = iy - big_j * side
    blk_i = local_i // s_map
    blk_j = local_j // s_map
    big_x1 = np.minimum((big_i + 1) * side, n_x)
    big_y1 = np.minimum((big_j + 1) * side, n_y)
    blocks_per_row = -((big_i * side - big_x1) // s_map)
    block_index = blk_j * blocks_per_row + blk_i
    pid = (big_j * partition.n_big_x + big_i).astype(np.int64) * (side * side) + block_index

    blk_x0 = big_i * side + blk_i * s_map
    blk_y0 = big_j * side + blk_j * s_map
    blk_x1 = np.minimum(blk_x0 + s_map, big_x1)
    blk_y1 = np.minimum(blk_y0 + s_map, big_y1)

    display = np.full((n_y, n_x), np.nan, dtype=np.float64)
    pixel_u = np.full((n_y, n_x), np.nan, dtype=np.float64)
    size_class = np.zeros((n_y, n_x), dtype=np.int64)
    pixel_id = np.full((n_y, n_x), -1, dtype=np.int64)
    display[grid.kind == CellKind.CERTAIN_ZERO] = 0.0

    pixels: list[PixelInfo] = []
    if bool(np.any(observed)):
        pid_obs = pid[observed]
        uniq, first, inverse = np.unique(pid_obs, return_index=True, return_inverse=True)
        counts = np.bincount(inverse)
        # bincount accumulates weights sequentially in input order, i.e. in
        # row-major cell order: the contract's summation order.
        sums = np.bincount(inverse, weights=grid.value[observed])
        usums = np.bincount(inverse, weights=grid.uncertainty[observed])
        means = sums / counts
        umeans = usums / counts

        display[observed] = means[inverse]
        pixel_u[observed] = umeans[inverse]
        size_class[observed] = k_map[observed]
        pixel_id[observed] = pid_obs

        k_obs = k_map[observed]
        bx0, by0 = blk_x0[observed], blk_y0[observed]
        bx1, by1 = blk_x1[observed], blk_y1[observed]
        for t in range(uniq.size):
            f = first[t]
            pixels.append(
                PixelInfo(
                    pixel_id=int(uniq[t]),
                    size_class=int(k_obs[f]),
                    x0=int(bx0[f]),
                    y0=int(by0[f]),
                    x1=int(bx1[f]),
                    y1=int(by1[f]),
                    included_count=int(counts[t]),
                    prediction_mean=float(means[t]),
                    uncertainty_mean=float(umeans[t]),
                )
            )

    return PixelatedGrid(
        spec=spec,
        kind=grid.kind.copy(),
        display_value=display,
        size_class=size_class,
        pixel_id=pixel_id,
        pixel_u_mean=pixel_u,
        pixels=tuple(pixels),
    )


# --- naive reference path -------------------------------------------------


def pixelate_naive(
    grid: PredictionGrid,
    partition: BigPixelPartition,
    alloc: AllocationMap,
    ladder: SizeLadder,
) -> PixelatedGrid:
    """Reference pixelation: per-cell scalar geometry plus whole-grid scans.

    For every observed cell this recomputes the cell's block bounds from
    scratch with scalar arithmetic, then finds the block's members by
    comparing every grid cell's coordinates against those bounds.  Scans are
    memoized per block; the group-by machinery of :func:`pixelate` is never
    used.  Deliberately simple and slow; exists to cross-check the fast path.
    """
    _check_inputs(grid, partition, alloc, ladder)
    spec = grid.spec
    n_x, n_y = spec.n_x, spec.n_y
    side = partition.big_side

    col_of, row_of = np.meshgrid(np.arange(n_x), np.arange(n_y))
    observed = grid.kind == CellKind.OBSERVED

    display = np.full((n_y, n_x), np.nan, dtype=np.float64)
    pixel_u = np.full((n_y, n_x), np.nan, dtype=np.float64)
    size_class = np.zeros((n_y, n_x), dtype=np.int64)
    pixel_id = np.full((n_y, n_x), -1, dtype=np.int64)
    display[grid.kind == CellKind.CERTAIN_ZERO] = 0.0

    by_bounds: dict[tuple[int, int, int, int], tuple[int, float, float]] = {}
    table: dict[int, PixelInfo] = {}

    for j in range(n_y):
        for i in range(n_x):
            if not observed[j, i]:
                continue
            big_i, big_j = i // side, j // side
            k = int(alloc.interval[big_j, big_i])
            if k == 0:
                raise InconsistentInputs("observed cell inside an unallocated big pixel")
            s = ladder.sizes[k - 1]
            big_x0, big_y0 = big_i * side, big_j * side
            big_x1, big_y1 = min(big_x0 + side, n_x), min(big_y0 + side, n_y)
            blk_i, blk_j = (i - big_x0) // s, (j - big_y0) // s
            x0, y0 = big_x0 + blk_i * s, big_y0 + blk_j * s
            x1, y1 = min(x0 + s, big_x1), min(y0 + s, big_y1)
            blocks_per_row = -(-(big_x1 - big_x0) // s)
            pid = (big_j * partition.n_big_x + big_i) * side * side + (
                blk_j * blocks_per_row + blk_i
            )

            bounds = (x0, y0, x1, y1)
            if bounds not in by_bounds:
                members = (
                    (col_of >= x0) & (col_of < x1) & (row_of >= y0) & (row_of < y1) & observed
                )
                vals = grid.value[members]
                uncs = grid.uncertainty[members]
                by_bounds[bounds] = (
                    int(vals.size),
                    _sequential_mean(vals),
                    _sequential_mean(uncs),
                )
            count, mean, umean = by_bounds[bounds]

            display[j, i] = mean
            pixel_u[j, i] = umean
            size_class[j, i] = k
            pixel_id[j, i] = pid
            if pid not in table:
                table[pid] = PixelInfo(
                    pixel_id=pid,
                    size_class=k,
                    x0=x0,
                    y0=y0,
                    x1=x1,
                    y1=y1,
                    included_count=count,
                    prediction_mean=mean,
                    uncertainty_mean=umean,
                )

    return PixelatedGrid(
        spec=spec,
        kind=grid.kind.copy(),
        display_value=display,
        size_class=size_class,
        pixel_id=pixel_id,
        pixel_u_mean=pixel_u,
        pixels=tuple(table[p] for p in sorted(table)),
    )


# --- summaries ------------------------------------------------------------


@dataclass(frozen=True)
class SummaryRow:
    """Reporting row for one size class (uncertainty range is (lo, hi])."""

    size_class: int
    side_cells: int
    side_w: float
    side_h: float
    cells_per_full_pixel: int
    big_pixel_count: int
    u_lo: float
    u_hi: float


@dataclass(frozen=True)
class SummaryTable:
    rows: tuple[SummaryRow, ...]


def summarize(
    pixelated: PixelatedGrid, alloc: AllocationMap, ladder: SizeLadder
) -> SummaryTable:
    """One row per size class: pixel side, uncertainty range, usage counts.

    The uncertainty column reports the allocation interval (q_{k-1}, q_k]
    with -inf and +inf at the ends; boundaries are NaN when nothing was
    allocated.  These are the parameters that must travel with any published
    pixelated map.
    """
    if alloc.num_sizes != ladder.num_sizes:
        raise InconsistentInputs("allocation and ladder disagree on the number of sizes")
    spec = pixelated.spec
    k_count = ladder.num_sizes
    qs = (float("-inf"),) + alloc.boundaries + (float("inf"),)
    rows = []
    for k in range(1, k_count + 1):
        s = ladder.sizes[k - 1]
        rows.append(
            SummaryRow(
                size_class=k,
                side_cells=s,
                side_w=s * spec.cell_w,
                side_h=s * spec.cell_h,
                cells_per_full_pixel=s * s,
                big_pixel_count=int(np.sum(alloc.interval == k)),
                u_lo=qs[k - 1],
                u_hi=qs[k],
            )
        )
    return SummaryTable(rows=tuple(rows))
