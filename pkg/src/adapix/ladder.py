"""Nested pixel-size ladders and the big-pixel partition of a grid.

A ladder is a strictly increasing chain of pixel sides (in cells) where each
side divides the next, so pixels of one size tile pixels of every larger
size.  The largest side tiles the whole grid into "big pixels", the units
whose average uncertainty later decides how coarsely each region is drawn.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import GridTooSmall, InconsistentInputs, LadderOverflow
from .grid import CellKind, LatticeSpec, PredictionGrid

__all__ = [
    "MAX_PIXEL_SIDE",
    "SCALE_MODES",
    "SizeLadder",
    "build_ladder",
    "BigPixelPartition",
    "partition_grid",
    "big_pixel_stats",
]

# Hard bound on any pixel side, in cells.  Ladders grow geometrically or
# faster, so this is reached after a handful of steps with large factors.
MAX_PIXEL_SIDE = 2**31

SCALE_MODES = ("imult", "iexpn")


@dataclass(frozen=True)
class SizeLadder:
    """Increasing sequence of nested pixel sides.

    ``sizes[0]`` is always 1 (single cell, full resolution) and
    ``sizes[-1]`` is the big-pixel side.  Consecutive sides divide evenly.
    """

    num_sizes: int
    mode: str
    factor: int
    sizes: tuple[int, ...]

    @property
    def big_side(self) -> int:
        return self.sizes[-1]


def build_ladder(num_sizes: int, mode: str = "imult", factor: int = 1) -> SizeLadder:
    """Build the pixel-size ladder for ``num_sizes`` classes.

    Starting from a single cell, each step multiplies the side by
    ``1 + factor`` ("imult") or by ``(1 + factor) ** k`` at step k
    ("iexpn", an ever-accelerating growth).

    Args:
        num_sizes: Number of distinct pixel sizes K (>= 1).
        mode: One of ``"imult"`` or ``"iexpn"``.
        factor: Positive integer growth factor.

    Returns:
        The ladder, e.g. ``build_ladder(6, "imult", 1).sizes == (1, 2, 4, 8, 16, 32)``.

    Raises:
        LadderOverflow: A side would exceed ``MAX_PIXEL_SIDE``.
        ValueError: Bad ``num_sizes``, ``mode`` or ``factor``.
    """
    if num_sizes < 1:
        raise ValueError(f"num_sizes must be >= 1, got {num_sizes}")
    if mode not in SCALE_MODES:
        raise ValueError(f"unknown scale mode {mode!r}; expected one of {SCALE_MODES}")
    if factor < 1:
        raise ValueError(f"factor must be a positive integer, got {factor}")

    sizes = [1]
    for k in range(1, num_sizes):
        step = (1 + factor) if mode == "imult" else (1 + factor) ** k
        nxt = sizes[-1] * step
        if nxt > MAX_PIXEL_SIDE:
            raise LadderOverflow(
                f"pixel side {nxt} at step {k + 1} exceeds the supported "
                f"maximum of {MAX_PIXEL_SIDE} cells"
            )
        sizes.append(nxt)
    return SizeLadder(num_sizes=num_sizes, mode=mode, factor=factor, sizes=tuple(sizes))


def _max_feasible_num_sizes(side: int, mode: str, factor: int) -> int:
    """Longest ladder whose top side fits within ``side`` cells."""
    if side < 1:
        return 0
    best = 1
    current = 1
    k = 1
    while True:
        step = (1 + factor) if mode == "imult" else (1 + factor) ** k
        current *= step
        if current > side:
            return best
        best += 1
        k += 1


@dataclass(frozen=True)
class BigPixelPartition:
    """Tiling of a grid by big pixels of side ``big_side`` cells.

    Big pixels are anchored at cell (0, 0); the top row and right column may
    be partial.  ``included_count`` and ``avg_uncertainty`` (shape
    ``(n_big_y, n_big_x)``) are filled in by :func:`big_pixel_stats` and are
    ``None`` on a freshly partitioned grid.
    """

    spec: LatticeSpec
    big_side: int
    n_big_x: int
    n_big_y: int
    included_count: np.ndarray | None = None
    avg_uncertainty: np.ndarray | None = None

    @property
    def n_big(self) -> int:
        return self.n_big_x * self.n_big_y

    def big_index(self, bi: int, bj: int) -> int:
        """Row-major index of big pixel (bi, bj) from the lower-left."""
        return bj * self.n_big_x + bi

    def cell_range(self, bi: int, bj: int) -> tuple[int, int, int, int]:
        """Half-open cell range ``(x0, y0, x1, y1)`` of big pixel (bi, bj)."""
        x0 = bi * self.big_side
        y0 = bj * self.big_side
        x1 = min(x0 + self.big_side, self.spec.n_x)
        y1 = min(y0 + self.big_side, self.spec.n_y)
        return x0, y0, x1, y1

    @property
    def has_stats(self) -> bool:
        return self.included_count is not None and self.avg_uncertainty is not None


def partition_grid(
    spec: LatticeSpec, ladder: SizeLadder, min_big: tuple[int, int] = (12, 12)
) -> BigPixelPartition:
    """Partition the lattice into big pixels of side ``ladder.big_side``.

    Args:
        spec: Lattice geometry to tile.
        ladder: Size ladder whose largest side defines the big pixels.
        min_big: Minimum acceptable number of big pixels ``(L_x, L_y)``
            along each axis.

    Returns:
        The partition geometry (statistics unfilled).

    Raises:
        GridTooSmall: Fewer than ``min_big`` big pixels would fit; the error
            names the largest feasible big-pixel side and ladder length.
    """
    l_x, l_y = min_big
    if l_x < 1 or l_y < 1:
        raise ValueError("min_big must be at least (1, 1)")
    side = ladder.big_side
    n_big_x = -(-spec.n_x // side)
    n_big_y = -(-spec.n_y // side)
    if n_big_x < l_x or n_big_y < l_y:
        feasible_side = min(spec.n_x // l_x, spec.n_y // l_y)
        feasible_k = _max_feasible_num_sizes(feasible_side, ladder.mode, ladder.factor)
        raise GridTooSmall(
            f"big-pixel side {side} yields a {n_big_x} x {n_big_y} tiling, below "
            f"the required {l_x} x {l_y}; largest feasible side is {feasible_side} "
            f"(num_sizes up to {feasible_k} with mode={ladder.mode!r}, "
            f"factor={ladder.factor})",
            feasible_side=feasible_side,
            feasible_num_sizes=feasible_k,
        )
    return BigPixelPartition(spec=spec, big_side=side, n_big_x=n_big_x, n_big_y=n_big_y)


def big_pixel_stats(grid: PredictionGrid, partition: BigPixelPartition) -> BigPixelPartition:
    """Fill per-big-pixel statistics over the observed cells.

    ``included_count`` is the number of observed cells in each big pixel and
    ``avg_uncertainty`` their arithmetic mean uncertainty (NaN where no cell
    is observed).  Missing and certain-zero cells are excluded throughout.

    Raises:
        InconsistentInputs: ``partition`` was built for a different lattice.
    """
    if partition.spec != grid.spec:
        raise InconsistentInputs("partition geometry does not match the grid lattice")

    counts = np.zeros((partition.n_big_y, partition.n_big_x), dtype=np.int64)
    avgs = np.full((partition.n_big_y, partition.n_big_x), np.nan, dtype=np.float64)
    observed = grid.kind == CellKind.OBSERVED
    for bj in range(partition.n_big_y):
        for bi in range(partition.n_big_x):
            x0, y0, x1, y1 = partition.cell_range(bi, bj)
            mask = observed[y0:y1, x0:x1]
            cnt = int(mask.sum())
            counts[bj, bi] = cnt
            if cnt:
                avgs[bj, bi] = float(grid.uncertainty[y0:y1, x0:x1][mask].mean())
    return replace(partition, included_count=counts, avg_uncertainty=avgs)
