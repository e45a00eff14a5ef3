"""Empirical quantile boundaries and interval allocation for big pixels.

The K-1 interior quantiles of the big-pixel average uncertainties split the
uncertainty axis into K closed-right intervals; big pixels in interval k are
later drawn with nested pixels of the k-th ladder size.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import floor
from typing import Sequence

import numpy as np

from .errors import BoundaryMismatch, ConstantUncertaintyWarning, EmptyValues
from .ladder import BigPixelPartition

__all__ = [
    "empirical_quantiles",
    "AllocationMap",
    "allocate_intervals",
]


def empirical_quantiles(values: Sequence[float], num_sizes: int) -> tuple[float, ...]:
    """Interior quantiles q_1 .. q_{K-1} of a sample at levels k/K.

    Uses linear interpolation between order statistics: for level p the
    fractional rank is ``h = (M - 1) * p + 1`` over the sorted sample
    v_(1) <= ... <= v_(M), and the quantile interpolates between
    v_(floor(h)) and the next order statistic.

    Args:
        values: Sample values (any order, ties allowed).
        num_sizes: Number of intervals K (>= 1); K - 1 boundaries are
            returned, so K = 1 yields an empty tuple.

    Raises:
        EmptyValues: ``values`` is empty.
    """
    xs = sorted(float(v) for v in values)
    m = len(xs)
    if m == 0:
        raise EmptyValues("cannot take quantiles of an empty sample")
    if num_sizes < 1:
        raise ValueError(f"num_sizes must be >= 1, got {num_sizes}")

    boundaries = []
    for k in range(1, num_sizes):
        p = k / num_sizes
        h = (m - 1) * p + 1
        j = floor(h)
        g = h - j
        q = xs[j - 1] if g == 0 or j >= m else xs[j - 1] + g * (xs[j] - xs[j - 1])
        boundaries.append(q)
    return tuple(boundaries)


@dataclass(frozen=True)
class AllocationMap:
    """Interval index per big pixel.

    ``interval`` has shape ``(n_big_y, n_big_x)``; entries are 1..K for big
    pixels holding at least one observed cell and 0 for unallocated (empty)
    big pixels.  ``degenerate`` records that every allocated big pixel shared
    one uncertainty, in which case all of them sit in interval 1.
    """

    num_sizes: int
    boundaries: tuple[float, ...]
    interval: np.ndarray
    degenerate: bool = False

    def __post_init__(self) -> None:
        self.interval.setflags(write=False)

    @staticmethod
    def empty(num_sizes: int, shape: tuple[int, int]) -> "AllocationMap":
        """All-unallocated map for a grid with no observed cells.

        Boundaries are NaN: quantiles of an empty sample are undefined.
        """
        return AllocationMap(
            num_sizes=num_sizes,
            boundaries=(float("nan"),) * (num_sizes - 1),
            interval=np.zeros(shape, dtype=np.int64),
        )


def allocate_intervals(
    partition: BigPixelPartition,
    boundaries: Sequence[float],
    num_sizes: int,
) -> AllocationMap:
    """Assign each non-empty big pixel the smallest interval containing it.

    Big pixel average uncertainty u lands in interval
    ``min{k : u <= q_k}`` with q_K treated as +infinity, so ties on a
    boundary resolve to the smaller (finer) interval.

    Args:
        partition: Partition with statistics filled in.
        boundaries: Interior quantiles q_1 .. q_{K-1}, non-decreasing.
        num_sizes: Number of intervals K.

    Raises:
        BoundaryMismatch: ``len(boundaries) != num_sizes - 1``.
        ValueError: Partition statistics are missing.

    Warns:
        ConstantUncertaintyWarning: Every allocated big pixel has the same
            average uncertainty; all get interval 1 and pixel sizes will not
            vary across the map.
    """
    if not partition.has_stats:
        raise ValueError("partition statistics are unfilled; run big_pixel_stats first")
    if len(boundaries) != num_sizes - 1:
        raise BoundaryMismatch(
            f"got {len(boundaries)} boundaries for {num_sizes} sizes; expected {num_sizes - 1}"
        )

    counts = partition.included_count
    avgs = partition.avg_uncertainty
    allocated = counts > 0
    interval = np.zeros((partition.n_big_y, partition.n_big_x), dtype=np.int64)

    degenerate = False
    if np.any(allocated):
        vals = avgs[allocated]
        if float(vals.min()) == float(vals.max()):
            degenerate = True
            warnings.warn(
                "all big pixels share one average uncertainty; pixel sizes "
                "will not vary across the map",
                ConstantUncertaintyWarning,
                stacklevel=2,
            )
            interval[allocated] = 1
        else:
            # searchsorted(left) counts boundaries strictly below u, which is
            # exactly min{k : u <= q_k} - 1 under the closed-right convention.
            qs = np.asarray(boundaries, dtype=np.float64)
            interval[allocated] = np.searchsorted(qs, vals, side="left") + 1

    return AllocationMap(
        num_sizes=num_sizes,
        boundaries=tuple(float(q) for q in boundaries),
        interval=interval,
        degenerate=degenerate,
    )
