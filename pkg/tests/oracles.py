"""Independent reference implementations used to cross-check the library.

These deliberately share no code with the package: the quantile oracle
scans interpolation segments one by one, and the mean oracle uses
``math.fsum``.  Expected values frozen into the tests were computed with
these functions (or by hand where noted).
"""

from __future__ import annotations

import math
from typing import Sequence


def quantile_bruteforce(values: Sequence[float], num_sizes: int) -> list[float]:
    """Interior quantiles at levels k/K by scanning every segment.

    For each level the fractional rank h = (M - 1) * p + 1 is located by
    walking the M - 1 segments between consecutive order statistics and
    interpolating inside the one that contains it.
    """
    xs = sorted(float(v) for v in values)
    m = len(xs)
    if m == 0:
        raise ValueError("empty sample")
    out = []
    for k in range(1, num_sizes):
        p = k / num_sizes
        h = (m - 1) * p + 1
        if m == 1:
            out.append(xs[0])
            continue
        q = xs[-1]
        for seg in range(1, m):
            if seg <= h <= seg + 1:
                q = xs[seg - 1] + (h - seg) * (xs[seg] - xs[seg - 1])
                break
        out.append(q)
    return out


def fsum_mean(values: Sequence[float]) -> float:
    """Arithmetic mean via compensated summation."""
    vals = list(values)
    return math.fsum(vals) / len(vals)


def close_rel(a: float, b: float, rtol: float = 1e-12) -> bool:
    """|a - b| within rtol relative to max(1, |b|)."""
    return abs(a - b) <= rtol * max(1.0, abs(b))
