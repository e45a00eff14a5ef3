"""Regular-lattice prediction grids and cell-state classification.

A grid holds one prediction value and one uncertainty per cell of a regular
rectangular lattice.  Cells are row-major with cell (0, 0) at the lower-left
corner; coordinates refer to cell centers.  Each cell is in exactly one of
three states:

* ``OBSERVED``      -- a finite value with a finite non-negative uncertainty,
* ``MISSING``       -- no usable value (rendered specially, never averaged),
* ``CERTAIN_ZERO``  -- value and uncertainty both within a zero tolerance
  (known zeros that must stay visible at full resolution).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateCoordinate,
    InvertedInterval,
    IrregularLattice,
    NegativeUncertainty,
    NonFiniteValue,
)

__all__ = [
    "CellKind",
    "CellState",
    "MISSING",
    "CERTAIN_ZERO",
    "LatticeSpec",
    "PredictionGrid",
    "ALIGNMENT_RTOL",
    "classify_cell",
    "derive_uncertainty",
    "build_grid",
]

# Relative tolerance (fraction of the cell spacing) used when snapping input
# coordinates onto the inferred lattice.
ALIGNMENT_RTOL = 1e-6


class CellKind(enum.IntEnum):
    """Discriminant for the three cell states, stored per cell as uint8."""

    OBSERVED = 0
    MISSING = 1
    CERTAIN_ZERO = 2


@dataclass(frozen=True)
class CellState:
    """One cell's state; ``value``/``uncertainty`` are set only when observed."""

    kind: CellKind
    value: float | None = None
    uncertainty: float | None = None

    @staticmethod
    def observed(value: float, uncertainty: float) -> "CellState":
        return CellState(CellKind.OBSERVED, float(value), float(uncertainty))


MISSING = CellState(CellKind.MISSING)
CERTAIN_ZERO = CellState(CellKind.CERTAIN_ZERO)


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry of a regular rectangular lattice.

    Attributes:
        origin_x: x coordinate of the center of cell (0, 0).
        origin_y: y coordinate of the center of cell (0, 0).
        cell_w: Cell spacing along x, in map units (> 0).
        cell_h: Cell spacing along y, in map units (> 0).
        n_x: Number of columns (>= 1).
        n_y: Number of rows (>= 1).
    """

    origin_x: float
    origin_y: float
    cell_w: float
    cell_h: float
    n_x: int
    n_y: int

    def __post_init__(self) -> None:
        if not (self.cell_w > 0 and self.cell_h > 0):
            raise ValueError("cell spacing must be positive")
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError("grid must have at least one row and one column")

    @property
    def n_cells(self) -> int:
        return self.n_x * self.n_y

    def cell_center(self, i: int, j: int) -> tuple[float, float]:
        """Map-unit center of cell (i, j)."""
        return (self.origin_x + i * self.cell_w, self.origin_y + j * self.cell_h)

    def x_coords(self) -> np.ndarray:
        return self.origin_x + np.arange(self.n_x, dtype=np.float64) * self.cell_w

    def y_coords(self) -> np.ndarray:
        return self.origin_y + np.arange(self.n_y, dtype=np.float64) * self.cell_h


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PredictionGrid:
    """Immutable grid of cell states over a :class:`LatticeSpec`.

    Arrays are shaped ``(n_y, n_x)`` and indexed ``[j, i]`` so that flattening
    yields row-major order from the lower-left cell.  ``value`` and
    ``uncertainty`` hold NaN for missing cells and 0.0 for certain zeros.
    """

    spec: LatticeSpec
    kind: np.ndarray
    value: np.ndarray
    uncertainty: np.ndarray

    def __post_init__(self) -> None:
        shape = (self.spec.n_y, self.spec.n_x)
        for name in ("kind", "value", "uncertainty"):
            arr = getattr(self, name)
            if arr.shape != shape:
                raise ValueError(f"{name} array has shape {arr.shape}, expected {shape}")
        _readonly(self.kind)
        _readonly(self.value)
        _readonly(self.uncertainty)

    # --- queries ----------------------------------------------------------

    @property
    def observed_mask(self) -> np.ndarray:
        return self.kind == CellKind.OBSERVED

    def state_counts(self) -> dict[str, int]:
        """Number of cells per state, keyed by lower-case state name."""
        return {
            "observed": int(np.sum(self.kind == CellKind.OBSERVED)),
            "missing": int(np.sum(self.kind == CellKind.MISSING)),
            "certain_zero": int(np.sum(self.kind == CellKind.CERTAIN_ZERO)),
        }

    def cell(self, i: int, j: int) -> CellState:
        k = CellKind(int(self.kind[j, i]))
        if k is CellKind.OBSERVED:
            return CellState.observed(float(self.value[j, i]), float(self.uncertainty[j, i]))
        return MISSING if k is CellKind.MISSING else CERTAIN_ZERO

    def equals(self, other: "PredictionGrid") -> bool:
        """Exact (bitwise) equality of geometry and every cell state."""
        return (
            self.spec == other.spec
            and np.array_equal(self.kind, other.kind)
            and np.array_equal(self.value, other.value, equal_nan=True)
            and np.array_equal(self.uncertainty, other.uncertainty, equal_nan=True)
        )

    def to_records(self) -> list[tuple[float, float, float | None, float | None]]:
        """Export every cell as ``(x, y, value, uncertainty)`` records.

        Missing cells export with ``None`` fields; certain zeros export as
        literal ``(0.0, 0.0)``.  Feeding the records back through
        :func:`build_grid` with any non-negative zero tolerance reproduces
        this grid cell for cell.
        """
        records: list[tuple[float, float, float | None, float | None]] = []
        for j in range(self.spec.n_y):
            for i in range(self.spec.n_x):
                x, y = self.spec.cell_center(i, j)
                k = self.kind[j, i]
                if k == CellKind.MISSING:
                    records.append((x, y, None, None))
                else:
                    records.append((x, y, float(self.value[j, i]), float(self.uncertainty[j, i])))
        return records


# --- classification -------------------------------------------------------


def classify_cell(value: float, uncertainty: float, zero_tol: float) -> CellState:
    """Classify one finite (value, uncertainty) pair.

    A cell is a certain zero when ``|value| <= zero_tol`` and
    ``uncertainty <= zero_tol``; otherwise it is observed.  Finiteness and
    non-negativity are enforced by the callers that assemble grids.
    """
    if abs(value) <= zero_tol and uncertainty <= zero_tol:
        return CERTAIN_ZERO
    return CellState.observed(value, uncertainty)


def derive_uncertainty(lo: float, hi: float) -> float:
    """Uncertainty of an interval-valued prediction: its width ``hi - lo``.

    Raises:
        InvertedInterval: If ``lo > hi``.
    """
    if lo > hi:
        raise InvertedInterval(f"interval lower bound {lo!r} exceeds upper bound {hi!r}")
    return hi - lo


# --- lattice inference ----------------------------------------------------


def _infer_spacing(coords: Sequence[float]) -> float:
    """Cell spacing along one axis: the smallest positive gap between the
    sorted distinct coordinates.  A single distinct coordinate (one row or
    column) defaults to spacing 1.
    """
    distinct = sorted(set(coords))
    if len(distinct) == 1:
        return 1.0
    return min(b - a for a, b in zip(distinct, distinct[1:]))


def _snap_index(coord: float, origin: float, spacing: float, axis: str) -> int:
    pos = (coord - origin) / spacing
    idx = int(round(pos))
    if abs(coord - (origin + idx * spacing)) > ALIGNMENT_RTOL * spacing:
        raise IrregularLattice(
            f"{axis} coordinate {coord!r} is not aligned with the inferred "
            f"spacing {spacing!r} (origin {origin!r})"
        )
    return idx


def build_grid(
    records: Iterable[tuple[float, float, float | None, float | None]],
    zero_tol: float = 0.0,
) -> PredictionGrid:
    """Assemble a :class:`PredictionGrid` from point records.

    The lattice is inferred from the coordinates: spacing per axis is the
    smallest positive gap between distinct values, the origin is the minimum
    coordinate, and every record must land within ``ALIGNMENT_RTOL`` of a
    lattice point.  Lattice cells with no record become missing, as do
    records whose value or uncertainty is absent (``None``).

    Args:
        records: Iterable of ``(x, y, value, uncertainty)`` tuples; value and
            uncertainty may each be ``None`` to mark a gap.
        zero_tol: Non-negative tolerance below which a cell counts as a
            certain zero (both ``|value|`` and ``uncertainty`` within it).

    Returns:
        The assembled grid.

    Raises:
        IrregularLattice: Coordinates do not form a regular lattice.
        DuplicateCoordinate: Two records land on the same cell.
        NegativeUncertainty: A present uncertainty is negative.
        NonFiniteValue: A coordinate or present field is NaN or infinite.
        ValueError: ``records`` is empty or ``zero_tol`` is negative.
    """
    if zero_tol < 0:
        raise ValueError("zero_tol must be non-negative")
    rows = list(records)
    if not rows:
        raise ValueError("cannot build a grid from zero records")

    for idx, (x, y, _v, _u) in enumerate(rows):
        if not (math.isfinite(x) and math.isfinite(y)):
            err = NonFiniteValue(f"record {idx}: non-finite coordinate ({x!r}, {y!r})")
            err.record_index = idx
            raise err

    xs = [r[0] for r in rows]
    ys = [r[1] for r in rows]
    cell_w = _infer_spacing(xs)
    cell_h = _infer_spacing(ys)
    origin_x = min(xs)
    origin_y = min(ys)

    indexed: dict[tuple[int, int], tuple[int, float | None, float | None]] = {}
    n_x = 0
    n_y = 0
    for idx, (x, y, v, u) in enumerate(rows):
        try:
            i = _snap_index(x, origin_x, cell_w, "x")
            j = _snap_index(y, origin_y, cell_h, "y")
        except IrregularLattice as err:
            err.record_index = idx  # lets file readers report a line number
            raise
        if (i, j) in indexed:
            err = DuplicateCoordinate(
                f"record {idx}: cell ({i}, {j}) at ({x!r}, {y!r}) already assigned"
            )
            err.record_index = idx
            raise err
        indexed[(i, j)] = (idx, v, u)
        n_x = max(n_x, i + 1)
        n_y = max(n_y, j + 1)

    spec = LatticeSpec(origin_x, origin_y, cell_w, cell_h, n_x, n_y)
    kind = np.full((n_y, n_x), CellKind.MISSING, dtype=np.uint8)
    value = np.full((n_y, n_x), np.nan, dtype=np.float64)
    uncertainty = np.full((n_y, n_x), np.nan, dtype=np.float64)

    for (i, j), (idx, v, u) in indexed.items():
        if v is None or u is None:
            continue
        if not (math.isfinite(v) and math.isfinite(u)):
            err = NonFiniteValue(f"record {idx}: non-finite value {v!r} or uncertainty {u!r}")
            err.record_index = idx
            raise err
        if u < 0:
            err = NegativeUncertainty(f"record {idx}: uncertainty {u!r} is negative")
            err.record_index = idx
            raise err
        state = classify_cell(v, u, zero_tol)
        if state.kind is CellKind.CERTAIN_ZERO:
            kind[j, i] = CellKind.CERTAIN_ZERO
            value[j, i] = 0.0
            uncertainty[j, i] = 0.0
        else:
            kind[j, i] = CellKind.OBSERVED
            value[j, i] = v
            uncertainty[j, i] = u

    return PredictionGrid(spec=spec, kind=kind, value=value, uncertainty=uncertainty)
