from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

from adapix.grid import CellKind, LatticeSpec, PredictionGrid

sys.path.insert(0, str(Path(__file__).parent))  # makes oracles importable


def random_grid(
    rng: np.random.Generator,
    *,
    n_x: int | None = None,
    n_y: int | None = None,
    missing_frac: float = 0.15,
    zero_frac: float = 0.05,
    cell_w: float = 1.0,
    cell_h: float = 1.0,
) -> PredictionGrid:
    """Random grid with a mix of observed, missing and certain-zero cells."""
    n_x = int(rng.integers(8, 65)) if n_x is None else n_x
    n_y = int(rng.integers(8, 65)) if n_y is None else n_y
    kind = np.full((n_y, n_x), CellKind.OBSERVED, dtype=np.uint8)
    draw = rng.random((n_y, n_x))
    kind[draw < missing_frac] = CellKind.MISSING
    kind[(draw >= missing_frac) & (draw < missing_frac + zero_frac)] = CellKind.CERTAIN_ZERO

    value = rng.normal(0.0, 10.0, (n_y, n_x))
    uncertainty = rng.random((n_y, n_x))
    value[kind == CellKind.MISSING] = np.nan
    uncertainty[kind == CellKind.MISSING] = np.nan
    value[kind == CellKind.CERTAIN_ZERO] = 0.0
    uncertainty[kind == CellKind.CERTAIN_ZERO] = 0.0

    spec = LatticeSpec(0.0, 0.0, cell_w, cell_h, n_x, n_y)
    return PredictionGrid(spec=spec, kind=kind, value=value, uncertainty=uncertainty)


def worked_grid_4x4(*, cell: float = 1.0) -> PredictionGrid:
    """The hand-checked 4x4 grid: v = x + 4y, u = 0.1 left half, 0.9 right."""
    records = []
    for y in range(4):
        for x in range(4):
            records.append((x * cell, y * cell, float(x + 4 * y), 0.1 if x < 2 else 0.9))
    from adapix.grid import build_grid

    return build_grid(records)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)
