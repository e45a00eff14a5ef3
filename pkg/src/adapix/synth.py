"""Deterministic synthetic prediction fields for demos and benchmarks.

The mean surface is a sum of Gaussian bumps; uncertainty grows smoothly with
distance from a handful of pseudo sampling sites (zero at a site, levelling
off at ``base_u`` far away).  Everything is drawn from one seeded generator,
so a configuration maps to exactly one grid, bit for bit, on this
implementation.  Cross-implementation reproducibility is not promised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnknownDataset
from .grid import CellKind, LatticeSpec, PredictionGrid

__all__ = ["SyntheticConfig", "generate_field", "bundled_dataset", "BUNDLED_DATASETS"]


@dataclass(frozen=True)
class SyntheticConfig:
    """Parameters of one synthetic field.

    Attributes:
        seed: RNG seed; same config, same grid.
        n_x: Columns.
        n_y: Rows.
        cell_w: Cell spacing along x, map units.
        cell_h: Cell spacing along y, map units.
        num_bumps: Gaussian bumps G in the mean surface.
        num_sites: Pseudo sampling sites S; 0 gives constant uncertainty
            (the degenerate allocation case).
        corr_range: Length scale rho, map units; bump widths are drawn from
            [rho/2, 2*rho] and site influence decays over rho.
        base_u: Uncertainty plateau far from every site.
        missing_rect: Optional half-open cell range (x0, y0, x1, y1) forced
            to missing.
        zero_threshold: Mean level at or below which a cell with uncertainty
            also at or below it becomes a certain zero.
    """

    seed: int
    n_x: int
    n_y: int
    cell_w: float = 1.0
    cell_h: float = 1.0
    num_bumps: int = 4
    num_sites: int = 3
    corr_range: float = 10.0
    base_u: float = 1.0
    missing_rect: tuple[int, int, int, int] | None = None
    zero_threshold: float = 0.0

    def __post_init__(self) -> None:
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError("grid must be at least 1 x 1")
        if self.num_bumps < 0 or self.num_sites < 0:
            raise ValueError("num_bumps and num_sites must be non-negative")
        if self.corr_range <= 0:
            raise ValueError("corr_range must be positive")
        if self.base_u < 0 or self.zero_threshold < 0:
            raise ValueError("base_u and zero_threshold must be non-negative")


def _draw_layout(
    config: SyntheticConfig,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Draw bump amplitudes/centers/widths and site centers from the seed.

    Sites land on cell centers, so the cell hosting a site has exactly zero
    uncertainty.  Returned as (amplitudes, centers, widths, sites); centers
    and sites are (N, 2) arrays of map coordinates.
    """
    rng = np.random.default_rng(config.seed)
    x_max = (config.n_x - 1) * config.cell_w
    y_max = (config.n_y - 1) * config.cell_h
    amps = rng.uniform(0.0, 1.0, size=config.num_bumps)
    centers = np.column_stack(
        [
            rng.uniform(0.0, x_max, size=config.num_bumps),
            rng.uniform(0.0, y_max, size=config.num_bumps),
        ]
    )
    widths = rng.uniform(config.corr_range / 2, 2 * config.corr_range, size=config.num_bumps)
    site_cells = rng.integers(0, config.n_x * config.n_y, size=config.num_sites)
    sites = np.column_stack(
        [
            (site_cells % config.n_x) * config.cell_w,
            (site_cells // config.n_x) * config.cell_h,
        ]
    ).astype(np.float64)
    return amps, centers, widths, sites


def generate_field(config: SyntheticConfig) -> PredictionGrid:
    """Generate the synthetic grid described by ``config``.

    The mean surface is ``sum_g a_g * exp(-d_g^2 / (2 w_g^2))`` and the
    uncertainty ``base_u * (1 - max_j exp(-d_j^2 / (2 rho^2)))`` with the
    empty-site maximum defined as 0.  Cells inside ``missing_rect`` become
    missing; cells whose mean and uncertainty both fall within
    ``zero_threshold`` become certain zeros.
    """
    amps, centers, widths, sites = _draw_layout(config)
    spec = LatticeSpec(0.0, 0.0, config.cell_w, config.cell_h, config.n_x, config.n_y)

    gx, gy = np.meshgrid(spec.x_coords(), spec.y_coords())
    mean = np.zeros((config.n_y, config.n_x), dtype=np.float64)
    for a, (cx, cy), w in zip(amps, centers, widths):
        d2 = (gx - cx) ** 2 + (gy - cy) ** 2
        mean += a * np.exp(-d2 / (2 * w * w))

    proximity = np.zeros_like(mean)
    for sx, sy in sites:
        d2 = (gx - sx) ** 2 + (gy - sy) ** 2
        proximity = np.maximum(proximity, np.exp(-d2 / (2 * config.corr_range**2)))
    unc = config.base_u * (1.0 - proximity)

    kind = np.full((config.n_y, config.n_x), CellKind.OBSERVED, dtype=np.uint8)
    value = mean.copy()
    uncertainty = unc.copy()

    zero = (mean <= config.zero_threshold) & (unc <= config.zero_threshold)
    kind[zero] = CellKind.CERTAIN_ZERO
    value[zero] = 0.0
    uncertainty[zero] = 0.0

    if config.missing_rect is not None:
        x0, y0, x1, y1 = config.missing_rect
        if not (0 <= x0 < x1 <= config.n_x and 0 <= y0 < y1 <= config.n_y):
            raise ValueError(f"missing_rect {config.missing_rect} is outside the grid")
        kind[y0:y1, x0:x1] = CellKind.MISSING
        value[y0:y1, x0:x1] = np.nan
        uncertainty[y0:y1, x0:x1] = np.nan

    return PredictionGrid(spec=spec, kind=kind, value=value, uncertainty=uncertainty)


# --- bundled datasets -----------------------------------------------------

# Fixed configurations shipped with the package: a small all-states demo and
# the larger field used by the acceptance benchmark run.
BUNDLED_DATASETS: dict[str, SyntheticConfig] = {
    "demo_small": SyntheticConfig(
        seed=1,
        n_x=64,
        n_y=64,
        cell_w=1.0,
        cell_h=1.0,
        num_bumps=4,
        num_sites=3,
        corr_range=12.0,
        base_u=1.0,
        missing_rect=(20, 20, 30, 30),
        zero_threshold=0.2,
    ),
    "demo_acceptance": SyntheticConfig(
        seed=7,
        n_x=512,
        n_y=512,
        cell_w=5.0,
        cell_h=5.0,
        num_bumps=8,
        num_sites=12,
        corr_range=300.0,
        base_u=1.0,
        missing_rect=None,
        zero_threshold=0.0,
    ),
}


def bundled_dataset(name: str) -> PredictionGrid:
    """Generate one of the named bundled datasets.

    Raises:
        UnknownDataset: ``name`` is not a bundled configuration.
    """
    try:
        config = BUNDLED_DATASETS[name]
    except KeyError:
        known = ", ".join(sorted(BUNDLED_DATASETS))
        raise UnknownDataset(f"no bundled dataset {name!r}; known: {known}") from None
    return generate_field(config)
