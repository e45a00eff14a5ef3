"""Adaptive pixelation of prediction grids by uncertainty.

Regions whose predictions are uncertain are drawn with coarse pixels (block
averages over many cells); regions known precisely keep full resolution.
The coarseness is allocated by empirical quantiles of per-big-pixel average
uncertainty over a divisible ladder of pixel sizes.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .alloc import AllocationMap, allocate_intervals, empirical_quantiles
from .engine import (
    PixelInfo,
    PixelatedGrid,
    SummaryRow,
    SummaryTable,
    pixelate,
    pixelate_naive,
    summarize,
)
from .errors import (
    AdapixError,
    AdapixWarning,
    BoundaryMismatch,
    ConstantUncertaintyWarning,
    DegenerateRangeWarning,
    DuplicateCoordinate,
    EmptyValues,
    GridModelError,
    GridTooSmall,
    HeaderMismatch,
    InconsistentInputs,
    InvertedInterval,
    IrregularLattice,
    LadderOverflow,
    ManifestError,
    NegativeUncertainty,
    NonFiniteValue,
    ParseError,
    SchemaError,
    UnknownDataset,
)
from .grid import (
    CERTAIN_ZERO,
    MISSING,
    CellKind,
    CellState,
    LatticeSpec,
    PredictionGrid,
    build_grid,
    classify_cell,
    derive_uncertainty,
)
from .io import (
    read_ascii_grid_pair,
    read_csv,
    write_grid_csv,
    write_pixelated_csv,
    write_summary,
)
from .ladder import (
    BigPixelPartition,
    SizeLadder,
    big_pixel_stats,
    build_ladder,
    partition_grid,
)
from .manifest import RunManifest
from .pipeline import PipelineResult, PixelationParams, run_allocation, run_pipeline
from .render import (
    DEFAULT_PALETTE,
    MISSING_COLOR,
    ZERO_COLOR,
    RenderConfig,
    render_allocation,
    render_map,
    render_svg,
)
from .synth import BUNDLED_DATASETS, SyntheticConfig, bundled_dataset, generate_field

__all__ = [
    "__version__",
    # grid model
    "CellKind",
    "CellState",
    "MISSING",
    "CERTAIN_ZERO",
    "LatticeSpec",
    "PredictionGrid",
    "build_grid",
    "classify_cell",
    "derive_uncertainty",
    # ladder and partition
    "SizeLadder",
    "BigPixelPartition",
    "build_ladder",
    "partition_grid",
    "big_pixel_stats",
    # allocation
    "AllocationMap",
    "empirical_quantiles",
    "allocate_intervals",
    # engine
    "PixelInfo",
    "PixelatedGrid",
    "SummaryRow",
    "SummaryTable",
    "pixelate",
    "pixelate_naive",
    "summarize",
    # pipeline
    "PixelationParams",
    "PipelineResult",
    "run_allocation",
    "run_pipeline",
    # synthetic fields
    "SyntheticConfig",
    "generate_field",
    "bundled_dataset",
    "BUNDLED_DATASETS",
    # file I/O
    "read_csv",
    "read_ascii_grid_pair",
    "write_grid_csv",
    "write_pixelated_csv",
    "write_summary",
    # rendering
    "RenderConfig",
    "render_map",
    "render_allocation",
    "render_svg",
    "DEFAULT_PALETTE",
    "MISSING_COLOR",
    "ZERO_COLOR",
    # manifests
    "RunManifest",
    # errors and warnings
    "AdapixError",
    "GridModelError",
    "IrregularLattice",
    "DuplicateCoordinate",
    "NegativeUncertainty",
    "NonFiniteValue",
    "InvertedInterval",
    "LadderOverflow",
    "GridTooSmall",
    "EmptyValues",
    "BoundaryMismatch",
    "InconsistentInputs",
    "SchemaError",
    "ParseError",
    "HeaderMismatch",
    "UnknownDataset",
    "ManifestError",
    "AdapixWarning",
    "ConstantUncertaintyWarning",
    "DegenerateRangeWarning",
]
