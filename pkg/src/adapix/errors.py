"""Exception and warning types shared across the package.

Every error raised deliberately by adapix derives from :class:`AdapixError`,
so callers (including the CLI) can distinguish validation failures from
genuine I/O faults, which surface as plain ``OSError``.
"""

from __future__ import annotations

__all__ = [
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


class AdapixError(Exception):
    """Base class for all validation errors raised by this package."""


class GridModelError(AdapixError):
    """Base class for errors raised while assembling a prediction grid."""


class IrregularLattice(GridModelError):
    """Coordinates do not sit on a regular rectangular lattice."""


class DuplicateCoordinate(GridModelError):
    """Two input records resolve to the same lattice cell."""


class NegativeUncertainty(GridModelError):
    """An uncertainty value is negative."""


class NonFiniteValue(GridModelError):
    """A value, uncertainty or coordinate is NaN or infinite."""


class InvertedInterval(GridModelError):
    """An interval has its lower bound above its upper bound."""


class LadderOverflow(AdapixError):
    """A size ladder grew past the supported pixel side (2**31 cells)."""


class GridTooSmall(AdapixError):
    """The grid cannot host the requested number of big pixels.

    Attributes:
        feasible_side: Largest big-pixel side (cells) the grid supports.
        feasible_num_sizes: Largest ladder length reachable with that side
            under the requested scale mode and factor (0 if none).
    """

    def __init__(self, message: str, *, feasible_side: int, feasible_num_sizes: int):
        super().__init__(message)
        self.feasible_side = feasible_side
        self.feasible_num_sizes = feasible_num_sizes


class EmptyValues(AdapixError):
    """A quantile request received an empty sample."""


class BoundaryMismatch(AdapixError):
    """Boundary count does not match the ladder (expected num_sizes - 1)."""


class InconsistentInputs(AdapixError):
    """Partition, allocation and ladder do not describe the same grid."""


class SchemaError(AdapixError):
    """A delimited input file does not match a supported column layout."""


class ParseError(AdapixError):
    """A field in a delimited or raster input could not be parsed."""


class HeaderMismatch(AdapixError):
    """Paired raster inputs disagree on their headers."""


class UnknownDataset(AdapixError):
    """No bundled dataset with the requested name exists."""


class ManifestError(AdapixError):
    """A run manifest is missing required keys or holds unusable values."""


# --- warnings -------------------------------------------------------------


class AdapixWarning(UserWarning):
    """Base class for warnings emitted by this package."""


class ConstantUncertaintyWarning(AdapixWarning):
    """All big pixels share one uncertainty; size variation is invisible."""


class DegenerateRangeWarning(AdapixWarning):
    """All display values are equal; the palette cannot spread them."""
