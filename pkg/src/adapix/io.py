"""Readers and writers for the delimited and raster file formats.

Supported inputs:

* CSV mode A: header ``x,y,z,u`` (value plus uncertainty),
* CSV mode B: header ``x,y,z,z_lo,z_hi`` (value plus an interval whose
  width becomes the uncertainty),
* a pair of ESRI ASCII grids (value layer + uncertainty layer) sharing one
  header.

Missing data is an empty field or the literal ``NA`` in CSV, or the header's
``NODATA_value`` in ASCII grids.  All writers emit ``\\n`` line endings and
format floats with :func:`repr` (shortest round-trip representation), so a
given object always serializes to identical bytes.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .engine import PixelatedGrid, SummaryTable
from .errors import (
    GridModelError,
    HeaderMismatch,
    InvertedInterval,
    NegativeUncertainty,
    NonFiniteValue,
    ParseError,
    SchemaError,
)
from .grid import CellKind, LatticeSpec, PredictionGrid, build_grid, derive_uncertainty

__all__ = [
    "read_csv",
    "read_ascii_grid_pair",
    "write_grid_csv",
    "write_pixelated_csv",
    "write_summary",
    "PIXELATED_HEADER",
    "SUMMARY_HEADER",
]

MODE_A_HEADER = ("x", "y", "z", "u")
MODE_B_HEADER = ("x", "y", "z", "z_lo", "z_hi")
PIXELATED_HEADER = ("x", "y", "state", "z_display", "size_class", "pixel_id", "pixel_u_mean")
SUMMARY_HEADER = (
    "size_class",
    "side_cells",
    "side_w",
    "side_h",
    "cells_per_full_pixel",
    "big_pixel_count",
    "u_lo_exclusive",
    "u_hi_inclusive",
)

_STATE_NAMES = {
    CellKind.OBSERVED: "obs",
    CellKind.MISSING: "missing",
    CellKind.CERTAIN_ZERO: "zero",
}


def _fmt(v: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(v))


def _parse_value(field: str, path: Path, line: int, column: str) -> float | None:
    """Parse one optional numeric CSV field; empty or NA means absent."""
    text = field.strip()
    if text == "" or text == "NA":
        return None
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"{path}, line {line}: bad {column} value {field!r}") from None


def _parse_coord(field: str, path: Path, line: int, column: str) -> float:
    value = _parse_value(field, path, line, column)
    if value is None:
        raise ParseError(f"{path}, line {line}: {column} coordinate is required")
    return value


# --- CSV input ------------------------------------------------------------


def read_csv(path: str | Path, zero_tol: float = 0.0) -> PredictionGrid:
    """Read a prediction grid from a mode A or mode B CSV file.

    The mode is detected from the header row.  In mode B the uncertainty of
    each cell is the interval width ``z_hi - z_lo``; a row whose value or
    bounds are absent is a missing cell.

    Args:
        path: CSV file to read.
        zero_tol: Zero tolerance forwarded to cell classification.

    Returns:
        The grid assembled by :func:`adapix.grid.build_grid`.

    Raises:
        SchemaError: The header matches neither supported layout.
        ParseError: A field cannot be parsed.
        InvertedInterval: A mode B row has ``z_lo > z_hi``.
        GridModelError: Any lattice or value validation failure, reported
            with the offending line number.
        OSError: The file cannot be read.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty") from None
        names = tuple(h.strip().lower() for h in header)
        if names == MODE_A_HEADER:
            interval_mode = False
        elif names == MODE_B_HEADER:
            interval_mode = True
        else:
            raise SchemaError(
                f"{path}: header {names} matches neither "
                f"{','.join(MODE_A_HEADER)} nor {','.join(MODE_B_HEADER)}"
            )
        expected_fields = len(names)

        records: list[tuple[float, float, float | None, float | None]] = []
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != expected_fields:
                raise ParseError(
                    f"{path}, line {line}: expected {expected_fields} fields, got {len(row)}"
                )
            x = _parse_coord(row[0], path, line, "x")
            y = _parse_coord(row[1], path, line, "y")
            z = _parse_value(row[2], path, line, "z")
            if interval_mode:
                lo = _parse_value(row[3], path, line, "z_lo")
                hi = _parse_value(row[4], path, line, "z_hi")
                if z is None or lo is None or hi is None:
                    records.append((x, y, None, None))
                    continue
                try:
                    u = derive_uncertainty(lo, hi)
                except InvertedInterval as err:
                    raise InvertedInterval(f"{path}, line {line}: {err}") from None
            else:
                u = _parse_value(row[3], path, line, "u")
                if z is None or u is None:
                    records.append((x, y, None, None))
                    continue
            records.append((x, y, z, u))

    if not records:
        raise SchemaError(f"{path}: no data rows")
    try:
        return build_grid(records, zero_tol)
    except GridModelError as err:
        idx = getattr(err, "record_index", None)
        if idx is None:
            raise type(err)(f"{path}: {err}") from None
        raise type(err)(f"{path}, line {idx + 2}: {err}") from None


# --- ASCII grid input -----------------------------------------------------

_ASCII_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value")


def _read_ascii_header(lines: list[str], path: Path) -> dict[str, float]:
    header: dict[str, float] = {}
    if len(lines) < 6:
        raise ParseError(f"{path}: expected 6 header lines, found {len(lines)}")
    for n, line in enumerate(lines[:6], start=1):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"{path}, line {n}: malformed header line {line!r}")
        key = parts[0].lower()
        if key not in _ASCII_HEADER_KEYS:
            raise ParseError(f"{path}, line {n}: unknown header key {parts[0]!r}")
        if key in header:
            raise ParseError(f"{path}, line {n}: duplicate header key {parts[0]!r}")
        try:
            header[key] = float(parts[1])
        except ValueError:
            raise ParseError(f"{path}, line {n}: bad numeric value {parts[1]!r}") from None
    missing = [k for k in _ASCII_HEADER_KEYS if k not in header]
    if missing:
        raise ParseError(f"{path}: header is missing {', '.join(missing)}")
    for key in ("ncols", "nrows"):
        if header[key] != int(header[key]) or int(header[key]) < 1:
            raise ParseError(f"{path}: {key} must be a positive integer, got {header[key]}")
    if header["cellsize"] <= 0:
        raise ParseError(f"{path}: cellsize must be positive, got {header['cellsize']}")
    return header


def _read_ascii_layer(path: Path) -> tuple[dict[str, float], np.ndarray]:
    lines = path.read_text().splitlines()
    header = _read_ascii_header(lines, path)
    ncols, nrows = int(header["ncols"]), int(header["nrows"])
    try:
        flat = np.array(" ".join(lines[6:]).split(), dtype=np.float64)
    except ValueError as err:
        raise ParseError(f"{path}: bad data value ({err})") from None
    if flat.size != nrows * ncols:
        raise ParseError(
            f"{path}: expected {nrows * ncols} data values ({nrows} x {ncols}), got {flat.size}"
        )
    # File rows run north to south; flip so row index 0 is the bottom row.
    data = np.flipud(flat.reshape(nrows, ncols))
    return header, data


def read_ascii_grid_pair(
    z_path: str | Path, u_path: str | Path, zero_tol: float = 0.0
) -> PredictionGrid:
    """Read a grid from a pair of ESRI ASCII rasters (values, uncertainties).

    Both files must carry identical headers (``ncols``, ``nrows``,
    ``xllcorner``, ``yllcorner``, ``cellsize``, ``NODATA_value``).  A cell
    equal to the NODATA value in either layer is missing.  Cell centers sit
    at ``llcorner + cellsize / 2``, and the first data row in the file is
    the northernmost.

    Raises:
        HeaderMismatch: The two headers differ.
        ParseError: A header or data field is malformed.
        NonFiniteValue: A non-NODATA cell is NaN or infinite.
        NegativeUncertainty: A non-NODATA uncertainty is negative.
        OSError: Either file cannot be read.
    """
    z_path, u_path = Path(z_path), Path(u_path)
    z_header, z_data = _read_ascii_layer(z_path)
    u_header, u_data = _read_ascii_layer(u_path)
    if z_header != u_header:
        diffs = [k for k in _ASCII_HEADER_KEYS if z_header[k] != u_header[k]]
        raise HeaderMismatch(
            f"{z_path} and {u_path} disagree on header field(s): {', '.join(diffs)}"
        )

    nodata = z_header["nodata_value"]
    ncols, nrows = int(z_header["ncols"]), int(z_header["nrows"])
    half = z_header["cellsize"] / 2
    spec = LatticeSpec(
        origin_x=z_header["xllcorner"] + half,
        origin_y=z_header["yllcorner"] + half,
        cell_w=z_header["cellsize"],
        cell_h=z_header["cellsize"],
        n_x=ncols,
        n_y=nrows,
    )

    missing = (z_data == nodata) | (u_data == nodata)
    present = ~missing

    bad = present & ~(np.isfinite(z_data) & np.isfinite(u_data))
    if bool(bad.any()):
        j, i = np.argwhere(bad)[0]
        raise NonFiniteValue(
            f"cell ({i}, {j}): non-finite value {z_data[j, i]!r} or "
            f"uncertainty {u_data[j, i]!r}"
        )
    neg = present & (u_data < 0)
    if bool(neg.any()):
        j, i = np.argwhere(neg)[0]
        raise NegativeUncertainty(f"cell ({i}, {j}): uncertainty {u_data[j, i]!r} is negative")

    zero = present & (np.abs(z_data) <= zero_tol) & (u_data <= zero_tol)
    kind = np.full((nrows, ncols), CellKind.MISSING, dtype=np.uint8)
    kind[present] = CellKind.OBSERVED
    kind[zero] = CellKind.CERTAIN_ZERO
    value = np.where(present, z_data, np.nan)
    uncertainty = np.where(present, u_data, np.nan)
    value[zero] = 0.0
    uncertainty[zero] = 0.0

    return PredictionGrid(spec=spec, kind=kind, value=value, uncertainty=uncertainty)


# --- writers --------------------------------------------------------------


def write_grid_csv(grid: PredictionGrid, path: str | Path) -> None:
    """Write a grid as a mode A CSV (``x,y,z,u``), row-major from lower-left.

    Missing cells write empty value fields; certain zeros write ``0.0,0.0``.
    Reading the file back with the same zero tolerance reproduces the grid.
    """
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MODE_A_HEADER)
        for j in range(grid.spec.n_y):
            for i in range(grid.spec.n_x):
                x, y = grid.spec.cell_center(i, j)
                if grid.kind[j, i] == CellKind.MISSING:
                    writer.writerow([_fmt(x), _fmt(y), "", ""])
                else:
                    writer.writerow(
                        [_fmt(x), _fmt(y), _fmt(grid.value[j, i]), _fmt(grid.uncertainty[j, i])]
                    )


def write_pixelated_csv(pixelated: PixelatedGrid, path: str | Path) -> None:
    """Write the per-cell pixelation result as CSV.

    Columns are ``x,y,state,z_display,size_class,pixel_id,pixel_u_mean``
    with states ``obs``/``missing``/``zero``; missing cells leave the value
    columns empty, certain zeros carry ``z_display`` 0.0 only.  Rows are
    row-major from the lower-left cell and output bytes are identical for
    identical inputs.
    """
    path = Path(path)
    spec = pixelated.spec
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PIXELATED_HEADER)
        for j in range(spec.n_y):
            for i in range(spec.n_x):
                x, y = spec.cell_center(i, j)
                k = pixelated.kind[j, i]
                state = _STATE_NAMES[CellKind(int(k))]
                if k == CellKind.OBSERVED:
                    writer.writerow(
                        [
                            _fmt(x),
                            _fmt(y),
                            state,
                            _fmt(pixelated.display_value[j, i]),
                            str(int(pixelated.size_class[j, i])),
                            str(int(pixelated.pixel_id[j, i])),
                            _fmt(pixelated.pixel_u_mean[j, i]),
                        ]
                    )
                elif k == CellKind.CERTAIN_ZERO:
                    writer.writerow([_fmt(x), _fmt(y), state, _fmt(0.0), "", "", ""])
                else:
                    writer.writerow([_fmt(x), _fmt(y), state, "", "", "", ""])


def write_summary(table: SummaryTable, path: str | Path, fmt: str = "csv") -> None:
    """Write a summary table as ``csv`` or ``markdown``.

    Infinite interval ends appear as ``inf``/``-inf``; NaN bounds (a run
    with nothing allocated) as ``nan``.
    """
    path = Path(path)
    cells = [
        [
            str(r.size_class),
            str(r.side_cells),
            _fmt(r.side_w),
            _fmt(r.side_h),
            str(r.cells_per_full_pixel),
            str(r.big_pixel_count),
            _fmt(r.u_lo),
            _fmt(r.u_hi),
        ]
        for r in table.rows
    ]
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(SUMMARY_HEADER)
            writer.writerows(cells)
    elif fmt == "markdown":
        with open(path, "w", newline="") as fh:
            fh.write("| " + " | ".join(SUMMARY_HEADER) + " |\n")
            fh.write("|" + "|".join([" --- "] * len(SUMMARY_HEADER)) + "|\n")
            for row in cells:
                fh.write("| " + " | ".join(row) + " |\n")
    else:
        raise ValueError(f"unknown summary format {fmt!r}; expected 'csv' or 'markdown'")
