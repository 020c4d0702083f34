"""
Time-series CSV ingestion

Accepted layouts, both with a header line:
- two columns (timestamp, value); timestamps are numbers or datetimes and must be strictly increasing
  and uniformly spaced within a relative tolerance of 1e-6
- a single value column, with the time step given by the caller

Row numbers in diagnostics are 1-based line numbers of the file, the header being line 1.
"""

from pathlib import Path
from typing import Optional

import numpy as np
import polars as pl

from lfsm.core.model import TimeSeries
from lfsm_common.exceptions import CsvFormatError

SPACING_RTOL = 1e-6
HEADER_LINES = 1


def _line_of(index: int) -> int:
    return index + HEADER_LINES + 1


def _parse_values(column: pl.Series) -> np.ndarray:
    values = column.str.strip_chars().cast(pl.Float64, strict=False)
    bad = (values.is_null() | values.is_nan()).arg_true()
    if bad.len():
        first = bad[0]
        raise CsvFormatError(
            f"value {column[first]!r} in column '{column.name}' at row {_line_of(first)} is empty or not a number",
            _line_of(first),
        )
    return values.to_numpy()


def _parse_times(column: pl.Series) -> np.ndarray:
    """Timestamps in the file's numeric unit, or datetimes converted to seconds."""
    stripped = column.str.strip_chars()
    numeric = stripped.cast(pl.Float64, strict=False)
    if not numeric.is_null().any():
        return numeric.to_numpy()

    try:
        parsed = stripped.str.to_datetime(strict=False)
    except (pl.exceptions.ComputeError, pl.exceptions.InvalidOperationError):
        # no datetime format fits the first timestamp
        parsed = None
    if parsed is not None and not parsed.is_null().any():
        return parsed.dt.epoch("us").cast(pl.Float64).to_numpy() / 1e6

    first = numeric.is_null().arg_true()[0]
    raise CsvFormatError(
        f"timestamp {column[first]!r} at row {_line_of(first)} is neither a number nor a datetime", _line_of(first)
    )


def _uniform_step(times: np.ndarray) -> float:
    steps = np.diff(times)
    step = steps[0]
    if not step > 0:
        raise CsvFormatError(f"timestamps must be strictly increasing (row {_line_of(1)})", _line_of(1))
    off = np.flatnonzero(np.abs(steps - step) > SPACING_RTOL * step)
    if off.size:
        k = int(off[0]) + 1
        raise CsvFormatError(
            f"non-uniform spacing at row {_line_of(k)}: step {steps[k - 1]:.12g} differs from {step:.12g}",
            _line_of(k),
        )
    return float(step)


def ingest_csv(path: str | Path, dt: Optional[float] = None) -> TimeSeries:
    """
    Read a TimeSeries from CSV.

    Args:
        path: CSV file
        dt: Time step, required for a single-column file and checked against the timestamps otherwise

    Raises:
        CsvFormatError: missing file, wrong layout, unparsable row, or non-uniform spacing
    """
    path = Path(path)
    if not path.is_file():
        raise CsvFormatError(f"CSV file not found: {path}")
    try:
        df = pl.read_csv(path, infer_schema=False, has_header=True)
    except (pl.exceptions.ComputeError, pl.exceptions.NoDataError) as e:
        raise CsvFormatError(f"cannot read {path}: {e}")

    if df.width not in (1, 2):
        raise CsvFormatError(f"expected 1 or 2 columns in {path}, found {df.width}: {df.columns}")
    if df.height < 2:
        raise CsvFormatError(f"{path} holds {df.height} data rows, at least 2 are needed")

    values = _parse_values(df[:, -1])
    if df.width == 1:
        if dt is None:
            raise CsvFormatError(f"{path} has a single value column; the time step must be given")
        return TimeSeries(values, float(dt), 0.0)

    times = _parse_times(df[:, 0])
    step = _uniform_step(times)
    if dt is not None and not np.isclose(dt, step, rtol=SPACING_RTOL, atol=0.0):
        raise CsvFormatError(f"given time step {dt} disagrees with the timestamps' step {step:.12g}")
    return TimeSeries(values, step, float(times[0]))
