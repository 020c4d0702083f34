"""
Report emission: tables and records to CSV or JSON with 12 significant digits
"""

import json
import math
from pathlib import Path
from typing import Any, Mapping

import polars as pl

from lfsm_common.constants import FLOAT_SIGNIFICANT_DIGITS
from lfsm_common.enums import ReportFormat
from lfsm_common.exceptions import ReportWriteError

_FLOAT_FORMAT = f".{FLOAT_SIGNIFICANT_DIGITS}g"


def format_float(value: float) -> str:
    """12 significant digits; integral values keep a trailing '.0' so they read back as floats."""
    text = format(value, _FLOAT_FORMAT)
    if math.isfinite(value) and not any(c in text for c in ".en"):
        text += ".0"
    return text


def _round_json(value: Any) -> Any:
    if isinstance(value, float):
        return float(format(value, _FLOAT_FORMAT)) if math.isfinite(value) else None
    if isinstance(value, Mapping):
        return {k: _round_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_json(v) for v in value]
    return value


def _as_frame(result: pl.DataFrame | Mapping) -> pl.DataFrame:
    return result if isinstance(result, pl.DataFrame) else pl.DataFrame([dict(result)])


def emit_report(result: pl.DataFrame | Mapping, fmt: ReportFormat, path: str | Path) -> Path:
    """
    Write a table (DataFrame) or a record (mapping) to path.

    Column and key order are kept as given. CSV floats are written with 12 significant digits;
    JSON floats are rounded to 12 significant digits and non-finite values become null.

    Raises:
        ReportWriteError: the destination cannot be written
    """
    path = Path(path)
    fmt = ReportFormat(fmt)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == ReportFormat.csv:
            frame = _as_frame(result)
            float_cols = [name for name, dtype in frame.schema.items() if dtype.is_float()]
            frame = frame.with_columns(
                pl.col(name).map_elements(format_float, return_dtype=pl.String) for name in float_cols
            )
            frame.write_csv(path)
        else:
            payload = result.to_dicts() if isinstance(result, pl.DataFrame) else dict(result)
            path.write_text(json.dumps(_round_json(payload), indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise ReportWriteError(f"cannot write report to {path}: {e}", {"path": str(path)})
    return path


def read_table(path: str | Path) -> pl.DataFrame:
    """Read back a table written by emit_report."""
    path = Path(path)
    if path.suffix == ".json":
        return pl.DataFrame(json.loads(path.read_text(encoding="utf-8")))
    return pl.read_csv(path)
