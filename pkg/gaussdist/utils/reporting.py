"""
CSV and JSON emission for sweep records and reports.

Numbers are written with 12 significant digits.
"""
import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Union

import numpy as np
from pydantic import BaseModel

from gaussdist.core.exceptions import ReportWriteError
from gaussdist.schemas.records import CSV_COLUMNS, SweepRecord


def format_number(value: Any) -> str:
    """Format floats with 12 significant digits; other values with str()."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def render_records_csv(records: Iterable[SweepRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(CSV_COLUMNS), lineterminator="\n")
    writer.writeheader()
    for record in records:
        writer.writerow({key: format_number(value) for key, value in record.csv_row().items()})
    return buffer.getvalue()


def _write_text(path: Union[str, Path], text: str) -> Path:
    target = Path(path)
    try:
        target.write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise ReportWriteError(f"cannot write {target}: {exc.strerror or exc}", path=str(target)) from exc
    return target


def write_records_csv(records: Iterable[SweepRecord], path: Union[str, Path]) -> Path:
    """
    Write records as CSV.

    Raises:
        ReportWriteError: on any I/O failure
    """
    return _write_text(path, render_records_csv(records))


def to_jsonable(payload: Any) -> Any:
    """Pydantic models by alias, numpy values as plain Python numbers."""
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json", by_alias=True)
    if isinstance(payload, dict):
        return {key: to_jsonable(value) for key, value in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [to_jsonable(value) for value in payload]
    if isinstance(payload, np.ndarray):
        return payload.tolist()
    if isinstance(payload, np.generic):
        return payload.item()
    return payload


def render_json(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), indent=2, sort_keys=False) + "\n"


def write_json(payload: Any, path: Union[str, Path]) -> Path:
    """
    Write ``payload`` as indented JSON.

    Raises:
        ReportWriteError: on any I/O failure
    """
    return _write_text(path, render_json(payload))


def format_matrix(matrix) -> str:
    """One row per line, entries right-aligned with 12 significant digits."""
    arr = np.asarray(matrix, dtype=float)
    cells = [[format_number(float(x)) for x in row] for row in arr]
    width = max(len(cell) for row in cells for cell in row)
    return "\n".join("  ".join(cell.rjust(width) for cell in row) for row in cells)
