"""CSV ingestion for the figure scripts.

The figure scripts are pure file-to-file transforms: every number they
draw comes out of a CSV written by the simulation CLI, and the only
contract between the two packages is the documented header of each file.
This module enforces that contract and nothing else.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

__all__ = ["SchemaError", "read_columns", "require_columns"]


class SchemaError(ValueError):
    """Input file does not match the documented schema."""


def read_columns(path: str | Path) -> dict[str, np.ndarray]:
    """Read a CSV file into named float columns.

    Raises SchemaError on a missing file, a file without a header row,
    a file with no data rows, a ragged row, or a non-numeric cell.
    """
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"{path}: no such file")
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or not rows[0]:
        raise SchemaError(f"{path}: empty file, expected a header row")
    header = [name.strip() for name in rows[0]]
    body = rows[1:]
    if not body:
        raise SchemaError(f"{path}: header only, no data rows")
    columns: dict[str, list[float]] = {name: [] for name in header}
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise SchemaError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
        for name, cell in zip(header, row):
            try:
                columns[name].append(float(cell))
            except ValueError:
                raise SchemaError(f"{path}:{lineno}: column '{name}' is not numeric: {cell!r}") from None
    return {name: np.asarray(vals) for name, vals in columns.items()}


def require_columns(table: dict[str, np.ndarray], required: tuple[str, ...], path: str | Path) -> None:
    """Raise SchemaError naming the first documented header that is absent."""
    for name in required:
        if name not in table:
            raise SchemaError(f"{path}: missing required column '{name}' (have: {', '.join(table)})")
