"""Deterministic file output: CSV/JSON tables and binary field snapshots.

Floats are serialized with repr-faithful %.17g so a rerun with the same
seed produces byte-identical artifacts; all text files use '\\n' newlines
regardless of platform.  The binary snapshot layout is

    8 bytes  magic b"KK1SNAP1"
    int64    N (little-endian)
    float64  domain length L
    float64  time t
    N x float64  field values

everything after the magic little-endian.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SNAPSHOT_MAGIC",
    "SchemaError",
    "format_float",
    "write_table",
    "read_csv_table",
    "write_json",
    "write_snapshot",
    "read_snapshot",
]

SNAPSHOT_MAGIC = b"KK1SNAP1"


class SchemaError(ValueError):
    """File content does not match the documented layout."""


def format_float(x: float) -> str:
    return "%.17g" % float(x)


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format_float(v)


def write_table(path: Path | str, header: Sequence[str], rows: Iterable[Sequence], fmt: str = "csv") -> None:
    """Write a column table as CSV or as an equivalent JSON document."""
    path = Path(path)
    if fmt == "csv":
        lines = [",".join(header)]
        lines.extend(",".join(_cell(v) for v in row) for row in rows)
        path.write_text("\n".join(lines) + "\n", newline="\n")
    elif fmt == "json":
        doc = {"header": list(header), "rows": [[_cell(v) for v in row] for row in rows]}
        path.write_text(json.dumps(doc, indent=2) + "\n", newline="\n")
    else:
        raise ValueError(f"unknown table format {fmt!r}")


def read_csv_table(path: Path | str, expected_header: Sequence[str] | None = None) -> tuple[list[str], np.ndarray]:
    """Read a numeric CSV written by write_table; optionally pin the header."""
    path = Path(path)
    lines = path.read_text().strip().split("\n")
    if not lines or not lines[0]:
        raise SchemaError(f"{path}: empty file")
    header = lines[0].split(",")
    if expected_header is not None and header != list(expected_header):
        raise SchemaError(f"{path}: header {header!r} != expected {list(expected_header)!r}")
    try:
        data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]]) if len(lines) > 1 else np.empty(
            (0, len(header))
        )
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric cell ({exc})") from exc
    if data.size and data.shape[1] != len(header):
        raise SchemaError(f"{path}: row width {data.shape[1]} != header width {len(header)}")
    return header, data


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        # keep full precision but stay a JSON number
        return float(format_float(obj))
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


def write_json(path: Path | str, obj: dict) -> None:
    Path(path).write_text(json.dumps(_jsonable(obj), indent=2) + "\n", newline="\n")


def write_snapshot(path: Path | str, t: float, length: float, u: np.ndarray) -> None:
    u = np.asarray(u, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(SNAPSHOT_MAGIC)
        fh.write(struct.pack("<q", u.size))
        fh.write(struct.pack("<d", float(length)))
        fh.write(struct.pack("<d", float(t)))
        fh.write(u.tobytes())


def read_snapshot(path: Path | str) -> tuple[float, float, np.ndarray]:
    """Return (t, length, u) from a binary snapshot; SchemaError on mismatch."""
    raw = Path(path).read_bytes()
    if len(raw) < len(SNAPSHOT_MAGIC) + 8 + 16:
        raise SchemaError(f"{path}: truncated snapshot")
    if raw[: len(SNAPSHOT_MAGIC)] != SNAPSHOT_MAGIC:
        raise SchemaError(f"{path}: bad magic {raw[:8]!r}")
    off = len(SNAPSHOT_MAGIC)
    (n,) = struct.unpack_from("<q", raw, off)
    off += 8
    (length,) = struct.unpack_from("<d", raw, off)
    off += 8
    (t,) = struct.unpack_from("<d", raw, off)
    off += 8
    if len(raw) != off + 8 * n:
        raise SchemaError(f"{path}: payload size mismatch (claims {n} values)")
    u = np.frombuffer(raw, dtype="<f8", count=n, offset=off).copy()
    return t, length, u
