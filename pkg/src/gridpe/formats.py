"""Deterministic on-disk formats: CSV, JSON, and 16-bit binary PGM.

Floats are written in scientific notation with 17 significant digits,
which round-trips IEEE doubles exactly; JSON numbers use the shortest
exact repr.  Nothing here embeds timestamps or environment details, so a
fixed input always produces byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .errors import ValidationError

PGM_MAXVAL = 65535


def format_float(value: float) -> str:
    """17 significant digits, enough to reconstruct the exact double."""
    return f"{float(value):.16e}"


def csv_text(header, rows) -> str:
    """CSV document with a mandatory header; floats at full precision."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([
            str(v) if isinstance(v, (int, np.integer)) and not isinstance(v, bool)
            else format_float(v)
            for v in row
        ])
    return out.getvalue()


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(csv_text(header, rows))


def read_positions_csv(path) -> np.ndarray:
    """Position matrix from CSV, tolerating an optional header row."""
    with open(path, newline="") as fh:
        raw = [row for row in csv.reader(fh) if row]
    if not raw:
        raise ValidationError(f"{path}: no position rows")
    try:
        [float(v) for v in raw[0]]
    except ValueError:
        raw = raw[1:]
    if not raw:
        raise ValidationError(f"{path}: header but no position rows")
    width = len(raw[0])
    if width == 0 or any(len(row) != width for row in raw):
        raise ValidationError(f"{path}: rows must share one positive column count")
    try:
        return np.array([[float(v) for v in row] for row in raw])
    except ValueError as exc:
        raise ValidationError(f"{path}: non-numeric position entry ({exc})") from None


def json_text(payload) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_json(path, payload) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(json_text(payload))


def pgm_bytes(grid: np.ndarray) -> bytes:
    """Binary PGM (P5), 16-bit big-endian samples, min-max normalized.

    Header is three ASCII lines: "P5", "<width> <height>", "65535".  Rows
    are written in array order; a constant grid maps to all zeros.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 2 or grid.size == 0:
        raise ValidationError(f"grid must be a nonempty matrix, got shape {grid.shape}")
    if not np.all(np.isfinite(grid)):
        raise ValidationError("grid must be finite")
    lo, hi = float(grid.min()), float(grid.max())
    if hi > lo:
        scaled = np.rint((grid - lo) / (hi - lo) * PGM_MAXVAL)
    else:
        scaled = np.zeros_like(grid)
    samples = scaled.astype(">u2")
    header = f"P5\n{grid.shape[1]} {grid.shape[0]}\n{PGM_MAXVAL}\n"
    return header.encode("ascii") + samples.tobytes()


def write_pgm(path, grid: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(pgm_bytes(grid))


def read_pgm(path) -> np.ndarray:
    """Samples of a binary 16-bit PGM as written by :func:`write_pgm`."""
    with open(path, "rb") as fh:
        blob = fh.read()
    parts = blob.split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P5":
        raise ValidationError(f"{path}: not a binary PGM")
    width, height = (int(v) for v in parts[1].split())
    if int(parts[2]) != PGM_MAXVAL:
        raise ValidationError(f"{path}: expected maxval {PGM_MAXVAL}")
    data = np.frombuffer(parts[3], dtype=">u2", count=width * height)
    return data.reshape(height, width).astype(np.uint16)
