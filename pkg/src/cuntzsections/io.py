"""CSV and JSON serialization for matrices, grids and reports."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

REPORT_VERSION = 1
TRIPLET_HEADER = ["row", "col", "re", "im"]


def format_float(x: float) -> str:
    """Shortest repr; Python floats round-trip exactly (>= 17 significant digits when needed)."""
    x = float(x)
    if x == int(x) and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def format_complex(z: complex) -> str:
    z = complex(z)
    sign = "-" if z.imag < 0 else "+"
    return f"{format_float(z.real)}{sign}{format_float(abs(z.imag))}i"


def write_matrix_csv(path, M: np.ndarray):
    """Sparse triplets ``row,col,re,im``, row-major.

    The bottom-right entry is always written so that the size can be
    recovered as the largest index plus one.
    """
    M = np.asarray(M)
    n_rows, n_cols = M.shape
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRIPLET_HEADER)
        rows, cols = np.nonzero(M)
        entries = list(zip(rows.tolist(), cols.tolist()))
        if n_rows and n_cols and (not entries or entries[-1] != (n_rows - 1, n_cols - 1)):
            entries.append((n_rows - 1, n_cols - 1))
        for r, c in entries:
            z = complex(M[r, c])
            w.writerow([r, c, format_float(z.real), format_float(z.imag)])


def read_matrix_csv(path) -> np.ndarray:
    """Inverse of :func:`write_matrix_csv`; real dtype when every imaginary part is 0."""
    triplets = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != TRIPLET_HEADER:
            raise ValueError(f"{path}: expected header {','.join(TRIPLET_HEADER)}")
        for line_no, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 4:
                raise ValueError(f"{path}:{line_no}: expected 4 fields")
            r, c = int(row[0]), int(row[1])
            if r < 0 or c < 0:
                raise ValueError(f"{path}:{line_no}: negative index")
            triplets.append((r, c, float(row[2]), float(row[3])))
    if not triplets:
        return np.zeros((0, 0))
    n = max(max(r, c) for r, c, _, _ in triplets) + 1
    is_complex = any(im != 0 for _, _, _, im in triplets)
    M = np.zeros((n, n), dtype=complex if is_complex else float)
    for r, c, re, im in triplets:
        M[r, c] = complex(re, im) if is_complex else re
    return M


def write_table_csv(path, header: Sequence[str], rows: Iterable[Sequence]):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([format_float(x) if isinstance(x, float) else x for x in row])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return format_complex(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def write_report_json(path, command: str, inputs: dict, body: dict):
    report = {"version": REPORT_VERSION, "command": command, "inputs": inputs}
    report.update(body)
    Path(path).write_text(json.dumps(_jsonable(report), indent=2, sort_keys=False) + "\n")
    return report
