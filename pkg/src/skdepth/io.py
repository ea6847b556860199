"""CSV and JSON files used by the command line.

Points files carry the header ``x,y`` and one point per row. Results files
carry ``RESULT_FIELDS``. Floats are written with ``repr`` so they read back
bit for bit.
"""

from __future__ import annotations

import csv
import json
import math
from typing import Dict, Iterable, List, Sequence

import numpy as np

RESULT_FIELDS = ["index", "x", "y", "depth", "raw_count", "normalizer", "kind", "beta", "method", "wall_time_s"]


class DataError(ValueError):
    """Malformed or inconsistent input data."""


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return str(v)


def _parse_float(text: str, path, line: int, col: int) -> float:
    try:
        val = float(text)
    except ValueError:
        raise DataError(f"{path}: line {line}, column {col}: cannot parse {text!r} as a number") from None
    if not math.isfinite(val):
        raise DataError(f"{path}: line {line}, column {col}: non-finite value {text!r}")
    return val


def _read_table(path, required: Sequence[str]) -> tuple:
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty file")
        header = [h.strip() for h in header]
        missing = [c for c in required if c not in header]
        if missing:
            raise DataError(f"{path}: line 1: missing column(s) {', '.join(missing)}")
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise DataError(f"{path}: line {line_no}: expected {len(header)} columns, found {len(row)}")
            rows.append((line_no, row))
    return header, rows


def read_points(path) -> np.ndarray:
    header, rows = _read_table(path, ["x", "y"])
    ix, iy = header.index("x"), header.index("y")
    pts = np.empty((len(rows), 2))
    for k, (line_no, row) in enumerate(rows):
        pts[k, 0] = _parse_float(row[ix], path, line_no, ix + 1)
        pts[k, 1] = _parse_float(row[iy], path, line_no, iy + 1)
    return pts


def write_points(path, points: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y"])
        for x, y in np.asarray(points, dtype=float):
            w.writerow([repr(float(x)), repr(float(y))])


def read_results(path) -> Dict[str, np.ndarray]:
    """Read a depth results file; returns ``x``, ``y`` and ``depth`` arrays plus raw rows."""
    header, rows = _read_table(path, ["x", "y", "depth"])
    cols = {name: header.index(name) for name in ("x", "y", "depth")}
    out = {name: np.empty(len(rows)) for name in cols}
    for k, (line_no, row) in enumerate(rows):
        for name, idx in cols.items():
            out[name][k] = _parse_float(row[idx], path, line_no, idx + 1)
    out["records"] = [dict(zip(header, row)) for _, row in rows]
    return out


def write_results(path, records: Iterable[dict], fmt: str = "csv", meta: dict = None) -> None:
    records = list(records)
    if fmt == "json":
        with open(path, "w") as fh:
            json.dump({"meta": meta or {}, "results": records}, fh, indent=2)
            fh.write("\n")
        return
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RESULT_FIELDS)
        for rec in records:
            w.writerow([_fmt(rec.get(f)) for f in RESULT_FIELDS])


def write_rows(path, fields: List[str], rows: Iterable[dict]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(fields)
        for rec in rows:
            w.writerow([_fmt(rec.get(f)) for f in fields])


def write_json(path, obj) -> None:
    text = json.dumps(obj, indent=2, default=_json_default)
    if path is None or path == "-":
        print(text)
        return
    with open(path, "w") as fh:
        fh.write(text + "\n")


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")
