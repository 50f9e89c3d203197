"""CSV / JSON files for curves, frames and coefficient paths.

Column layouts:
    curve   s,x,y,z,w,tx,ty,tz,tw
    frame   s,z00,...,z33 (row-major)
    coeffs  s,x1,x2,x3,pattern_id

JSON files hold {"metadata": {...}, "columns": [...], "samples": [{...}, ...]}.
Every file is written to a temporary sibling and renamed into place.
"""
from __future__ import annotations

import csv
import json
import os
import tempfile

import numpy as np
from scipy.interpolate import CubicSpline

from .curves import CurvePath, arc_length_reparametrize, derivatives_fd, grid_size
from .frames import CoefficientPath, FramePath
from .patterns import CATALOG

CURVE_COLUMNS = ["s", "x", "y", "z", "w", "tx", "ty", "tz", "tw"]
FRAME_COLUMNS = ["s"] + [f"z{i}{j}" for i in range(4) for j in range(4)]
COEFF_COLUMNS = ["s", "x1", "x2", "x3", "pattern_id"]


def _atomic_write(path, text):
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(v):
    return format(float(v), ".17g")


def write_table(path, columns, rows, fmt="csv", metadata=None):
    rows = np.asarray(rows, dtype=float)
    if fmt == "csv":
        lines = [",".join(columns)]
        lines += [",".join(_fmt(v) for v in r) for r in rows]
        _atomic_write(path, "\n".join(lines) + "\n")
    elif fmt == "json":
        samples = [{c: float(_fmt(v)) for c, v in zip(columns, r)} for r in rows]
        doc = {"metadata": metadata or {}, "columns": list(columns), "samples": samples}
        _atomic_write(path, json.dumps(doc, indent=1) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_table(path):
    """(columns, (m, k) array) from a CSV or JSON table written by write_table."""
    path = os.fspath(path)
    with open(path) as fh:
        head = fh.read(1)
        fh.seek(0)
        if head == "{":
            doc = json.load(fh)
            cols = doc["columns"]
            data = np.array([[row[c] for c in cols] for row in doc["samples"]], dtype=float)
            return cols, data
        reader = csv.reader(fh)
        cols = [c.strip() for c in next(reader)]
        data = np.array([[float(v) for v in row] for row in reader if row], dtype=float)
    return cols, data.reshape(-1, len(cols))


def _require(cols, expected, path):
    if cols[:len(expected)] != expected:
        raise ValueError(f"{path}: expected columns {','.join(expected)}")


def write_curve(path, curve: CurvePath, fmt="csv", metadata=None):
    rows = np.column_stack([curve.s, curve.gamma, curve.T])
    write_table(path, CURVE_COLUMNS, rows, fmt, metadata)


def write_frame(path, frame: FramePath, fmt="csv", metadata=None):
    rows = np.column_stack([frame.s, frame.Z.reshape(len(frame.s), 16)])
    write_table(path, FRAME_COLUMNS, rows, fmt, metadata)


def write_coefficients(path, coeffs: CoefficientPath, fmt="csv", metadata=None):
    if coeffs.pattern is None:
        raise ValueError("coefficient path has no declared pattern")
    ch = coeffs.channels
    rows = np.column_stack([coeffs.s, ch, np.full(len(coeffs.s), coeffs.pattern)])
    write_table(path, COEFF_COLUMNS, rows, fmt, metadata)


def read_frame(path, strict=True) -> FramePath:
    cols, data = read_table(path)
    _require(cols, FRAME_COLUMNS, path)
    return FramePath(data[:, 0], data[:, 1:17].reshape(-1, 4, 4), None, strict)


def read_coefficients(path) -> CoefficientPath:
    cols, data = read_table(path)
    _require(cols, COEFF_COLUMNS, path)
    ids = np.unique(data[:, 4])
    if len(ids) != 1 or not 0 <= ids[0] < len(CATALOG) or ids[0] != int(ids[0]):
        raise ValueError(f"{path}: pattern_id must be one constant integer in 0..15")
    return CoefficientPath.from_channels(data[:, 0], data[:, 1:4], int(ids[0]))


def _equispaced(s):
    h = np.diff(s)
    return len(s) > 1 and np.all(h > 0) and np.allclose(h, h[0], rtol=1e-9, atol=0)


def read_curve(path, grid_n=None, unit_tol=1e-8) -> CurvePath:
    """Load a curve table.

    Files with an equispaced s column and unit tangents (as written by
    write_curve) load directly. Any other table s,x,y,z,w[,...] is read as
    a parametrized sample, interpolated by a cubic spline and resampled by
    arc length (grid_n samples per unit length; default keeps the count).
    """
    cols, data = read_table(path)
    if cols[:5] != CURVE_COLUMNS[:5]:
        raise ValueError(f"{path}: expected leading columns s,x,y,z,w")
    s, gamma = data[:, 0], data[:, 1:5]
    if len(s) < 16:
        raise ValueError(f"{path}: need at least 16 samples")
    if cols[:9] == CURVE_COLUMNS and _equispaced(s) and grid_n is None:
        T = data[:, 5:9]
        if np.abs(np.linalg.norm(T, axis=1) - 1.0).max() <= unit_tol:
            return derivatives_fd(CurvePath(s, gamma, T))
    if not np.all(np.diff(s) > 0):
        raise ValueError(f"{path}: parameter column must be strictly increasing")
    spline = CubicSpline(s, gamma)
    d1, d2, d3 = spline.derivative(1), spline.derivative(2), spline.derivative(3)

    def position(t):
        return spline(t)

    def derivs(t):
        return d1(t), d2(t), d3(t)

    if grid_n is None:
        n = len(s)
    else:
        length = float(np.sum(np.linalg.norm(np.diff(gamma, axis=0), axis=1)))
        n = grid_size((0.0, length), grid_n)
    return arc_length_reparametrize(position, (s[0], s[-1]), n, derivs)
