"""Equispaced-grid numerics shared by curves and frames.

Finite differences are 4th order everywhere (one-sided at segment ends).
Segments are delimited by ``breaks``: stencils never reach across a break,
which matters for the piecewise counterexample curves.
"""
from __future__ import annotations

import numpy as np

from .linalg import reorthonormalize

# first derivative, 4th order
_D1_CENTRAL = (np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0, np.arange(-2, 3))
_D1_EDGE0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_D1_EDGE1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0
# second derivative, 4th order
_D2_CENTRAL = (np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0, np.arange(-2, 3))
_D2_EDGE0 = np.array([45.0, -154.0, 214.0, -156.0, 61.0, -10.0]) / 12.0
_D2_EDGE1 = np.array([10.0, -15.0, -4.0, 14.0, -6.0, 1.0]) / 12.0


def spacing(s):
    s = np.asarray(s, dtype=float)
    h = np.diff(s)
    if not np.all(h > 0):
        raise ValueError("grid must be strictly increasing")
    if not np.allclose(h, h[0], rtol=1e-9, atol=0):
        raise ValueError("grid must be equispaced")
    return float((s[-1] - s[0]) / (len(s) - 1))


def segments(s, breaks=()):
    """Index slices of maximal runs not straddling any break point."""
    s = np.asarray(s)
    cuts = [0]
    for b in sorted(breaks):
        k = int(np.searchsorted(s, b, side="left"))
        if 0 < k < len(s):
            cuts.append(k)
    cuts.append(len(s))
    cuts = sorted(set(cuts))
    return [slice(a, b) for a, b in zip(cuts[:-1], cuts[1:]) if b > a]


def _diff_segment(f, h, order):
    n = f.shape[0]
    if order == 1:
        (cw, off), e0, e1, need = _D1_CENTRAL, _D1_EDGE0, _D1_EDGE1, 5
    else:
        (cw, off), e0, e1, need = _D2_CENTRAL, _D2_EDGE0, _D2_EDGE1, 6
    if n < need:
        raise ValueError(f"segment of {n} samples too short for 4th-order stencils")
    out = np.zeros_like(f)
    for w, o in zip(cw, off):
        out[2:n - 2] += w * f[2 + o:n - 2 + o]
    m = len(e0)
    head = f[:m]
    tail = f[n - m:][::-1]
    sign = -1.0 if order == 1 else 1.0
    out[0] = np.tensordot(e0, head, axes=1)
    out[1] = np.tensordot(e1, head, axes=1)
    out[n - 1] = sign * np.tensordot(e0, tail, axes=1)
    out[n - 2] = sign * np.tensordot(e1, tail, axes=1)
    return out / h ** order


def diff(f, s, order=1, breaks=()):
    """d^order f / ds^order along axis 0 on an equispaced grid."""
    f = np.asarray(f, dtype=float)
    h = spacing(s)
    out = np.empty_like(f)
    for seg in segments(s, breaks):
        out[seg] = _diff_segment(f[seg], h, order)
    return out


def midpoints(f):
    """Cubic (4-point Lagrange) interpolation of samples at interval midpoints."""
    f = np.asarray(f, dtype=float)
    n = f.shape[0]
    if n < 4:
        return 0.5 * (f[:-1] + f[1:])
    m = np.empty((n - 1,) + f.shape[1:])
    m[1:n - 2] = (-f[0:n - 3] + 9 * f[1:n - 2] + 9 * f[2:n - 1] - f[3:n]) / 16.0
    m[0] = (5 * f[0] + 15 * f[1] - 5 * f[2] + f[3]) / 16.0
    m[n - 2] = (5 * f[n - 1] + 15 * f[n - 2] - 5 * f[n - 3] + f[n - 4]) / 16.0
    return m


def cumulative_simpson(f, s, f_mid=None, start=0.0):
    """Running integral of sampled f, Simpson per interval.

    ``f_mid`` are the values at interval midpoints; when omitted they come
    from cubic interpolation (still 4th order).
    """
    f = np.asarray(f, dtype=float)
    h = spacing(s)
    if f_mid is None:
        f_mid = midpoints(f)
    panels = h / 6.0 * (f[:-1] + 4.0 * f_mid + f[1:])
    out = np.empty_like(f)
    out[0] = start
    out[1:] = start + np.cumsum(panels, axis=0)
    return out


def rk4_propagators(A0, Am, A1, h):
    """One-step RK4 maps P with y_{i+1} = P_i y_i for y' = A(s) y.

    A0, Am, A1 hold A at the left end, midpoint and right end of every step.
    """
    eye = np.eye(A0.shape[-1])
    K1 = A0
    K2 = Am @ (eye + 0.5 * h * K1)
    K3 = Am @ (eye + 0.5 * h * K2)
    K4 = A1 @ (eye + h * K3)
    return eye + (h / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4)


def march_left(P, Z0, project=True):
    """Z_{i+1} = P_i Z_i with optional re-orthonormalization after each step."""
    out = np.empty((P.shape[0] + 1,) + np.shape(Z0))
    Z = np.array(Z0, dtype=float)
    out[0] = Z
    for i in range(P.shape[0]):
        Z = P[i] @ Z
        if project:
            Z = reorthonormalize(Z)
        out[i + 1] = Z
    return out


def march_right(P, Z0, project=True):
    """Z_{i+1} = Z_i P_i^T, the row-frame form of transport equations."""
    out = np.empty((P.shape[0] + 1,) + np.shape(Z0))
    Z = np.array(Z0, dtype=float)
    out[0] = Z
    for i in range(P.shape[0]):
        Z = Z @ P[i].T
        if project:
            Z = reorthonormalize(Z)
        out[i + 1] = Z
    return out
