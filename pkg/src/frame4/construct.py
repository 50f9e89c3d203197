"""Frame constructors on arc-length curves: Bishop (B), Frenet (F), type D."""
from __future__ import annotations

import numpy as np

from . import _grid
from .curves import GRAM_TOL, CurvePath, derivatives_fd, gram_determinant
from .errors import Not2Regular, RankDeficient
from .frames import FramePath
from .linalg import complete_frame, cross4, embed3, orthonormality_defect, reorthonormalize

TP_TOL = 1e-6
RMF_AGREE_TOL = 1e-5


def _with_derivatives(curve):
    if curve.Tp is None or curve.Tpp is None:
        return derivatives_fd(curve)
    return curve


def _transport_generator(U, Up):
    """W = U Up^T - Up U^T: rows obeying N' = N W are transported along U."""
    return U[:, :, None] * Up[:, None, :] - Up[:, :, None] * U[:, None, :]


def transport(s, U, Up, Z0):
    """Rows Z with Z' = Z W(U, U'): every row orthogonal to U moves minimally.

    The row equal to U at s0 stays equal to U. RK4 with per-step
    re-orthonormalization; midpoint values of U, U' by cubic interpolation.
    """
    h = _grid.spacing(s)
    W = _transport_generator(U, Up)
    Wm = _transport_generator(_grid.midpoints(U), _grid.midpoints(Up))
    # column form: (Z^T)' = W^T Z^T = -W Z^T
    P = _grid.rk4_propagators(-W[:-1], -Wm, -W[1:], h)
    return _grid.march_right(P, Z0)


def _normals0(curve, N0):
    T0 = curve.T[0]
    if N0 is None:
        return complete_frame(T0[None])
    N0 = np.asarray(N0, dtype=float)
    Z0 = np.vstack([T0, N0])
    if orthonormality_defect(Z0) > 1e-8:
        raise ValueError("N0 must be orthonormal and normal to T(s0)")
    return Z0


def _anchor_tangent(Z, T):
    Z = np.array(Z)
    Z[:, 0, :] = T
    return reorthonormalize(Z)


def rmf_bishop(curve: CurvePath, N0=None) -> FramePath:
    """Bishop frame: N_i' = -(T'.N_i) T, integrated as a transport along T.

    ``N0`` holds three orthonormal normals at s0 (default: deterministic
    completion of T(s0) with det +1).
    """
    curve = _with_derivatives(curve)
    Z0 = _normals0(curve, N0)
    Z = transport(curve.s, curve.T, curve.Tp, Z0)
    return FramePath(curve.s, _anchor_tangent(Z, curve.T), "B")


def rmf_double_reflection(curve: CurvePath, N0=None) -> FramePath:
    """Bishop frame by the double-reflection scheme (Wang et al. 2008).

    Each step applies two Householder reflections built from the chord and
    the tangents at the step ends; the map is exactly orthogonal and sends
    T_i to T_{i+1}.
    """
    Z0 = _normals0(curve, N0)
    x, t = curve.gamma, curve.T
    v1 = np.diff(x, axis=0)
    c1 = np.sum(v1 * v1, axis=1)
    eye = np.eye(4)
    R1 = eye - 2.0 * v1[:, :, None] * v1[:, None, :] / c1[:, None, None]
    tL = np.einsum("nij,nj->ni", R1, t[:-1])
    v2 = t[1:] - tL
    c2 = np.sum(v2 * v2, axis=1)
    small = c2 < 1e-300
    c2 = np.where(small, 1.0, c2)
    R2 = eye - 2.0 * v2[:, :, None] * v2[:, None, :] / c2[:, None, None]
    R2[small] = eye
    H = R2 @ R1
    Z = np.empty((len(t), 4, 4))
    Zi = Z0
    Z[0] = Zi
    for i in range(len(H)):
        Zi = Zi @ H[i].T
        Z[i + 1] = Zi
    return FramePath(curve.s, _anchor_tangent(Z, t), "B")


def rmf_agreement(curve: CurvePath, N0=None):
    """Max entry gap between the ODE and double-reflection Bishop frames."""
    a = rmf_bishop(curve, N0)
    b = rmf_double_reflection(curve, N0)
    return float(np.abs(a.Z - b.Z).max())


def bishop_curvatures(frame: FramePath, curve: CurvePath):
    """b_i = T'.N_i per sample, shape (n, 3)."""
    curve = _with_derivatives(curve)
    return np.einsum("nj,nij->ni", curve.Tp, frame.Z[:, 1:, :])


def _check_2_regular(curve):
    tpn = np.linalg.norm(curve.Tp, axis=1)
    k = int(np.argmin(tpn))
    if not tpn[k] >= TP_TOL:
        raise Not2Regular(f"|T'| = {tpn[k]:.3e} at s = {curve.s[k]:.6g}")
    return tpn


def frenet_type_f(curve: CurvePath) -> FramePath:
    """Frenet frame: Gram-Schmidt of (T, T', T'') completed with det +1."""
    curve = _with_derivatives(curve)
    gram = gram_determinant(curve.T, curve.Tp, curve.Tpp)
    k = int(np.argmin(gram))
    if not gram[k] > GRAM_TOL:
        raise RankDeficient(
            f"Gram determinant of (T, T', T'') is {gram[k]:.3e} at s = {curve.s[k]:.6g}")
    T = curve.T
    F1 = curve.Tp / np.linalg.norm(curve.Tp, axis=1)[:, None]
    v = (curve.Tpp - np.sum(curve.Tpp * T, axis=1)[:, None] * T
         - np.sum(curve.Tpp * F1, axis=1)[:, None] * F1)
    F2 = v / np.linalg.norm(v, axis=1)[:, None]
    F3 = cross4(T, F1, F2)
    F3 /= np.linalg.norm(F3, axis=1)[:, None]
    Z = reorthonormalize(np.stack([T, F1, F2, F3], axis=1))
    return FramePath(curve.s, Z, "F")


def type_d_construct(curve: CurvePath, Z0=None) -> FramePath:
    """Type-D frame (T, D1, D2, D3) with D1 = T'/|T'|.

    T, D2, D3 are transported minimally along the D1 field, so T' and
    D_2', D_3' only have D1 components. ``Z0`` optionally fixes D2, D3 at
    s0 (rows in the output order); otherwise a det +1 completion is used.
    """
    curve = _with_derivatives(curve)
    tpn = _check_2_regular(curve)
    D1 = curve.Tp / tpn[:, None]
    D1p = (curve.Tpp - np.sum(D1 * curve.Tpp, axis=1)[:, None] * D1) / tpn[:, None]
    if Z0 is None:
        start = complete_frame(np.array([curve.T[0], D1[0]]))
    else:
        start = reorthonormalize(np.asarray(Z0, dtype=float))
        start[0], start[1] = curve.T[0], D1[0]
        start = reorthonormalize(start)
    # transport with D1 as the anchor row: rows (D1, T, D2, D3)
    Y = transport(curve.s, D1, D1p, start[[1, 0, 2, 3]])
    Z = Y[:, [1, 0, 2, 3], :]
    Z[:, 0, :] = curve.T
    Z[:, 1, :] = D1
    return FramePath(curve.s, reorthonormalize(Z), "D")


def rotate_bishop(bishop: FramePath, Q) -> FramePath:
    """diag(1, Q) Z: again a Bishop frame, with curvatures b Q^T."""
    Q = np.asarray(Q, dtype=float)
    if Q.shape != (3, 3) or orthonormality_defect(Q) > 1e-10:
        raise ValueError("Q must be an orthogonal 3x3 matrix")
    return FramePath(bishop.s, embed3(Q) @ bishop.Z, "B", bishop.strict)


def hyperplane_frame(curve: CurvePath, tol=1e-9) -> FramePath:
    """Bishop frame of a curve inside a hyperplane, normal fixed as last row.

    Rows (T, N1, N2, n) with n the constant unit normal of the hyperplane;
    the coefficients then fit the type-C pattern {01, 02, 13} with x3 = 0.
    Raises ValueError if the curve leaves every hyperplane by more than tol.
    """
    curve = _with_derivatives(curve)
    _, _, vt = np.linalg.svd(curve.T, full_matrices=True)
    n = vt[3]
    off = float(np.abs(curve.T @ n).max())
    if off > tol:
        raise ValueError(f"curve not contained in a hyperplane (tangent off by {off:.3e})")
    T0 = curve.T[0]
    start = complete_frame(np.array([T0, n]))
    N0 = np.array([start[2], start[3], n])
    return FramePath(curve.s, rmf_bishop(curve, N0).Z, "C")
