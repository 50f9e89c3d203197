"""Conversions between frame types: F -> D, and Bishop -> C.

The Bishop -> C route needs a direction xi that the Bishop curvature
vector b(s) never points along; it is found by a sampled search over the
projective plane (a numerical replacement of the measure-zero argument).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _grid
from .construct import bishop_curvatures, rmf_bishop, rotate_bishop, TP_TOL
from .curves import CurvePath
from .errors import AvoidanceFailed, Not2Regular, PatternMismatch, ResolutionError
from .frames import (PATTERN_TOL, CoefficientPath, FramePath, TransformPath,
                     extract_coefficients)
from .linalg import rotation_to_e2
from .patterns import CANONICAL, CATALOG

AVOID_TOL = 1e-10
SEARCH_GRID = 4096
_GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def _sign(v, name):
    if v not in (1, -1):
        raise ValueError(f"{name} must be +1 or -1")
    return int(v)


def _as_type_f(f_coeffs: CoefficientPath):
    F = CANONICAL["F"]
    if f_coeffs.pattern is not None and f_coeffs.pattern != F:
        raise PatternMismatch(
            f"expected canonical type-F pattern {F}, got {f_coeffs.pattern}")
    r = CATALOG.residual(f_coeffs.X, F)
    if r > PATTERN_TOL:
        raise PatternMismatch(f"coefficients leave the type-F pattern by {r:.3e}")
    return CATALOG.channels(f_coeffs.X, F)


def fd_theta(f_coeffs: CoefficientPath, eps=1, kappa=1, theta0=0.0):
    """theta(s) = theta0 - kappa*eps * int f3 ds (Simpson, exact midpoints
    when the coefficient path carries a closure)."""
    eps, kappa = _sign(eps, "eps"), _sign(kappa, "kappa")
    f = _as_type_f(f_coeffs)
    f3_mid = None
    if f_coeffs.fn is not None:
        s_mid = 0.5 * (f_coeffs.s[:-1] + f_coeffs.s[1:])
        f3_mid = np.asarray(f_coeffs.fn(s_mid))[:, 2, 3]
    return theta0 - kappa * eps * _grid.cumulative_simpson(f[:, 2], f_coeffs.s, f3_mid)


def type_d_from_f(f_coeffs: CoefficientPath, eps=1, kappa=1, theta0=0.0) -> CoefficientPath:
    """Type-D coefficients d1 = eps f1, d2 = eps f2 cos th, d3 = eps f2 sin th.

    With theta0 = 0 the third channel equals -kappa f2 sin(int f3); both
    readings agree (see fd_transform for the transformation itself).
    """
    eps = _sign(eps, "eps")
    f = _as_type_f(f_coeffs)
    th = fd_theta(f_coeffs, eps, kappa, theta0)
    d = np.stack([eps * f[:, 0], eps * f[:, 1] * np.cos(th),
                  eps * f[:, 1] * np.sin(th)], axis=1)
    return CoefficientPath.from_channels(f_coeffs.s, d, CANONICAL["D"])


def fd_transform(f_coeffs: CoefficientPath, eps=1, kappa=1, theta0=0.0) -> TransformPath:
    """G with D = G F: diag(1, eps) on (T, F1) and a reflection-rotation
    [[cos, kappa eps sin], [sin, -kappa eps cos]] on (F2, F3)."""
    eps, kappa = _sign(eps, "eps"), _sign(kappa, "kappa")
    th = fd_theta(f_coeffs, eps, kappa, theta0)
    c, s = np.cos(th), np.sin(th)
    G = np.zeros((len(th), 4, 4))
    G[:, 0, 0] = 1.0
    G[:, 1, 1] = eps
    G[:, 2, 2], G[:, 2, 3] = c, kappa * eps * s
    G[:, 3, 2], G[:, 3, 3] = s, -kappa * eps * c
    return TransformPath(f_coeffs.s, G, th, {"eps": eps, "kappa": kappa})


def type_d_from_frenet(frenet: FramePath, f_coeffs: CoefficientPath, eps=1, kappa=1,
                       theta0=0.0):
    """Apply fd_transform to a Frenet frame: the resulting frame and its
    declared type-D coefficients."""
    G = fd_transform(f_coeffs, eps, kappa, theta0)
    return G.apply(frenet, "D"), type_d_from_f(f_coeffs, eps, kappa, theta0)


def fibonacci_sphere(n):
    """n nearly uniform unit vectors (golden-angle spiral)."""
    i = np.arange(n)
    z = 1.0 - 2.0 * (i + 0.5) / n
    r = np.sqrt(1.0 - z * z)
    phi = i * _GOLDEN_ANGLE
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def _margins(xis, bhat, chunk=256):
    """min_i |xi x bhat_i| for every xi (sign of bhat irrelevant)."""
    out = np.empty(len(xis))
    for a in range(0, len(xis), chunk):
        dots = np.abs(xis[a:a + chunk] @ bhat.T).max(axis=1)
        out[a:a + chunk] = np.sqrt(np.clip(1.0 - dots * dots, 0.0, None))
    return out


def _tangent_basis(xi):
    a = np.eye(3)[int(np.argmin(np.abs(xi)))]
    u = a - (a @ xi) * xi
    u /= np.linalg.norm(u)
    return u, np.cross(xi, u)


def find_avoided_direction(b_samples, n_grid=SEARCH_GRID, rounds=3, shrink=0.25):
    """Direction xi maximizing min_i |xi x b(s_i)/|b(s_i)||.

    Fibonacci grid search followed by ``rounds`` of local 9x9 patch search,
    the patch radius shrinking by ``shrink`` each round. Returns (xi, margin);
    the caller decides whether the margin suffices.
    """
    b = np.asarray(b_samples, dtype=float).reshape(-1, 3)
    nb = np.linalg.norm(b, axis=1)
    k = int(np.argmin(nb))
    if not nb[k] >= TP_TOL:
        raise Not2Regular(f"|b| = {nb[k]:.3e} at sample {k}")
    bhat = b / nb[:, None]
    # sign-normalize and drop near duplicates to shrink the work
    bhat = bhat * np.where(bhat[:, [0]] < 0, -1.0, 1.0)
    bhat = np.unique(np.round(bhat, 12), axis=0)
    grid = fibonacci_sphere(n_grid)
    m = _margins(grid, bhat)
    j = int(np.argmax(m))
    xi, best = grid[j], m[j]
    radius = np.sqrt(4.0 * np.pi / n_grid)
    offsets = np.linspace(-1.0, 1.0, 9)
    for _ in range(rounds):
        u, v = _tangent_basis(xi)
        cand = xi + radius * (offsets[:, None, None] * u + offsets[None, :, None] * v)
        cand = cand.reshape(-1, 3)
        cand /= np.linalg.norm(cand, axis=1)[:, None]
        mc = _margins(cand, bhat)
        j = int(np.argmax(mc))
        if mc[j] > best:
            xi, best = cand[j], mc[j]
        radius *= shrink
    return xi, float(best)


def unwrap_angle(phi, max_jump=np.pi / 2):
    """Continuous branch of sampled angles by nearest-angle continuation.

    Raises ResolutionError when consecutive samples differ by more than
    ``max_jump`` (mod 2 pi): the grid cannot resolve the rotation.
    """
    d = np.angle(np.exp(1j * np.diff(phi)))
    if d.size and np.abs(d).max() > max_jump:
        k = int(np.argmax(np.abs(d)))
        raise ResolutionError(
            f"angle jumps by {d[k]:.3f} rad between samples {k} and {k + 1}")
    return np.concatenate([[phi[0]], phi[0] + np.cumsum(d)])


def _g_bar(theta, sign1):
    """Rows of G B: (T, sign1 (cos N1 + sin N3), N2, -sin N1 + cos N3)."""
    c, s = np.cos(theta), np.sin(theta)
    G = np.zeros((len(theta), 4, 4))
    G[:, 0, 0] = 1.0
    G[:, 1, 1], G[:, 1, 3] = sign1 * c, sign1 * s
    G[:, 2, 2] = 1.0
    G[:, 3, 1], G[:, 3, 3] = -s, c
    return G


def _bishop_channels(b):
    if isinstance(b, CoefficientPath):
        return CATALOG.channels(b.X, CANONICAL["B"])
    return np.asarray(b, dtype=float)


@dataclass(frozen=True)
class TypeCResult:
    frame: FramePath
    coeffs: CoefficientPath
    transform: TransformPath


def type_c_from_bishop(bishop: FramePath, b, sign1=1, sign3=1,
                       min_rho2=AVOID_TOL) -> TypeCResult:
    """Type-C frame C = G B from a Bishop frame whose curvature vector never
    points along the second normal.

    theta is the polar angle of (b1, b3). The returned coefficients are the
    closed form c1 = sign1 rho, c2 = b2, c3 = sign3 (b3' b1 - b3 b1')/rho^2;
    the frame itself only realizes them when sign3 == sign1.
    """
    sign1, sign3 = _sign(sign1, "sign1"), _sign(sign3, "sign3")
    b = _bishop_channels(b)
    s = bishop.s
    rho2 = b[:, 0] ** 2 + b[:, 2] ** 2
    k = int(np.argmin(rho2))
    if not rho2[k] >= min_rho2:
        raise AvoidanceFailed(
            f"b1^2 + b3^2 = {rho2[k]:.3e} at s = {s[k]:.6g} (b along the avoided axis)")
    theta = unwrap_angle(np.arctan2(b[:, 2], b[:, 0]))
    G = _g_bar(theta, sign1)
    frame = FramePath(s, G @ bishop.Z, "C", bishop.strict)
    bp = _grid.diff(b, s, 1)
    c = np.stack([sign1 * np.sqrt(rho2), b[:, 1],
                  sign3 * (bp[:, 2] * b[:, 0] - b[:, 2] * bp[:, 0]) / rho2], axis=1)
    coeffs = CoefficientPath.from_channels(s, c, CANONICAL["C"])
    transform = TransformPath(s, G, theta, {"sign1": sign1, "sign3": sign3})
    return TypeCResult(frame, coeffs, transform)


@dataclass(frozen=True)
class TypeCPipeline:
    bishop: FramePath
    b: np.ndarray
    xi: np.ndarray
    margin: float
    Q: np.ndarray
    rotated: FramePath
    result: TypeCResult

    @property
    def frame(self):
        return self.result.frame


def type_c_pipeline(curve: CurvePath, sign1=1, sign3=1, n_grid=SEARCH_GRID,
                    N0=None) -> TypeCPipeline:
    """Bishop frame -> avoided direction -> rotation -> type C."""
    B = rmf_bishop(curve, N0)
    b = bishop_curvatures(B, curve)
    xi, margin = find_avoided_direction(b, n_grid)
    Q = rotation_to_e2(xi)
    R = rotate_bishop(B, Q)
    res = type_c_from_bishop(R, b @ Q.T, sign1, sign3)
    return TypeCPipeline(B, b, xi, margin, Q, R, res)


def smoothstep(u):
    """C-infinity step: 0 for u <= 0, 1 for u >= 1, all derivatives flat."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        a = np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)
        v = 1.0 - u
        c = np.where(v > 0, np.exp(-1.0 / np.where(v > 0, v, 1.0)), 0.0)
    return a / (a + c)


def bridged_theta(s, directions, pin_tol=1e-8):
    """Angle field for a type-C attempt when b vanishes on whole intervals.

    Where the unit curvature direction d = b/|b| has (d1, d3) of size at
    least pin_tol, theta is pinned mod pi to its polar angle (continued
    sample to sample); across free stretches theta is bridged by a flat
    smooth step. Returns (theta, pinned mask).
    """
    d = np.asarray(directions, dtype=float)
    rho = np.hypot(d[:, 0], d[:, 2])
    pinned = rho >= pin_tol
    theta = np.zeros(len(s))
    idx = np.nonzero(pinned)[0]
    if idx.size == 0:
        return theta, pinned
    phi = np.arctan2(d[idx, 2], d[idx, 0])
    step = np.diff(phi)
    step = step - np.pi * np.round(step / np.pi)
    th = np.concatenate([[phi[0]], phi[0] + np.cumsum(step)])
    theta[idx] = th
    pos = np.arange(len(s))
    left = np.maximum.accumulate(np.where(pinned, pos, -1))
    right = np.minimum.accumulate(np.where(pinned, pos, len(s))[::-1])[::-1]
    free = ~pinned
    lead = free & (left < 0)
    trail = free & (right >= len(s))
    gap = free & ~lead & ~trail
    theta[lead] = th[0]
    theta[trail] = th[-1]
    if gap.any():
        a, b = left[gap], right[gap]
        u = (s[gap] - s[a]) / (s[b] - s[a])
        theta[gap] = theta[a] + (theta[b] - theta[a]) * smoothstep(u)
    return theta, pinned


def type_c_bridged(rotated: FramePath, directions, sign1=1, pin_tol=1e-8) -> FramePath:
    """Candidate type-C frame G(theta) B with theta from bridged_theta.

    The result is orthonormal by construction; whether it is a smooth type-C
    frame is left to verify_frame (pattern residual and skew defect).
    """
    theta, _ = bridged_theta(rotated.s, directions, pin_tol)
    G = _g_bar(theta, _sign(sign1, "sign1"))
    return FramePath(rotated.s, G @ rotated.Z, None, rotated.strict)


def sign_branch_table(bishop: FramePath, b, tol=1e-5):
    """For all four (sign1, sign3) branches: residual between the extracted
    coefficients of C = G B and the closed-form channels."""
    rows = []
    for s1 in (1, -1):
        for s3 in (1, -1):
            res = type_c_from_bishop(bishop, b, s1, s3)
            X = extract_coefficients(res.frame).X
            got = CATALOG.channels(X, CANONICAL["C"])
            want = res.coeffs.channels
            err = float(np.abs(got - want).max())
            pattern = CATALOG.residual(X, CANONICAL["C"])
            rows.append({"sign1": s1, "sign3": s3, "channel_error": err,
                         "pattern_residual": pattern, "valid": err <= tol})
    return rows
