"""Frame, coefficient and transformation paths; the frame equation Z' = X Z.

Frames are stored row-wise: row 0 is the unit tangent, rows 1..3 the
normal fields, so a frame path is an (n, 4, 4) array.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np

from . import _grid
from .linalg import antisymmetrize, mat_exp, orthonormality_defect, reorthonormalize
from .patterns import CANONICAL, CATALOG, TYPES, type_residuals

FRAME_TOL = 1e-8
PATTERN_TOL = 1e-6


def _check_type(frame_type):
    if frame_type is not None and frame_type not in TYPES:
        raise ValueError(f"unknown frame type {frame_type!r}")


@dataclass(frozen=True, eq=False)
class FramePath:
    s: np.ndarray
    Z: np.ndarray
    declared_type: Optional[str] = None
    strict: bool = field(default=True, repr=False)

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        Z = np.asarray(self.Z, dtype=float)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "Z", Z)
        if Z.shape != (len(s), 4, 4):
            raise ValueError("Z must have shape (n, 4, 4)")
        _check_type(self.declared_type)
        if self.strict:
            d = orthonormality_defect(Z)
            if not d <= FRAME_TOL:
                raise ValueError(f"frame rows not orthonormal (defect {d:.3e})")

    def __len__(self):
        return len(self.s)

    @property
    def tangent(self):
        return self.Z[:, 0, :]

    def permuted(self, perm):
        """Reorder rows (row 0 must stay fixed)."""
        if perm[0] != 0:
            raise ValueError("permutation must fix the tangent")
        return FramePath(self.s, self.Z[:, list(perm), :], None, self.strict)


@dataclass(frozen=True, eq=False)
class CoefficientPath:
    """Samples of an so(4)-valued coefficient matrix.

    ``fn`` optionally evaluates X at arbitrary s (used for exact midpoint
    values in the integrators); ``constant`` marks a constant matrix, which
    integrate_frame then solves with the exact exponential.
    """

    s: np.ndarray
    X: np.ndarray
    pattern: Optional[int] = None
    fn: Optional[Callable] = field(default=None, repr=False)
    constant: bool = False

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        X = antisymmetrize(np.asarray(self.X, dtype=float))
        if X.shape != (len(s), 4, 4):
            raise ValueError("X must have shape (n, 4, 4)")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "X", X)
        if self.pattern is not None:
            r = CATALOG.residual(X, self.pattern)
            if not r <= PATTERN_TOL:
                raise ValueError(
                    f"declared pattern {self.pattern} violated (off-pattern {r:.3e})")

    def __len__(self):
        return len(self.s)

    @classmethod
    def from_channels(cls, s, channels, pattern, fn=None):
        return cls(s, CATALOG.assemble(channels, pattern), pattern, fn)

    @classmethod
    def from_constant(cls, X, s):
        X = antisymmetrize(np.asarray(X, dtype=float))
        s = np.asarray(s, dtype=float)
        return cls(s, np.broadcast_to(X, (len(s), 4, 4)).copy(),
                   fn=lambda t: np.broadcast_to(X, (len(np.atleast_1d(t)), 4, 4)),
                   constant=True)

    @property
    def frame_type(self):
        return None if self.pattern is None else CATALOG.type_of[self.pattern]

    @property
    def channels(self):
        """x1, x2, x3 per sample for the declared pattern."""
        if self.pattern is None:
            raise ValueError("no pattern declared")
        return CATALOG.channels(self.X, self.pattern)

    def declare(self, pattern):
        return CoefficientPath(self.s, self.X, pattern, self.fn, self.constant)

    def at_midpoints(self):
        s_mid = 0.5 * (self.s[:-1] + self.s[1:])
        if self.fn is not None:
            return antisymmetrize(np.asarray(self.fn(s_mid), dtype=float))
        return _grid.midpoints(self.X)


@dataclass(frozen=True, eq=False)
class TransformPath:
    """G(s) in O(4) with Z1 = G Z0; theta and the sign branch when known."""

    s: np.ndarray
    G: np.ndarray
    theta: Optional[np.ndarray] = None
    signs: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "s", np.asarray(self.s, dtype=float))
        object.__setattr__(self, "G", np.asarray(self.G, dtype=float))
        d = orthonormality_defect(self.G)
        if not d <= FRAME_TOL:
            raise ValueError(f"transformation leaves O(4) (defect {d:.3e})")

    def fixes_tangent(self, tol=FRAME_TOL):
        G = self.G
        return bool(np.abs(G[:, 0, 0] - 1.0).max() <= tol
                    and np.abs(G[:, 0, 1:]).max() <= tol
                    and np.abs(G[:, 1:, 0]).max() <= tol)

    def apply(self, frame: FramePath, declared_type=None) -> FramePath:
        return FramePath(frame.s, self.G @ frame.Z, declared_type)


def integrate_frame(coeffs: CoefficientPath, Z0) -> FramePath:
    """Solve Z' = X Z from Z(s_0) = Z0 on the coefficient grid.

    Classical RK4 with step equal to the grid spacing and row-anchored
    re-orthonormalization after every step; constant X uses exp((s - s0) X).
    """
    Z0 = np.asarray(Z0, dtype=float)
    s = coeffs.s
    decl = coeffs.frame_type
    if coeffs.constant:
        Z = mat_exp(coeffs.X[0], s - s[0]) @ Z0
        return FramePath(s, Z, decl)
    h = _grid.spacing(s)
    P = _grid.rk4_propagators(coeffs.X[:-1], coeffs.at_midpoints(), coeffs.X[1:], h)
    return FramePath(s, _grid.march_left(P, Z0), decl)


def extract_coefficients(frame: FramePath) -> CoefficientPath:
    """X = antisym(Z' Z^T) with 4th-order differences; pattern undeclared."""
    Zp = _grid.diff(frame.Z, frame.s, 1)
    return CoefficientPath(frame.s, Zp @ np.swapaxes(frame.Z, 1, 2))


def skew_defect(frame: FramePath) -> float:
    """max |sym(Z' Z^T)|: vanishes (to stencil accuracy) iff Z is smooth.

    Jumps in the frame between samples show up here even when every
    antisymmetric entry looks admissible.
    """
    Zp = _grid.diff(frame.Z, frame.s, 1)
    M = Zp @ np.swapaxes(frame.Z, 1, 2)
    return float(np.abs(0.5 * (M + np.swapaxes(M, 1, 2))).max())


def solve_transform(X0: CoefficientPath, X1: CoefficientPath, G0) -> TransformPath:
    """Solve G' = X1 G - G X0 (the transformation taking Z0 to Z1 = G Z0).

    RK4 on the row-major vectorization, re-orthonormalized every step.
    """
    if len(X0.s) != len(X1.s) or not np.allclose(X0.s, X1.s, rtol=0, atol=1e-12):
        raise ValueError("coefficient grids differ")
    s = X0.s
    h = _grid.spacing(s)
    eye = np.eye(4)

    def kron(A1, A0):
        return (np.einsum("nij,kl->nikjl", A1, eye)
                - np.einsum("ij,nlk->nikjl", eye, A0)).reshape(-1, 16, 16)

    K0 = kron(X1.X[:-1], X0.X[:-1])
    Km = kron(X1.at_midpoints(), X0.at_midpoints())
    K1 = kron(X1.X[1:], X0.X[1:])
    P = _grid.rk4_propagators(K0, Km, K1, h)
    G = np.empty((len(s), 4, 4))
    g = reorthonormalize(np.asarray(G0, dtype=float))
    G[0] = g
    for i in range(len(s) - 1):
        g = reorthonormalize((P[i] @ g.ravel()).reshape(4, 4))
        G[i + 1] = g
    return TransformPath(s, G)


@dataclass(frozen=True)
class FrameReport:
    orthonormality_defect: float
    tangent_defect: Optional[float]
    skew_defect: float
    residuals: Dict[str, float]
    degenerate: bool
    expected: Optional[str]
    tol: float
    passed: Optional[bool]

    def residual(self, frame_type=None):
        t = frame_type or self.expected
        return max(self.residuals[t], self.skew_defect)

    def lines(self):
        out = [f"orthonormality_defect {self.orthonormality_defect:.17g}"]
        if self.tangent_defect is not None:
            out.append(f"tangent_defect {self.tangent_defect:.17g}")
        out.append(f"skew_defect {self.skew_defect:.17g}")
        for t in TYPES:
            out.append(f"residual_{t} {self.residuals[t]:.17g}")
        out.append(f"degenerate {self.degenerate}")
        if self.expected is not None:
            out.append(f"expected {self.expected} tol {self.tol:g} "
                       f"{'PASS' if self.passed else 'FAIL'}")
        return out


def verify_frame(frame: FramePath, curve=None, expected: Optional[str] = None,
                 tol: float = PATTERN_TOL) -> FrameReport:
    """Aggregate frame invariants: orthonormality, tangent match, smoothness
    and the best pattern residual of every type."""
    _check_type(expected)
    orth = orthonormality_defect(frame.Z)
    tangent = None
    if curve is not None:
        tangent = float(np.abs(frame.Z[:, 0, :] - curve.T).max())
    Zp = _grid.diff(frame.Z, frame.s, 1)
    M = Zp @ np.swapaxes(frame.Z, 1, 2)
    skew = float(np.abs(0.5 * (M + np.swapaxes(M, 1, 2))).max())
    X = antisymmetrize(M)
    residuals = type_residuals(X)
    degenerate = bool(np.any(np.abs(X).max(axis=(0, 2)) <= tol))
    passed = None
    if expected is not None:
        passed = (orth <= FRAME_TOL
                  and (tangent is None or tangent <= FRAME_TOL)
                  and residuals[expected] <= tol
                  and skew <= tol)
    return FrameReport(orth, tangent, skew, residuals, degenerate, expected, tol, passed)


def canonical_pattern(frame_type):
    return CANONICAL[frame_type]
