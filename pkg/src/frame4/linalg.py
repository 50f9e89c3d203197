"""Fixed-size linear algebra on R^4, O(4) and so(4).

Every function accepts a single matrix/vector or a stack of them along the
leading axis (shape ``(..., 4, 4)`` / ``(..., 4)``).
"""
from __future__ import annotations

import numpy as np

from .errors import DegenerateRows

PIVOT_TOL = 1e-9
ORTHO_TOL = 1e-12

# Pade(6,6) numerator coefficients c_k = (12-k)! 6! / (12! k! (6-k)!)
_PADE6 = np.array([1.0, 1 / 2, 5 / 44, 1 / 66, 1 / 792, 1 / 15840, 1 / 665280])
_PADE_THETA = 0.5

# index pairs of the upper triangle, row-major: 01 02 03 12 13 23
UPPER = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _pade_exp(A):
    eye = np.broadcast_to(np.eye(4), A.shape)
    powers = [eye, A]
    for _ in range(5):
        powers.append(powers[-1] @ A)
    even = sum(_PADE6[k] * powers[k] for k in range(0, 7, 2))
    odd = sum(_PADE6[k] * powers[k] for k in range(1, 7, 2))
    N = even + odd
    D = even - odd
    return np.linalg.solve(D, N)


def mat_exp(X, s=1.0):
    """exp(s X) by scaling and squaring around a Pade(6,6) core.

    ``X`` is one 4x4 matrix or a stack; ``s`` is a scalar or a 1-D array of
    parameter values. The result has shape ``(4, 4)`` for scalar inputs and
    ``(m, 4, 4)`` otherwise.
    """
    X = np.asarray(X, dtype=float)
    s_arr = np.asarray(s, dtype=float)
    scalar = X.ndim == 2 and s_arr.ndim == 0
    A = (s_arr.reshape(-1, 1, 1) * X) if X.ndim == 2 else X * s_arr.reshape(-1, 1, 1)
    A = A.reshape(-1, 4, 4)

    norms = np.abs(A).sum(axis=1).max(axis=1)
    with np.errstate(divide="ignore"):
        j = np.where(norms > _PADE_THETA,
                     np.ceil(np.log2(np.maximum(norms, 1e-300) / _PADE_THETA)), 0).astype(int)
    out = np.empty_like(A)
    for jj in np.unique(j):
        idx = np.nonzero(j == jj)[0]
        R = _pade_exp(A[idx] / 2.0 ** jj)
        for _ in range(jj):
            R = R @ R
        out[idx] = R
    return out[0] if scalar else out


def antisymmetrize(M):
    M = np.asarray(M, dtype=float)
    return 0.5 * (M - np.swapaxes(M, -1, -2))


def skew_from_upper(values):
    """Build skew matrices from upper-triangle entries x01 x02 x03 x12 x13 x23."""
    v = np.asarray(values, dtype=float)
    X = np.zeros(v.shape[:-1] + (4, 4))
    for k, (i, j) in enumerate(UPPER):
        X[..., i, j] = v[..., k]
        X[..., j, i] = -v[..., k]
    return X


def upper_entries(X):
    X = np.asarray(X)
    return np.stack([X[..., i, j] for i, j in UPPER], axis=-1)


def orthonormality_defect(Z):
    """max |Z Z^T - I| over all entries (and all stacked matrices)."""
    Z = np.asarray(Z, dtype=float)
    return float(np.abs(Z @ np.swapaxes(Z, -1, -2) - np.eye(Z.shape[-1])).max())


def _mgs_single(Z, tol):
    R = np.array(Z, dtype=float)
    for k in range(R.shape[0]):
        v = R[k]
        for j in range(k):
            v -= (v @ R[j]) * R[j]
        nrm = np.sqrt(v @ v)
        if not nrm >= tol:
            raise DegenerateRows(f"Gram-Schmidt pivot {nrm:.3e} below {tol:.1e} at row {k}")
        R[k] = v / nrm
    return R


def reorthonormalize(Z, tol=PIVOT_TOL):
    """Row-wise modified Gram-Schmidt anchored at row 0.

    Row 0 keeps its direction; later rows are projected against the earlier
    ones, so the result stays the nearest practical orthogonal matrix for
    inputs that are already close to O(4).
    """
    Z = np.asarray(Z, dtype=float)
    if Z.ndim == 2:
        return _mgs_single(Z, tol)
    R = np.array(Z)
    for k in range(R.shape[-2]):
        v = R[..., k, :]
        for j in range(k):
            v -= np.einsum("...i,...i->...", v, R[..., j, :])[..., None] * R[..., j, :]
        nrm = np.linalg.norm(v, axis=-1)
        if not np.all(nrm >= tol):
            raise DegenerateRows(
                f"Gram-Schmidt pivot {nrm.min():.3e} below {tol:.1e} at row {k}")
        R[..., k, :] = v / nrm[..., None]
    return R


def cross4(a, b, c):
    """Vector orthogonal to a, b, c with det[a; b; c; result] = |result|^2."""
    M = np.stack(np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float),
                                     np.asarray(c, float)), axis=-2)
    cols = [0, 1, 2, 3]
    out = []
    for i in range(4):
        minor = M[..., [k for k in cols if k != i]]
        # cofactor of entry (3, i) in the 4x4 matrix [a; b; c; e_i]
        out.append((-1) ** (3 + i) * np.linalg.det(minor))
    return np.stack(out, axis=-1)


def complete_frame(rows):
    """Orthonormal completion of k orthonormal rows to a 4x4 with det +1.

    Deterministic: the standard basis vectors are tried in order and kept
    when their residual after projection is largest.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    basis = [r / np.linalg.norm(r) for r in rows]
    while len(basis) < 4:
        best, best_norm = None, -1.0
        for e in np.eye(4):
            v = e - sum((e @ b) * b for b in basis)
            n = np.linalg.norm(v)
            if n > best_norm + 1e-12:
                best, best_norm = v, n
        basis.append(best / best_norm)
    Z = reorthonormalize(np.array(basis))
    if np.linalg.det(Z) < 0:
        Z[-1] = -Z[-1]
    return Z


def embed3(Q):
    """diag(1, Q) for one 3x3 matrix or a stack."""
    Q = np.asarray(Q, dtype=float)
    out = np.zeros(Q.shape[:-2] + (4, 4))
    out[..., 0, 0] = 1.0
    out[..., 1:, 1:] = Q
    return out


def rotation_to_e2(xi):
    """Rotation Q in SO(3) with Q @ xi = (0, 1, 0) for a unit 3-vector xi.

    Rows of Q are (u, xi, u x xi); for xi on a coordinate axis the result is
    an exact signed permutation matrix.
    """
    xi = np.asarray(xi, dtype=float)
    xi = xi / np.linalg.norm(xi)
    k = int(np.argmin(np.abs(xi)))
    a = np.zeros(3)
    a[k] = 1.0
    u = a - (a @ xi) * xi
    u /= np.linalg.norm(u)
    w = np.cross(u, xi)
    return np.array([u, xi, w])
