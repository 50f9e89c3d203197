"""Arc-length sampled curves in E^4."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import _grid
from .errors import NotRegular, NotUnit

SPEED_TOL = 1e-8
UNIT_TOL = 1e-8
REGULAR_TOL = 1e-6
GRAM_TOL = 1e-10
DEFAULT_GRID_N = 2048  # samples per unit of domain length

_GL_X, _GL_W = np.polynomial.legendre.leggauss(5)


@dataclass(frozen=True)
class CurveSpec:
    kind: str
    domain: tuple[float, float]
    sample_count: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.domain[0] < self.domain[1]:
            raise ValueError("domain must satisfy s_min < s_max")
        if self.sample_count < 16:
            raise ValueError("sample_count must be at least 16")


@dataclass(frozen=True, eq=False)
class CurvePath:
    """Samples of an arc-length parametrized curve.

    ``Tp`` and ``Tpp`` are dT/ds and d^2T/ds^2; ``breaks`` lists arc-length
    values of junctions that finite-difference stencils must not straddle.
    """

    s: np.ndarray
    gamma: np.ndarray
    T: np.ndarray
    Tp: Optional[np.ndarray] = None
    Tpp: Optional[np.ndarray] = None
    breaks: tuple = ()

    def __post_init__(self):
        for name in ("s", "gamma", "T", "Tp", "Tpp"):
            v = getattr(self, name)
            if v is not None:
                v = np.asarray(v, dtype=float)
                if not np.all(np.isfinite(v)):
                    raise ValueError(f"non-finite values in {name}")
                object.__setattr__(self, name, v)
        if self.s.ndim != 1 or not np.all(np.diff(self.s) > 0):
            raise ValueError("s must be strictly increasing")
        for name in ("gamma", "T", "Tp", "Tpp"):
            v = getattr(self, name)
            if v is not None and v.shape != (len(self.s), 4):
                raise ValueError(f"{name} must have shape (n, 4)")

    def __len__(self):
        return len(self.s)

    @property
    def h(self):
        return _grid.spacing(self.s)

    def index_of(self, s_value):
        return int(np.argmin(np.abs(self.s - s_value)))


@dataclass(frozen=True)
class RegularityReport:
    is_regular: bool
    is_2_regular: bool
    min_speed: float
    min_Tp_norm: float
    frenet_rank_ok: bool
    min_gram: float


def grid_size(domain, grid_n=DEFAULT_GRID_N):
    """Sample count for a domain at ``grid_n`` samples per unit length."""
    length = float(domain[1] - domain[0])
    return max(16, int(np.ceil(grid_n * length)) + 1)


def _fd_velocity(position, t, scale):
    h = 1e-3 * scale
    return (position(t - 2 * h) - 8 * position(t - h) + 8 * position(t + h)
            - position(t + 2 * h)) / (12 * h)


def _tangent_derivatives(d1, d2, d3):
    v = np.linalg.norm(d1, axis=1)[:, None]
    T = d1 / v
    Ta = np.sum(T * d2, axis=1)[:, None]
    P = d2 - Ta * T
    Tp = P / v ** 2
    T_t = P / v
    P_t = d3 - (np.sum(T_t * d2, axis=1) + np.sum(T * d3, axis=1))[:, None] * T - Ta * T_t
    Tpp = (P_t / v ** 2 - 2 * P * Ta / v ** 3) / v
    return T, Tp, Tpp


def arc_length_reparametrize(position: Callable, domain: Sequence[float], n: int,
                             derivatives: Optional[Callable] = None, breaks=(),
                             origin=None) -> CurvePath:
    """Resample a regular curve on an equispaced arc-length grid of n points.

    ``position`` maps an array of parameter values to an (m, 4) array.
    ``derivatives``, if given, maps parameter values to the first three
    parameter derivatives; then T, T' and T'' are exact, otherwise they come
    from finite differences. Arc length is measured from ``origin``
    (default: the start of the domain).
    """
    t0, t1 = map(float, domain)
    if not t0 < t1:
        raise ValueError("empty domain")
    n = int(n)
    if n < 16:
        raise ValueError("need at least 16 samples")
    span = t1 - t0

    def velocity(t):
        if derivatives is not None:
            return derivatives(t)[0]
        return _fd_velocity(position, t, span)

    cuts = sorted({t0, t1, *[b for b in breaks if t0 < b < t1]})
    panels = max(8 * (n - 1), 4096)
    nodes = [np.linspace(a, b, max(2, int(round(panels * (b - a) / span))) + 1)
             for a, b in zip(cuts[:-1], cuts[1:])]
    t_tab = np.unique(np.concatenate(nodes))
    dt = np.diff(t_tab)
    gl_t = t_tab[:-1, None] + 0.5 * dt[:, None] * (_GL_X[None, :] + 1.0)
    gl_speed = np.linalg.norm(velocity(gl_t.ravel()), axis=1).reshape(gl_t.shape)
    node_speed = np.linalg.norm(velocity(t_tab), axis=1)
    min_speed = min(gl_speed.min(), node_speed.min())
    if not min_speed >= SPEED_TOL:
        raise NotRegular(f"speed {min_speed:.3e} below {SPEED_TOL:.0e}")
    L_tab = np.concatenate([[0.0], np.cumsum(0.5 * dt * (gl_speed @ _GL_W))])

    def length_to(t):
        k = np.clip(np.searchsorted(t_tab, t, side="right") - 1, 0, len(dt) - 1)
        a = t_tab[k]
        half = 0.5 * (t - a)
        q = a[:, None] + half[:, None] * (_GL_X[None, :] + 1.0)
        sp = np.linalg.norm(velocity(q.ravel()), axis=1).reshape(q.shape)
        return L_tab[k] + half * (sp @ _GL_W)

    total = L_tab[-1]
    target = np.linspace(0.0, total, n)
    t = PchipInterpolator(L_tab, t_tab)(target)
    t[0], t[-1] = t0, t1
    for _ in range(3):
        inner = slice(1, n - 1)
        err = length_to(t[inner]) - target[inner]
        t[inner] -= err / np.linalg.norm(velocity(t[inner]), axis=1)
    s_shift = 0.0
    if origin is not None:
        s_shift = float(length_to(np.array([float(origin)]))[0])
    s = target - s_shift
    s_breaks = tuple(float(x) - s_shift for x in
                     length_to(np.array([b for b in breaks if t0 < b < t1], dtype=float)))

    gamma = position(t)
    if derivatives is not None:
        T, Tp, Tpp = _tangent_derivatives(*derivatives(t))
        return CurvePath(s, gamma, T, Tp, Tpp, breaks=s_breaks)
    d1 = velocity(t)
    T = d1 / np.linalg.norm(d1, axis=1)[:, None]
    return derivatives_fd(CurvePath(s, gamma, T, breaks=s_breaks))


def derivatives_fd(path: CurvePath) -> CurvePath:
    """Fill Tp and Tpp with 4th-order finite differences of T.

    Stencils are one-sided at the ends of every segment between breaks.
    """
    Tp = _grid.diff(path.T, path.s, 1, path.breaks)
    Tpp = _grid.diff(path.T, path.s, 2, path.breaks)
    return replace(path, Tp=Tp, Tpp=Tpp)


# short alias
derivatives = derivatives_fd


def gram_determinant(T, Tp, Tpp):
    M = np.stack([T, Tp, Tpp], axis=1)
    return np.linalg.det(M @ np.swapaxes(M, 1, 2))


def regularity_report(path: CurvePath) -> RegularityReport:
    if path.Tp is None or path.Tpp is None:
        path = derivatives_fd(path)
    speed = np.linalg.norm(_grid.diff(path.gamma, path.s, 1, path.breaks), axis=1)
    tpn = np.linalg.norm(path.Tp, axis=1)
    gram = gram_determinant(path.T, path.Tp, path.Tpp)
    min_speed = float(speed.min())
    min_tp = float(tpn.min())
    min_gram = float(gram.min())
    return RegularityReport(
        is_regular=min_speed > REGULAR_TOL,
        is_2_regular=min_tp > REGULAR_TOL,
        min_speed=min_speed,
        min_Tp_norm=min_tp,
        frenet_rank_ok=min_gram > GRAM_TOL,
        min_gram=min_gram,
    )


def _check_unit(T, where):
    dev = np.abs(np.linalg.norm(T, axis=1) - 1.0).max()
    if not dev <= UNIT_TOL:
        raise NotUnit(f"tangent field deviates from unit length by {dev:.3e} ({where})")


def curve_from_tangent(T_field: Callable, domain: Sequence[float], n: int, origin=None,
                       derivatives: Optional[Callable] = None, breaks=(),
                       anchor: Optional[float] = None) -> CurvePath:
    """Integrate a unit tangent field into positions.

    gamma(anchor) = origin (anchor defaults to the domain start). Simpson's
    rule per interval with exact midpoint evaluations of the field.
    ``derivatives`` maps s to (T', T''); otherwise finite differences.
    """
    s = np.linspace(float(domain[0]), float(domain[1]), int(n))
    origin = np.zeros(4) if origin is None else np.asarray(origin, dtype=float)
    T = np.asarray(T_field(s), dtype=float)
    s_mid = 0.5 * (s[:-1] + s[1:])
    T_mid = np.asarray(T_field(s_mid), dtype=float)
    _check_unit(T, "grid")
    _check_unit(T_mid, "midpoints")
    integral = _grid.cumulative_simpson(T, s, T_mid)
    if anchor is None:
        offset = integral[0]
    else:
        k = int(np.argmin(np.abs(s - anchor)))
        a, b = s[k], float(anchor)
        if a == b:
            offset = integral[k]
        else:
            ends = np.asarray(T_field(np.array([a, 0.5 * (a + b), b])), dtype=float)
            offset = integral[k] + (b - a) / 6.0 * (ends[0] + 4 * ends[1] + ends[2])
    gamma = origin + integral - offset
    inner_breaks = tuple(b for b in breaks if s[0] < b < s[-1])
    if derivatives is not None:
        Tp, Tpp = derivatives(s)
        return CurvePath(s, gamma, T, Tp, Tpp, breaks=inner_breaks)
    return derivatives_fd(CurvePath(s, gamma, T, breaks=inner_breaks))


def curve_from_frames(s, Z, b, b_prime, origin=None) -> CurvePath:
    """Curve data carried by a Bishop-type frame with curvatures b(s).

    T is row 0 of Z; T' = sum b_i N_i and T'' = sum b_i' N_i - |b|^2 T follow
    from the Bishop equations, so no differentiation of samples is needed.
    """
    s = np.asarray(s, dtype=float)
    T = Z[:, 0, :]
    N = Z[:, 1:, :]
    Tp = np.einsum("ni,nij->nj", b, N)
    Tpp = np.einsum("ni,nij->nj", b_prime, N) - np.sum(b * b, axis=1)[:, None] * T
    origin = np.zeros(4) if origin is None else np.asarray(origin, dtype=float)
    gamma = origin + _grid.cumulative_simpson(T, s)
    return CurvePath(s, gamma, T, Tp, Tpp)
