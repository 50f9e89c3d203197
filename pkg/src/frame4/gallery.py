"""Named example curves and coefficient systems, plus admissibility detectors.

Presets
-------
line, circle, helix4d   smooth reference curves
expC                    frame exp(sX) for a constant type-C matrix X
gammaNoD                regular curve with a flat junction: no type-D frame
noF                     2-regular curve built from two hyperplane pieces: no type-F frame
bumpNoC, bumpYesC       Bishop curvatures made of flat bumps (no type C / type C)
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from .construct import rotate_bishop
from .convert import fibonacci_sphere, type_c_bridged, type_c_from_bishop
from .curves import (DEFAULT_GRID_N, CurvePath, arc_length_reparametrize,
                     curve_from_frames, curve_from_tangent, grid_size)
from .errors import AdmissibilityError, ResolutionError, SideDegenerate, UnknownPreset
from .frames import CoefficientPath, FramePath, integrate_frame, verify_frame
from .linalg import mat_exp, rotation_to_e2
from .patterns import CANONICAL, CATALOG

FLUSH_LOG = -700.0
SWEEP_GRID_N = 512
SWEEP_SUCCESS = 1e-5


def default_grid_n():
    env = os.environ.get("FRAME4_GRID_N")
    if env:
        n = int(env)
        if n < 16:
            raise ValueError("FRAME4_GRID_N must be at least 16")
        return n
    return DEFAULT_GRID_N


# ---------------------------------------------------------------- Bishop systems

@dataclass(frozen=True)
class BishopSystem:
    """Bishop curvatures given in log-magnitude form.

    Each component is (sign, L, L') with b_k = sign * exp(L(s)) and
    L = -inf off the support, so unit directions b/|b| remain exact where
    the magnitudes themselves underflow.
    """

    components: Tuple[Tuple[float, Callable, Callable], ...]
    domain: Tuple[float, float]

    def _logs(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        L = np.stack([L(s) for _, L, _ in self.components], axis=1)
        Lp = np.stack([Lp(s) for _, _, Lp in self.components], axis=1)
        sg = np.array([c[0] for c in self.components])
        return L, Lp, sg

    def values(self, s):
        L, _, sg = self._logs(s)
        with np.errstate(under="ignore"):
            return np.where(L < FLUSH_LOG, 0.0, sg * np.exp(np.maximum(L, FLUSH_LOG)))

    def derivatives(self, s):
        L, Lp, sg = self._logs(s)
        with np.errstate(under="ignore", invalid="ignore"):
            out = np.where(L < FLUSH_LOG, 0.0,
                           sg * np.where(np.isfinite(Lp), Lp, 0.0)
                           * np.exp(np.maximum(L, FLUSH_LOG)))
        return out

    def directions(self, s):
        """b/|b| computed in log space; zero rows where b vanishes exactly."""
        L, _, sg = self._logs(s)
        top = L.max(axis=1)
        live = np.isfinite(top)
        with np.errstate(under="ignore", invalid="ignore"):
            w = np.where(live[:, None], np.exp(L - np.where(live, top, 0.0)[:, None]), 0.0)
        w = sg * w
        n = np.linalg.norm(w, axis=1)
        return np.where(live[:, None], w / np.where(n > 0, n, 1.0)[:, None], 0.0)

    def coefficients(self, s) -> CoefficientPath:
        B = CANONICAL["B"]
        return CoefficientPath.from_channels(
            s, self.values(s), B, fn=lambda t: CATALOG.assemble(self.values(t), B))

    def bishop_frame(self, s, Z0=None) -> FramePath:
        Z0 = np.eye(4) if Z0 is None else Z0
        return integrate_frame(self.coefficients(s), Z0)

    def curve(self, s, Z0=None):
        """(curve, Bishop frame) with T = row 0 of the integrated frame."""
        frame = self.bishop_frame(s, Z0)
        curve = curve_from_frames(s, frame.Z, self.values(s), self.derivatives(s))
        return curve, frame


def _piece(lo, hi, f):
    """f on the open interval (lo, hi), -inf elsewhere."""
    if np.isfinite(lo) and np.isfinite(hi):
        mid = 0.5 * (lo + hi)
    else:
        mid = lo + 1.0 if np.isfinite(lo) else hi - 1.0

    def g(s):
        s = np.asarray(s, dtype=float)
        inside = (s > lo) & (s < hi)
        safe = np.where(inside, s, mid)
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(inside, f(safe), -np.inf)
    return g


def _join(*parts):
    def g(s):
        out = np.full(np.shape(s), -np.inf)
        for p in parts:
            v = p(s)
            out = np.where(np.isfinite(v), v, out)
        return out
    return g


_L1_left = _piece(-np.inf, 0.0, lambda s: 1.0 / s)
_L1p_left = _piece(-np.inf, 0.0, lambda s: -1.0 / s ** 2)
_L1_right = _piece(2.0, np.inf, lambda s: -1.0 / (s - 2.0))
_L1p_right = _piece(2.0, np.inf, lambda s: 1.0 / (s - 2.0) ** 2)
_L2 = _piece(0.0, 1.0, lambda s: -1.0 / (s * (1.0 - s)))
_L2p = _piece(0.0, 1.0, lambda s: (1.0 - 2.0 * s) / (s * (1.0 - s)) ** 2)
_L3 = _piece(1.0, 2.0, lambda s: -1.0 / ((s - 1.0) * (2.0 - s)))
_L3p = _piece(1.0, 2.0, lambda s: (3.0 - 2.0 * s) / ((s - 1.0) * (2.0 - s)) ** 2)

BUMP_DOMAIN = (-1.0, 3.0)
BUMP_NO_C = BishopSystem(
    ((1.0, _join(_L1_left, _L1_right), _join(_L1p_left, _L1p_right)),
     (1.0, _L2, _L2p), (1.0, _L3, _L3p)), BUMP_DOMAIN)
BUMP_YES_C = BishopSystem(
    ((1.0, _L1_left, _L1p_left), (1.0, _L2, _L2p), (1.0, _L3, _L3p)), BUMP_DOMAIN)


def constant_bishop(b, domain):
    """Bishop system with constant curvatures b (zero entries allowed)."""
    comps = []
    for v in b:
        if v == 0:
            comps.append((1.0, lambda s: np.full(np.shape(s), -np.inf),
                          lambda s: np.zeros(np.shape(s))))
        else:
            lv = float(np.log(abs(v)))
            comps.append((float(np.sign(v)), lambda s, lv=lv: np.full(np.shape(s), lv),
                          lambda s: np.zeros(np.shape(s))))
    return BishopSystem(tuple(comps), tuple(domain))


# ---------------------------------------------------------------- curve closures

def _helix(a=1.0, b=1.0, c=2.0):
    def pos(t):
        return np.stack([a * np.cos(t), a * np.sin(t), b * np.cos(c * t), b * np.sin(c * t)], 1)

    def der(t):
        d1 = np.stack([-a * np.sin(t), a * np.cos(t), -b * c * np.sin(c * t),
                       b * c * np.cos(c * t)], 1)
        d2 = np.stack([-a * np.cos(t), -a * np.sin(t), -b * c * c * np.cos(c * t),
                       -b * c * c * np.sin(c * t)], 1)
        d3 = np.stack([a * np.sin(t), -a * np.cos(t), b * c ** 3 * np.sin(c * t),
                       -b * c ** 3 * np.cos(c * t)], 1)
        return d1, d2, d3
    return pos, der


def _circle_pos(t):
    z = np.zeros_like(t)
    return np.stack([np.cos(t), np.sin(t), z, z], 1)


def _circle_der(t):
    z = np.zeros_like(t)
    return (np.stack([-np.sin(t), np.cos(t), z, z], 1),
            np.stack([-np.cos(t), -np.sin(t), z, z], 1),
            np.stack([np.sin(t), -np.cos(t), z, z], 1))


def _line_pos(t):
    z = np.zeros_like(t)
    return np.stack([t, z, z, z], 1)


def _line_der(t):
    z = np.zeros_like(t)
    return np.stack([z + 1.0, z, z, z], 1), np.stack([z, z, z, z], 1), np.stack([z, z, z, z], 1)


def _flat(t):
    """v(t) = exp(-1/|t|) with its first three derivatives, exactly 0 at t = 0."""
    t = np.asarray(t, dtype=float)
    a = np.abs(t)
    safe = np.where(a > 0, a, 1.0)
    with np.errstate(under="ignore", over="ignore"):
        v = np.where(a > 0, np.exp(-1.0 / safe), 0.0)
    ts = np.where(a > 0, t, 1.0)
    pos = t > 0
    v1 = np.where(pos, v / ts ** 2, -v / ts ** 2)
    v2 = np.where(pos, v * (1 / ts ** 4 - 2 / ts ** 3), v * (1 / ts ** 4 + 2 / ts ** 3))
    v3 = np.where(pos, v * (1 / ts ** 6 - 6 / ts ** 5 + 6 / ts ** 4),
                  -v * (1 / ts ** 6 + 6 / ts ** 5 + 6 / ts ** 4))
    zero = a == 0
    return [np.where(zero, 0.0, x) for x in (v, v1, v2, v3)]


def _gamma_no_d_pos(t):
    t = np.asarray(t, dtype=float)
    v = _flat(t)[0]
    z = np.zeros_like(t)
    return np.stack([t, np.where(t > 0, v, 0.0), np.where(t < 0, v, 0.0), z], 1)


def _gamma_no_d_der(t):
    t = np.asarray(t, dtype=float)
    _, v1, v2, v3 = _flat(t)
    z = np.zeros_like(t)
    pos, neg = t > 0, t < 0

    def put(x, lead):
        return np.stack([z + lead, np.where(pos, x, 0.0), np.where(neg, x, 0.0), z], 1)
    return put(v1, 1.0), put(v2, 0.0), put(v3, 0.0)


def _no_f_tangent_complex(s):
    """Tangent of the no-type-F curve, valid for complex s (complex step)."""
    s = np.asarray(s)
    re = np.real(s)
    safe = np.where(re != 0, s, 1.0)
    with np.errstate(under="ignore", over="ignore"):
        v = np.where(re > 0, np.exp(-1.0 / safe), np.where(re < 0, np.exp(1.0 / safe), 0.0))
        vp = np.where(re > 0, v / safe ** 2, np.where(re < 0, -v / safe ** 2, 0.0))
    u = s
    r = 1.0 + u * u + v * v
    su = np.stack([2 * (r - 2 * u * u), -4 * u * v, 4 * u], -1) / (r * r)[..., None]
    sv = np.stack([-4 * u * v, 2 * (r - 2 * v * v), 4 * v], -1) / (r * r)[..., None]
    sig = np.stack([2 * u, 2 * v, u * u + v * v - 1.0], -1) / r[..., None]
    d = su + sv * vp[..., None]
    return sig, d, re


def _spread(x, re):
    """(x, y-or-z, w) -> E^4: second slot is y for s > 0 and z for s < 0."""
    z = np.zeros_like(x[..., 0])
    pos = (re > 0)
    return np.stack([x[..., 0], np.where(pos, x[..., 1], z), np.where(pos, z, x[..., 1]),
                     x[..., 2]], -1)


def no_f_tangent(s):
    sig, _, re = _no_f_tangent_complex(np.asarray(s, dtype=float))
    return _spread(np.real(sig), re)


def no_f_derivatives(s):
    s = np.asarray(s, dtype=float)
    _, d, re = _no_f_tangent_complex(s)
    Tp = _spread(np.real(d), re)
    h = 1e-30
    _, dc, _ = _no_f_tangent_complex(s + 1j * h)
    Tpp = _spread(np.imag(dc) / h, re)
    return Tp, Tpp


EXP_C_MATRIX = CATALOG.assemble([2.0, 1.0, 1.0], CANONICAL["C"])


def exp_c_closed_form(s):
    """Closed-form position of the curve whose tangent is row 0 of exp(sX)."""
    s = np.asarray(s, dtype=float)
    r = np.sqrt(2.0)
    return np.stack([
        np.sin(r * s) * np.cos(s) / r,
        np.sin(s) * np.sin(r * s) / r,
        (-np.sin(s) * np.sin(r * s) - r * np.cos(s) * np.cos(r * s)) / r,
        (np.sin(r * s) * np.cos(s) - r * np.sin(s) * np.cos(r * s)) / r,
    ], 1)


def exp_c_tangent(s):
    return mat_exp(EXP_C_MATRIX, s)[:, 0, :]


def exp_c_derivatives(s):
    E = mat_exp(EXP_C_MATRIX, s)
    return (EXP_C_MATRIX @ E)[:, 0, :], (EXP_C_MATRIX @ EXP_C_MATRIX @ E)[:, 0, :]


# ---------------------------------------------------------------- presets

@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    domain: Tuple[float, float]
    expected: Dict[str, str]
    kind: str  # "position" | "tangent" | "bishop"
    position: Optional[Callable] = field(default=None, repr=False)
    derivatives: Optional[Callable] = field(default=None, repr=False)
    tangent: Optional[Callable] = field(default=None, repr=False)
    bishop: Optional[BishopSystem] = field(default=None, repr=False)
    origin: Optional[float] = None
    start: Optional[np.ndarray] = field(default=None, repr=False)
    s_star: Optional[float] = None
    breaks: Tuple[float, ...] = ()
    coefficient: Optional[np.ndarray] = field(default=None, repr=False)
    closed_form: Optional[Callable] = field(default=None, repr=False)

    def sample_count(self, grid_n=None):
        return grid_size(self.arc_domain(), grid_n or default_grid_n())

    def arc_domain(self):
        """Approximate arc-length extent (exact for tangent/bishop kinds)."""
        if self.kind != "position":
            return self.domain
        t = np.linspace(*self.domain, 4097)
        sp = np.linalg.norm(self.derivatives(t)[0], axis=1)
        return (0.0, float(trapezoid(sp, t)))

    def curve(self, grid_n=None) -> CurvePath:
        n = self.sample_count(grid_n)
        if self.kind == "position":
            return arc_length_reparametrize(self.position, self.domain, n, self.derivatives,
                                            breaks=self.breaks, origin=self.origin)
        if self.kind == "tangent":
            return curve_from_tangent(self.tangent, self.domain, n, origin=self.start,
                                      derivatives=self.derivatives, breaks=self.breaks,
                                      anchor=self.origin)
        s = np.linspace(*self.domain, n)
        return self.bishop.curve(s)[0]

    def coefficients(self, grid_n=None) -> Optional[CoefficientPath]:
        """The preset's own coefficient path, when it is defined by one."""
        n = self.sample_count(grid_n)
        s = np.linspace(*self.domain, n)
        if self.bishop is not None:
            return self.bishop.coefficients(s)
        if self.coefficient is not None:
            return CoefficientPath.from_constant(self.coefficient, s).declare(CANONICAL["C"])
        return None


_ALL_ADMIT = {"B": "admits", "C": "admits", "D": "admits", "F": "admits"}

_helix_pos, _helix_der = _helix()

PRESETS: Dict[str, Preset] = {p.name: p for p in [
    Preset("line", "unit-speed line (s, 0, 0, 0); every frame is constant (degenerate)",
           (0.0, 2.0), dict(_ALL_ADMIT), "position", _line_pos, _line_der),
    Preset("circle", "unit circle in the xy-plane; planar, so Frenet rank is 2",
           (0.0, 2 * np.pi), dict(_ALL_ADMIT), "position", _circle_pos, _circle_der),
    Preset("helix4d", "(cos t, sin t, cos 2t, sin 2t): generic, admits every type",
           (0.0, 2 * np.pi), dict(_ALL_ADMIT), "position", _helix_pos, _helix_der),
    Preset("expC", "tangent = row 0 of exp(sX) for the constant type-C matrix X with "
           "channels (2, 1, 1)", (0.0, 4.0), dict(_ALL_ADMIT), "tangent",
           derivatives=exp_c_derivatives, tangent=exp_c_tangent, origin=0.0,
           start=exp_c_closed_form(np.array([0.0]))[0], coefficient=EXP_C_MATRIX,
           closed_form=exp_c_closed_form),
    Preset("gammaNoD", "(t, e^(-1/t), 0, 0) for t > 0, (t, 0, e^(1/t), 0) for t < 0; "
           "T'/|T'| jumps at t = 0", (-1.0, 1.0),
           {"B": "admits", "C": "admits", "D": "fails", "F": "fails"}, "position",
           _gamma_no_d_pos, _gamma_no_d_der, origin=0.0, s_star=0.0, breaks=(0.0,)),
    Preset("noF", "2-regular curve in z = 0 for s >= 0 and y = 0 for s <= 0",
           (-1.0, 1.0), {"B": "admits", "C": "admits", "D": "admits", "F": "fails"},
           "tangent", derivatives=no_f_derivatives, tangent=no_f_tangent, origin=0.0,
           start=np.zeros(4), s_star=0.0, breaks=(0.0,)),
    Preset("bumpNoC", "Bishop curvatures: b1 on s < 0 and s > 2, b2 on (0, 1), "
           "b3 on (1, 2), all flat bumps", BUMP_DOMAIN,
           {"B": "admits", "C": "fails", "D": "fails", "F": "fails"}, "bishop",
           bishop=BUMP_NO_C, s_star=0.0),
    Preset("bumpYesC", "as bumpNoC without the b1 bump on s > 2", BUMP_DOMAIN,
           {"B": "admits", "C": "admits", "D": "fails", "F": "fails"}, "bishop",
           bishop=BUMP_YES_C, s_star=0.0),
]}


def preset_names():
    return list(PRESETS)


def get_preset(name) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


# ---------------------------------------------------------------- detectors

@dataclass(frozen=True)
class TypeDObstruction:
    s_star: float
    left: np.ndarray
    right: np.ndarray
    angle: float
    left_error: float
    right_error: float
    obstruction: bool


def _neville_levels(d, values):
    """Extrapolations to distance 0 using the first 1..k samples."""
    out = []
    for k in range(1, len(d) + 1):
        P = [values[i].copy() for i in range(k)]
        for m in range(1, k):
            for i in range(k - m):
                P[i] = (d[i + m] * P[i] - d[i] * P[i + 1]) / (d[i + m] - d[i])
        out.append(P[0])
    return out


def _one_sided_limit(curve, s_star, side, window, tp_tol):
    s = curve.s
    tpn = np.linalg.norm(curve.Tp, axis=1)
    if side > 0:
        idx = np.nonzero((s > s_star) & (s <= s_star + window))[0]
    else:
        idx = np.nonzero((s < s_star) & (s >= s_star - window))[0][::-1]
    valid = idx[tpn[idx] >= tp_tol]
    if valid.size == 0:
        raise SideDegenerate(
            f"|T'| < {tp_tol:g} on the whole {'right' if side > 0 else 'left'} side")
    first = int(np.nonzero(idx == valid[0])[0][0]) + 1
    picks = []
    for m in (1, 2, 4, 8):
        j = first * m - 1
        if j < idx.size and tpn[idx[j]] >= tp_tol:
            picks.append(idx[j])
    d = np.abs(s[picks] - s_star)
    u = curve.Tp[picks] / tpn[picks][:, None]
    levels = _neville_levels(d, u)
    errs = [np.inf] + [float(np.linalg.norm(levels[k] - levels[k - 1]))
                       for k in range(1, len(levels))]
    k = int(np.argmin(errs)) if len(levels) > 1 else 0
    est = levels[k] / np.linalg.norm(levels[k])
    return est, (errs[k] if np.isfinite(errs[k]) else float(np.linalg.norm(u[0] - est)))


def detect_type_d_obstruction(curve: CurvePath, s_star=0.0, window=0.25, tp_tol=1e-8,
                              angle_tol=1e-3) -> TypeDObstruction:
    """Angle between the one-sided limits of T'/|T'| at s_star.

    Each side extrapolates samples at distances d, 2d, 4d, 8d (d: nearest
    sample with |T'| >= tp_tol) and keeps the extrapolation level with the
    smallest change estimate. An angle above angle_tol means no continuous
    unit field D1 with T' = d1 D1 exists there.
    """
    left, el = _one_sided_limit(curve, s_star, -1, window, tp_tol)
    right, er = _one_sided_limit(curve, s_star, +1, window, tp_tol)
    angle = float(np.arctan2(np.linalg.norm(left - (left @ right) * right), left @ right))
    return TypeDObstruction(float(s_star), left, right, angle, el, er, angle > angle_tol)


@dataclass(frozen=True)
class TypeFObstruction:
    s_star: float
    left_rank: int
    right_rank: int
    left_span: np.ndarray
    right_span: np.ndarray
    left_singular: np.ndarray
    right_singular: np.ndarray
    intersection_dim: Optional[int]
    split: bool
    obstruction: bool
    note: str


def _side_span(rows, rank_tol):
    _, sv, vt = np.linalg.svd(rows, full_matrices=True)
    rank = int(np.sum(sv > rank_tol * sv[0]))
    return rank, vt[:rank], sv


def detect_type_f_obstruction(curve: CurvePath, s_star=0.0, window=0.5,
                              rank_tol=1e-6) -> TypeFObstruction:
    """Compare the linear spans of (T, T', T'') on the two sides of s_star.

    If each side spans a 3-space and the two 3-spaces differ (intersection
    of dimension at most 2), no frame (T, F1, F2, F3) with F1, F2 spanning
    the osculating space can be continuous across s_star.
    """
    s = curve.s
    sides = []
    for mask in ((s < s_star) & (s >= s_star - window), (s > s_star) & (s <= s_star + window)):
        rows = np.concatenate([curve.T[mask], curve.Tp[mask], curve.Tpp[mask]])
        sides.append(_side_span(rows, rank_tol))
    (rl, vl, svl), (rr, vr, svr) = sides
    if rl == 4 or rr == 4:
        return TypeFObstruction(float(s_star), rl, rr, vl, vr, svl, svr, None, False, False,
                                "no two-sided split")
    stacked = np.concatenate([vl, vr])
    _, sv, _ = np.linalg.svd(stacked)
    joint = int(np.sum(sv > rank_tol * sv[0]))
    inter = rl + rr - joint
    obstruction = rl == 3 and rr == 3 and inter <= 2
    note = "spans differ" if obstruction else "spans compatible"
    return TypeFObstruction(float(s_star), rl, rr, vl, vr, svl, svr, inter, True,
                            obstruction, note)


# ---------------------------------------------------------------- type-C sweep

@dataclass(frozen=True)
class SweepEntry:
    xi: np.ndarray
    avoidance_ok: bool
    outcome: str  # "ok" | "AvoidanceFailed" | "ResolutionError"
    residual: float


@dataclass(frozen=True)
class SweepReport:
    entries: Tuple[SweepEntry, ...]
    best_residual: float
    best_xi: np.ndarray
    success: bool
    grid_Q: int
    grid_n: int

    @property
    def avoidance_count(self):
        return sum(e.avoidance_ok for e in self.entries)


def sweep_directions(grid_Q):
    return np.concatenate([fibonacci_sphere(grid_Q), np.eye(3)])


def empirical_type_c_sweep(system: BishopSystem, domain=None, grid_Q=4096,
                           grid_n=SWEEP_GRID_N, success_tol=SWEEP_SUCCESS) -> SweepReport:
    """Search for a type-C frame C = G(theta) diag(1, Q) B over directions xi.

    For each xi (Fibonacci grid plus the coordinate axes), Q maps xi to e2.
    If b Q^T keeps (b1, b3) away from zero the exact conversion is used;
    otherwise theta is pinned where the curvature direction determines it
    and bridged smoothly elsewhere. The residual is the worse of the
    type-C pattern residual and the skew (smoothness) defect of the
    candidate. Evidence only: a large best residual is not a proof.
    """
    domain = tuple(domain or system.domain)
    s = np.linspace(*domain, grid_size(domain, grid_n))
    B = system.bishop_frame(s)
    # per-direction frames are orthogonal images of B; verify_frame still
    # measures their orthonormality, so skip the constructor check
    B = FramePath(s, B.Z, "B", strict=False)
    b = system.values(s)
    dirs = system.directions(s)
    entries = []
    for xi in sweep_directions(grid_Q):
        Q = rotation_to_e2(xi)
        R = rotate_bishop(B, Q)
        bq = b @ Q.T
        ok = bool(np.min(bq[:, 0] ** 2 + bq[:, 2] ** 2) >= 1e-10)
        outcome = "ok" if ok else "AvoidanceFailed"
        if ok:
            try:
                frame = type_c_from_bishop(R, bq).frame
            except ResolutionError:
                outcome = "ResolutionError"
                frame = type_c_bridged(R, dirs @ Q.T)
            except AdmissibilityError:
                outcome = "AvoidanceFailed"
                frame = type_c_bridged(R, dirs @ Q.T)
        else:
            frame = type_c_bridged(R, dirs @ Q.T)
        rep = verify_frame(frame, expected="C")
        entries.append(SweepEntry(xi, ok, outcome, rep.residual("C")))
    res = np.array([e.residual for e in entries])
    k = int(np.argmin(res))
    return SweepReport(tuple(entries), float(res[k]), entries[k].xi,
                       bool(res[k] <= success_tol), grid_Q, grid_n)
