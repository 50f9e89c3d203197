"""Random smooth test data: coefficient fields and trigonometric curves."""
from __future__ import annotations

import numpy as np

from .curves import arc_length_reparametrize, grid_size
from .frames import CoefficientPath
from .linalg import skew_from_upper
from .patterns import CANONICAL, CATALOG


def smooth_coefficients(rng, s, scale=1.0):
    """X(s) = A + sin(w1 s) B + cos(w2 s) C with random skew A, B, C.

    Returns a CoefficientPath carrying the closure (exact midpoints).
    """
    A, B, C = (scale * skew_from_upper(rng.normal(size=6)) for _ in range(3))
    w1, w2 = rng.uniform(0.5, 3.0, size=2)

    def fn(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))[:, None, None]
        return A + np.sin(w1 * t) * B + np.cos(w2 * t) * C
    s = np.asarray(s, dtype=float)
    return CoefficientPath(s, fn(s), fn=fn)


def trig_curve(rng, modes=3, domain=(0.0, 2.0)):
    """Closures (position, derivatives) of a random trigonometric curve
    gamma(t) = v t + sum_k (a_k cos kt + b_k sin kt) / k."""
    a = rng.normal(size=(modes, 4))
    b = rng.normal(size=(modes, 4))
    v = rng.normal(size=4)
    k = np.arange(1, modes + 1, dtype=float)

    def position(t):
        t = np.asarray(t, dtype=float)[:, None]
        out = v * t
        for j in range(modes):
            out = out + (a[j] * np.cos(k[j] * t) + b[j] * np.sin(k[j] * t)) / k[j]
        return out

    def derivatives(t):
        t = np.asarray(t, dtype=float)[:, None]
        d1, d2, d3 = v + 0.0 * t, 0.0 * t, 0.0 * t
        for j in range(modes):
            c, s, kk = np.cos(k[j] * t), np.sin(k[j] * t), k[j]
            d1 = d1 + (-a[j] * s + b[j] * c)
            d2 = d2 + kk * (-a[j] * c - b[j] * s)
            d3 = d3 + kk * kk * (a[j] * s - b[j] * c)
        return d1, d2, d3
    return position, derivatives


def random_curve(rng, grid_n=512, domain=(0.0, 2.0), modes=3):
    """Arc-length sampled random trigonometric curve."""
    position, derivs = trig_curve(rng, modes, domain)
    t = np.linspace(*domain, 2049)
    speed = np.linalg.norm(derivs(t)[0], axis=1)
    length = float(np.sum(0.5 * (speed[1:] + speed[:-1]) * np.diff(t)))
    return arc_length_reparametrize(position, domain, grid_size((0.0, length), grid_n), derivs)


def random_bishop_channels(rng, s, min_rho=0.35):
    """Bishop curvatures b = (r cos phi, b2, r sin phi) with r >= min_rho.

    r, phi and b2 are random trigonometric functions, so b is never parallel
    to (0, 1, 0). Returns a type-B CoefficientPath with its closure.
    """
    r0 = rng.uniform(min_rho, 1.0)
    ra, rw, rp = rng.uniform(0.0, 0.5), rng.uniform(0.5, 3.0), rng.uniform(0, 2 * np.pi)
    p0, p1, pw, p2 = rng.uniform(-np.pi, np.pi), rng.uniform(0, 1.5), rng.uniform(0.5, 3), rng.normal()
    c0, c1, cw = rng.normal(), rng.uniform(0, 1), rng.uniform(0.5, 3.0)

    def channels(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        r = r0 + ra * (1.0 + np.sin(rw * t + rp))
        phi = p0 + p1 * np.sin(pw * t) + p2 * t
        return np.stack([r * np.cos(phi), c0 + c1 * np.cos(cw * t), r * np.sin(phi)], axis=1)

    def fn(t):
        return CATALOG.assemble(channels(t), CANONICAL["B"])
    s = np.asarray(s, dtype=float)
    return CoefficientPath.from_channels(s, channels(s), CANONICAL["B"], fn)
