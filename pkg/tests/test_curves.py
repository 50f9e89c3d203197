import numpy as np
import pytest
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from frame4.curves import (CurvePath, arc_length_reparametrize, curve_from_tangent,
                           derivatives_fd, grid_size, regularity_report)
from frame4.errors import NotRegular, NotUnit
from frame4.gallery import exp_c_closed_form, get_preset, no_f_tangent

from oracles import helix_curvatures


def line(t):
    z = np.zeros_like(t)
    return np.stack([t, z, z, z], 1)


def test_line_unit_speed_is_identity_grid():
    c = arc_length_reparametrize(line, (0.0, 2.0), 65)
    assert np.abs(c.s - np.linspace(0, 2, 65)).max() < 1e-12
    assert np.abs(c.gamma[:, 0] - c.s).max() < 1e-12
    assert np.abs(c.T - [1, 0, 0, 0]).max() < 1e-12


def test_circle_length():
    c = get_preset("circle").curve(512)
    assert abs(c.s[-1] - c.s[0] - 2 * np.pi) < 1e-8


def test_helix_length_matches_quadrature():
    p = get_preset("helix4d")
    c = p.curve(512)
    ref, _ = quad(lambda t: np.linalg.norm(p.derivatives(np.array([t]))[0][0]), 0, 2 * np.pi,
                  epsabs=1e-13, epsrel=1e-13)
    assert abs((c.s[-1] - c.s[0]) - ref) < 1e-8


def test_nonuniform_parametrization_is_resampled():
    # circle traversed with speed 1 + 0.5 cos t
    def pos(t):
        u = t + 0.5 * np.sin(t)
        z = np.zeros_like(t)
        return np.stack([np.cos(u), np.sin(u), z, z], 1)
    c = arc_length_reparametrize(pos, (0.0, 2 * np.pi), 2049)
    assert abs(c.s[-1] - 2 * np.pi) < 1e-8
    chord = np.linalg.norm(np.diff(c.gamma, axis=0), axis=1) / np.diff(c.s)
    assert chord.min() >= 1 - 1e-4 and chord.max() <= 1 + 1e-12
    assert np.abs(np.linalg.norm(c.Tp, axis=1) - 1).max() < 1e-6


@pytest.mark.parametrize("name", ["circle", "helix4d", "gammaNoD", "expC"])
def test_chord_length_bound(name):
    c = get_preset(name).curve(512)
    chord = np.linalg.norm(np.diff(c.gamma, axis=0), axis=1) / np.diff(c.s)
    assert chord.min() >= 1 - 1e-4 and chord.max() <= 1 + 1e-12


def test_singular_curve_rejected():
    # cusp: speed vanishes at t = 0
    def cusp(t):
        z = np.zeros_like(t)
        return np.stack([t ** 3, t ** 2, z, z], 1)
    with pytest.raises(NotRegular):
        arc_length_reparametrize(cusp, (-1.0, 1.0), 129)


def test_derivatives_line_and_circle():
    c = derivatives_fd(arc_length_reparametrize(line, (0.0, 2.0), 65))
    assert np.abs(c.Tp).max() < 1e-12
    circ = get_preset("circle")
    c = derivatives_fd(CurvePath(*[getattr(circ.curve(256), k) for k in ("s", "gamma", "T")]))
    assert np.abs(np.linalg.norm(c.Tp, axis=1) - 1).max() < 1e-6


def test_helix_curvature_analytic_and_fd():
    (k1, _, _), _ = helix_curvatures()
    c = get_preset("helix4d").curve(512)
    assert np.abs(np.linalg.norm(c.Tp, axis=1) - k1).max() < 1e-6
    fd = derivatives_fd(CurvePath(c.s, c.gamma, c.T))
    assert np.abs(np.linalg.norm(fd.Tp, axis=1) - k1).max() < 1e-6


def test_fd_agrees_with_analytic_at_fourth_order():
    errs = []
    for g in (64, 128):
        c = get_preset("helix4d").curve(g)
        fd = derivatives_fd(CurvePath(c.s, c.gamma, c.T))
        errs.append(np.abs(fd.Tp - c.Tp).max())
    assert errs[0] / errs[1] > 12


def test_regularity_reports():
    r = regularity_report(get_preset("line").curve(64))
    assert r.is_regular and not r.is_2_regular
    r = regularity_report(get_preset("helix4d").curve(256))
    assert r.is_2_regular and r.frenet_rank_ok
    r = regularity_report(get_preset("noF").curve(512))
    assert r.is_2_regular
    r = regularity_report(get_preset("circle").curve(256))
    assert r.is_2_regular and not r.frenet_rank_ok


def test_curve_from_tangent_line():
    c = curve_from_tangent(lambda s: np.tile([1.0, 0, 0, 0], (len(s), 1)), (0.0, 3.0), 31)
    assert np.abs(c.gamma[:, 0] - c.s).max() < 1e-14
    assert np.abs(c.gamma[:, 1:]).max() == 0


def test_curve_from_tangent_matches_exp_c_closed_form():
    p = get_preset("expC")
    c = p.curve(4096)
    assert np.abs(c.gamma - exp_c_closed_form(c.s)).max() < 1e-7


def test_no_f_halves_lie_in_hyperplanes():
    c = get_preset("noF").curve()
    assert np.abs(c.gamma[c.s >= 0, 2]).max() <= 1e-9
    assert np.abs(c.gamma[c.s <= 0, 1]).max() <= 1e-9
    assert np.array_equal(no_f_tangent(np.array([0.0]))[0], [0, 0, 0, -1])


def test_curve_from_tangent_rejects_non_unit():
    with pytest.raises(NotUnit):
        curve_from_tangent(lambda s: np.tile([1.1, 0, 0, 0], (len(s), 1)), (0.0, 1.0), 32)


@pytest.mark.parametrize("name", ["circle", "helix4d", "expC"])
def test_reconstruction_round_trip(name):
    c = get_preset(name).curve(512)
    spline = CubicSpline(c.s, c.T)

    def T_field(s):
        v = spline(s)
        return v / np.linalg.norm(v, axis=1)[:, None]
    r = curve_from_tangent(T_field, (c.s[0], c.s[-1]), len(c.s), origin=c.gamma[0])
    assert np.abs(r.gamma - c.gamma).max() < 1e-6


def test_grid_size():
    assert grid_size((0, 1), 16) == 17
    assert grid_size((0, 0.001), 16) == 16


def test_curvepath_validation():
    with pytest.raises(ValueError):
        CurvePath(np.array([0.0, 0.0, 1.0]), np.zeros((3, 4)), np.zeros((3, 4)))
    with pytest.raises(ValueError):
        CurvePath(np.arange(3.0), np.zeros((3, 3)), np.zeros((3, 4)))
