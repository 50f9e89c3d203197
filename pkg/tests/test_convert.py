import numpy as np
import pytest
from hypothesis import given, strategies as st

from frame4.construct import (bishop_curvatures, frenet_type_f, rmf_bishop, rotate_bishop,
                              type_d_construct)
from frame4.convert import (bridged_theta, fd_theta, fd_transform, fibonacci_sphere,
                            find_avoided_direction, sign_branch_table, smoothstep,
                            type_c_from_bishop, type_c_pipeline, type_d_from_f,
                            type_d_from_frenet, unwrap_angle)
from frame4.errors import AvoidanceFailed, Not2Regular, PatternMismatch, ResolutionError
from frame4.frames import (CoefficientPath, FramePath, extract_coefficients, integrate_frame,
                           solve_transform, verify_frame)
from frame4.gallery import get_preset
from frame4.patterns import CANONICAL, CATALOG
from frame4.synthetic import random_bishop_channels, smooth_coefficients

F, D, C = CANONICAL["F"], CANONICAL["D"], CANONICAL["C"]


@pytest.fixture(scope="module")
def helix():
    return get_preset("helix4d").curve(1024)


@pytest.fixture(scope="module")
def helix_frenet(helix):
    frame = frenet_type_f(helix)
    return frame, extract_coefficients(frame).declare(F)


def test_zero_torsion_gives_constant_angle():
    s = np.linspace(0, 1, 65)
    f = CoefficientPath.from_channels(s, np.column_stack([1 + s, 2 - s, 0 * s]), F)
    d = type_d_from_f(f).channels
    assert np.allclose(d, np.column_stack([1 + s, 2 - s, 0 * s]), atol=1e-15)
    assert np.allclose(fd_theta(f, theta0=0.7), 0.7)


@pytest.mark.parametrize("eps", [1, -1])
@pytest.mark.parametrize("kappa", [1, -1])
def test_sign_free_invariants(helix_frenet, eps, kappa):
    _, f = helix_frenet
    fc, dc = f.channels, type_d_from_f(f, eps, kappa).channels
    assert np.abs(dc[:, 0] ** 2 - fc[:, 0] ** 2).max() <= 1e-8
    assert np.abs(dc[:, 1] ** 2 + dc[:, 2] ** 2 - fc[:, 1] ** 2).max() <= 1e-8


@pytest.mark.parametrize("eps", [1, -1])
@pytest.mark.parametrize("kappa", [1, -1])
def test_both_third_channel_forms_agree(helix_frenet, eps, kappa):
    _, f = helix_frenet
    fc = f.channels
    integral = np.concatenate([[0], np.cumsum(0.5 * (fc[1:, 2] + fc[:-1, 2]) * np.diff(f.s))])
    alt = -kappa * fc[:, 1] * np.sin(integral)
    assert np.abs(type_d_from_f(f, eps, kappa).channels[:, 2] - alt).max() <= 1e-5


@pytest.mark.parametrize("eps", [1, -1])
@pytest.mark.parametrize("kappa", [1, -1])
def test_transformed_frenet_frame_is_type_d(helix, helix_frenet, eps, kappa):
    frame, f = helix_frenet
    Dframe, d = type_d_from_frenet(frame, f, eps, kappa)
    X = extract_coefficients(Dframe).X
    assert np.abs(X - d.X).max() <= 1e-7
    assert verify_frame(Dframe, helix, "D").passed


def test_wrong_angle_direction_is_not_type_d(helix_frenet):
    frame, f = helix_frenet
    G = fd_transform(f)
    wrong = fd_transform(f, theta0=0.0)
    th = -wrong.theta
    Gw = np.array(G.G)
    Gw[:, 2, 2], Gw[:, 2, 3] = np.cos(th), np.sin(th)
    Gw[:, 3, 2], Gw[:, 3, 3] = np.sin(th), -np.cos(th)
    bad = FramePath(frame.s, Gw @ frame.Z)
    assert verify_frame(bad).residuals["D"] > 0.1


def test_fd_transform_solves_transport_equation(helix_frenet):
    _, f = helix_frenet
    G = fd_transform(f, -1, 1, 0.4)
    d = type_d_from_f(f, -1, 1, 0.4)
    H = solve_transform(f, d, G.G[0])
    assert np.abs(H.G - G.G).max() <= 1e-8
    assert G.fixes_tangent()


def test_frenet_route_matches_direct_type_d(helix, helix_frenet):
    frame, f = helix_frenet
    routed, _ = type_d_from_frenet(frame, f)
    direct = type_d_construct(helix)
    assert np.abs(routed.Z[:, :2] - direct.Z[:, :2]).max() <= 1e-8
    # remaining rows differ by a constant orthogonal 2x2 block
    R = routed.Z[:, 2:] @ np.swapaxes(direct.Z[:, 2:], 1, 2)
    assert np.abs(R - R[0]).max() <= 1e-7


def test_non_type_f_input_rejected():
    s = np.linspace(0, 1, 9)
    with pytest.raises(PatternMismatch):
        type_d_from_f(CoefficientPath.from_channels(s, np.ones((9, 3)), C))
    with pytest.raises(ValueError):
        type_d_from_f(CoefficientPath.from_channels(s, np.ones((9, 3)), F), eps=2)


def test_avoided_direction_for_planar_b():
    # b sweeps the e1-e3 plane: the only avoided direction is +-e2
    t = np.linspace(0, np.pi, 200)
    b = np.column_stack([np.cos(t), 0 * t, np.sin(t)])
    xi, margin = find_avoided_direction(b)
    assert abs(abs(xi[1]) - 1) <= 1e-6 and margin >= 1 - 1e-6


def test_avoided_direction_for_dense_b():
    xi, margin = find_avoided_direction(fibonacci_sphere(20000))
    assert margin < 0.05
    with pytest.raises(Not2Regular):
        find_avoided_direction(np.zeros((3, 3)))


def test_fibonacci_sphere_is_unit():
    v = fibonacci_sphere(100)
    assert np.allclose(np.linalg.norm(v, axis=1), 1)
    assert abs(v.mean(axis=0)).max() < 0.02


def test_unwrap():
    phi = np.angle(np.exp(1j * np.linspace(0, 20, 400)))
    assert np.allclose(unwrap_angle(phi), np.linspace(0, 20, 400))
    with pytest.raises(ResolutionError):
        unwrap_angle(np.array([0.0, 2.0]))


def _closure_c3(b, h=1e-5):
    ch = lambda t: CATALOG.channels(b.fn(t), CANONICAL["B"])
    v, vp = ch(b.s), (ch(b.s + h) - ch(b.s - h)) / (2 * h)
    return (v[:, 0] * vp[:, 2] - v[:, 2] * vp[:, 0]) / (v[:, 0] ** 2 + v[:, 2] ** 2)


@given(st.integers(0, 2**31))
def test_type_c_round_trip(seed):
    rng = np.random.default_rng(seed)
    s = np.linspace(0, 2, 1025)
    b = random_bishop_channels(rng, s)
    B = integrate_frame(b, np.eye(4))
    res = type_c_from_bishop(B, b)
    X = extract_coefficients(res.frame).X
    got = CATALOG.channels(X, C)
    bc = b.channels
    assert np.abs(got[:, 0] - np.hypot(bc[:, 0], bc[:, 2])).max() <= 1e-5
    assert np.abs(got[:, 1] - bc[:, 1]).max() <= 1e-5
    assert np.abs(got[:, 2] - _closure_c3(b)).max() <= 1e-5
    assert CATALOG.residual(X, C) <= 1e-6


def test_sign_branches(rng):
    s = np.linspace(0, 2, 1025)
    b = random_bishop_channels(rng, s)
    rows = sign_branch_table(integrate_frame(b, np.eye(4)), b)
    assert {(r["sign1"], r["sign3"]) for r in rows if r["valid"]} == {(1, 1), (-1, -1)}
    assert max(r["pattern_residual"] for r in rows) <= 1e-6


def test_type_c_requires_avoidance():
    s = np.linspace(0, 1, 33)
    b = np.column_stack([np.ones(33), np.ones(33), np.zeros(33)])
    b[10] = [0, 1, 0]
    B = FramePath(s, np.broadcast_to(np.eye(4), (33, 4, 4)))
    with pytest.raises(AvoidanceFailed):
        type_c_from_bishop(B, b)


def test_pipeline_on_helix(helix):
    p = type_c_pipeline(helix)
    assert p.margin > 0.1
    rep = verify_frame(p.frame, helix, "C")
    assert rep.passed and rep.residuals["C"] <= 1e-7
    b_rot = bishop_curvatures(p.rotated, helix)
    assert np.abs(b_rot - p.b @ p.Q.T).max() <= 1e-9


def test_smoothstep():
    u = np.linspace(-1, 2, 301)
    v = smoothstep(u)
    assert v[0] == 0 and v[-1] == 1 and abs(smoothstep(0.5) - 0.5) < 1e-15
    assert np.all(np.diff(v) >= 0)


def test_bridged_theta_fills_gap():
    s = np.linspace(0, 3, 301)
    d = np.zeros((301, 3))
    d[:100] = [1, 0, 0]
    d[200:] = [0, 0, 1]
    d[100:200] = [0, 1, 0]
    theta, pinned = bridged_theta(s, d)
    assert pinned.sum() == 201
    assert np.allclose(theta[:100], 0) and np.allclose(theta[200:], np.pi / 2)
    assert np.all(np.diff(theta) >= 0)
