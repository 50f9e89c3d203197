import numpy as np
import pytest
from hypothesis import given, strategies as st

from frame4 import _grid
from frame4.frames import (CoefficientPath, FramePath, TransformPath, extract_coefficients,
                           integrate_frame, skew_defect, solve_transform, verify_frame)
from frame4.gallery import EXP_C_MATRIX
from frame4.linalg import orthonormality_defect
from frame4.patterns import CANONICAL, CATALOG
from frame4.synthetic import smooth_coefficients

from conftest import random_skew
from oracles import polar_orthogonal, taylor_exp


def test_zero_coefficients_keep_frame():
    s = np.linspace(0, 1, 33)
    Z0 = polar_orthogonal(np.eye(4) + 0.3 * np.arange(16).reshape(4, 4) / 16)
    Z = integrate_frame(CoefficientPath(s, np.zeros((33, 4, 4))), Z0).Z
    assert np.abs(Z - Z0).max() <= 1e-14


def test_constant_matrix_uses_exact_exponential():
    s = np.linspace(0, 4, 4 * 512 + 1)
    Z = integrate_frame(CoefficientPath.from_constant(EXP_C_MATRIX, s), np.eye(4)).Z
    for k in (0, 700, 2048):
        # oracle: power series of exp(s X) in pieces of 1/8
        step = taylor_exp(s[k] / 8 * EXP_C_MATRIX)
        assert np.abs(Z[k] - np.linalg.matrix_power(step, 8)).max() <= 1e-9


def test_rk4_path_matches_exponential_for_constant_matrix():
    s = np.linspace(0, 4, 2049)
    X = CoefficientPath(s, np.broadcast_to(EXP_C_MATRIX, (2049, 4, 4)))
    exact = integrate_frame(CoefficientPath.from_constant(EXP_C_MATRIX, s), np.eye(4)).Z
    assert np.abs(integrate_frame(X, np.eye(4)).Z - exact).max() <= 1e-9


def _error(rng_seed, n):
    rng = np.random.default_rng(rng_seed)
    s_ref = np.linspace(0, 2, 6401)
    ref = integrate_frame(smooth_coefficients(rng, s_ref), np.eye(4)).Z[-1]
    rng = np.random.default_rng(rng_seed)
    s = np.linspace(0, 2, n + 1)
    return np.abs(integrate_frame(smooth_coefficients(rng, s), np.eye(4)).Z[-1] - ref).max()


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_step_halving_contracts_fourth_order(seed):
    e1, e2, e3 = (_error(seed, n) for n in (25, 50, 100))
    assert e1 / e2 >= 12 and e2 / e3 >= 12


def test_extract_recovers_coefficients(rng):
    s = np.linspace(0, 2, 1025)
    X = smooth_coefficients(rng, s)
    frame = integrate_frame(X, np.eye(4))
    assert np.abs(extract_coefficients(frame).X - X.X).max() <= 1e-7


def test_declared_pattern_is_checked():
    s = np.linspace(0, 1, 5)
    X = CATALOG.assemble(np.ones((5, 3)), CANONICAL["F"])
    with pytest.raises(ValueError):
        CoefficientPath(s, X, CANONICAL["B"])
    assert CoefficientPath(s, X, CANONICAL["F"]).frame_type == "F"


def test_frame_path_rejects_non_orthonormal():
    with pytest.raises(ValueError):
        FramePath(np.zeros(1), 2 * np.eye(4)[None])
    with pytest.raises(ValueError):
        FramePath(np.zeros(1), np.eye(4)[None], "E")


def test_skew_defect_sees_a_jump():
    s = np.linspace(0, 1, 101)
    Z = np.broadcast_to(np.eye(4), (101, 4, 4)).copy()
    Z[50:, 2:] = -Z[50:, 2:]
    assert skew_defect(FramePath(s, Z)) > 1.0
    assert skew_defect(FramePath(s, np.broadcast_to(np.eye(4), (101, 4, 4)))) <= 1e-12


def _transport_defect(rng, n=1025):
    s = np.linspace(0, 1, n)
    X0, X1 = smooth_coefficients(rng, s), smooth_coefficients(rng, s)
    Z0 = integrate_frame(X0, polar_orthogonal(np.eye(4) + 0.2 * random_skew(rng))).Z
    G0 = polar_orthogonal(np.eye(4) + 0.2 * random_skew(rng))
    G = solve_transform(X0, X1, G0)
    Z1 = G.G @ Z0
    return np.abs(_grid.diff(Z1, s) - X1.X @ Z1).max(), orthonormality_defect(Z1)


def test_transform_carries_frame_equation(rng):
    d, orth = _transport_defect(rng)
    assert d <= 1e-6 and orth <= 1e-8


def test_transform_agrees_with_direct_integration(rng):
    s = np.linspace(0, 1, 513)
    X0, X1 = smooth_coefficients(rng, s), smooth_coefficients(rng, s)
    Z0 = integrate_frame(X0, np.eye(4)).Z
    G = solve_transform(X0, X1, np.eye(4))
    Z1 = integrate_frame(X1, np.eye(4)).Z
    assert np.abs(G.G @ Z0 - Z1).max() <= 1e-9


def test_transform_path_properties():
    s = np.linspace(0, 1, 3)
    G = np.broadcast_to(np.diag([1.0, -1, 1, 1]), (3, 4, 4))
    t = TransformPath(s, G)
    assert t.fixes_tangent()
    assert not TransformPath(s, np.broadcast_to(np.eye(4)[[1, 0, 2, 3]], (3, 4, 4))).fixes_tangent()
    with pytest.raises(ValueError):
        TransformPath(s, 2 * G)


def test_verify_frame_report():
    s = np.linspace(0, 4, 2049)
    frame = integrate_frame(CoefficientPath.from_constant(EXP_C_MATRIX, s), np.eye(4))
    rep = verify_frame(frame, expected="C")
    assert rep.passed and rep.residuals["C"] <= 1e-9
    assert rep.residuals["B"] > 0.5 and not rep.degenerate
    assert verify_frame(frame, expected="B").passed is False
    assert any(line.startswith("expected C") for line in rep.lines())


@given(st.integers(0, 2**31))
def test_frames_stay_orthonormal(seed):
    rng = np.random.default_rng(seed)
    s = np.linspace(0, 3, 257)
    frame = integrate_frame(smooth_coefficients(rng, s, scale=2.0), np.eye(4))
    assert orthonormality_defect(frame.Z) <= 1e-12
