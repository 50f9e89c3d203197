import numpy as np
import pytest

from frame4.construct import frenet_type_f, hyperplane_frame, rmf_bishop, type_d_construct
from frame4.convert import type_c_pipeline
from frame4.errors import AdmissibilityError, SideDegenerate, UnknownPreset
from frame4.frames import verify_frame
from frame4.gallery import (BUMP_NO_C, BUMP_YES_C, EXP_C_MATRIX, PRESETS, constant_bishop,
                            detect_type_d_obstruction, detect_type_f_obstruction,
                            empirical_type_c_sweep, exp_c_closed_form, get_preset,
                            preset_names)
from frame4.patterns import CANONICAL, classify_pattern

from oracles import angle, EXP_C_GAMMA

GRID = 1024

# how each admitted type is realized; degenerate curves reuse a frame whose
# coefficient matrix has vanishing channels
ROUTES = {
    "B": {"*": rmf_bishop},
    "C": {"line": hyperplane_frame, "circle": hyperplane_frame,
          "gammaNoD": hyperplane_frame, "*": lambda c: type_c_pipeline(c).frame},
    "D": {"line": rmf_bishop, "*": type_d_construct},
    "F": {"line": rmf_bishop, "circle": rmf_bishop, "*": frenet_type_f},
}


@pytest.fixture(scope="module")
def curves():
    return {name: get_preset(name).curve(GRID) for name in PRESETS}


def test_catalog_names():
    assert preset_names() == ["line", "circle", "helix4d", "expC", "gammaNoD", "noF",
                              "bumpNoC", "bumpYesC"]
    with pytest.raises(UnknownPreset):
        get_preset("spiral")


def test_expected_tables():
    table = {n: "".join("+" if p.expected[t] == "admits" else "-" for t in "BCDF")
             for n, p in PRESETS.items()}
    assert table == {"line": "++++", "circle": "++++", "helix4d": "++++", "expC": "++++",
                     "gammaNoD": "++--", "noF": "+++-", "bumpNoC": "+---",
                     "bumpYesC": "++--"}


ADMITTED = [(n, t) for n, p in PRESETS.items() for t in "BCDF"
            if p.expected[t] == "admits" and not (n == "bumpYesC" and t == "C")]


@pytest.mark.parametrize("name,frame_type", ADMITTED)
def test_admitted_types_are_constructed(curves, name, frame_type):
    route = ROUTES[frame_type].get(name, ROUTES[frame_type]["*"])
    curve = curves[name]
    rep = verify_frame(route(curve), curve, frame_type, tol=1e-5)
    assert rep.passed, rep.lines()


FAILED = [(n, t) for n, p in PRESETS.items() for t in "DF" if p.expected[t] == "fails"]


@pytest.mark.parametrize("name,frame_type", FAILED)
def test_constructors_refuse_failing_types(curves, name, frame_type):
    build = type_d_construct if frame_type == "D" else frenet_type_f
    with pytest.raises(AdmissibilityError):
        build(curves[name])


def test_degenerate_presets_flagged(curves):
    for name in ("line", "circle"):
        assert verify_frame(rmf_bishop(curves[name])).degenerate
    assert not verify_frame(rmf_bishop(curves["helix4d"])).degenerate


def test_exp_c_closed_form_matches_symbolic():
    s = np.linspace(0, 4, 9)
    import sympy as sp
    sym = sp.lambdify(sp.symbols("s", real=True), EXP_C_GAMMA, "numpy")
    want = np.array([np.ravel(sym(v)) for v in s])
    assert np.abs(exp_c_closed_form(s) - want).max() <= 1e-14


def test_exp_c_preset(curves):
    c = curves["expC"]
    assert np.abs(c.gamma - exp_c_closed_form(c.s)).max() <= 1e-7
    coeffs = get_preset("expC").coefficients(64)
    assert coeffs.pattern == CANONICAL["C"] and np.allclose(coeffs.X[0], EXP_C_MATRIX)
    assert classify_pattern(coeffs.X).unique_type == "C"


def test_gamma_no_d_obstruction(curves):
    ob = detect_type_d_obstruction(curves["gammaNoD"], 0.0)
    assert ob.obstruction and abs(ob.angle - np.pi / 2) <= 1e-3
    # the one-sided limits are the y and z axes
    assert angle(ob.right, np.array([0, 1, 0, 0])) <= 1e-3
    assert angle(ob.left, np.array([0, 0, 1, 0])) <= 1e-3


def test_no_f_passes_d_detector_fails_f(curves):
    assert not detect_type_d_obstruction(curves["noF"], 0.0).obstruction
    ob = detect_type_f_obstruction(curves["noF"], 0.0)
    assert ob.split and ob.obstruction
    assert (ob.left_rank, ob.right_rank, ob.intersection_dim) == (3, 3, 2)


def test_f_detector_on_smooth_curves(curves):
    assert detect_type_f_obstruction(curves["helix4d"], 1.0).note == "no two-sided split"
    ob = detect_type_f_obstruction(curves["circle"], 1.0)
    assert ob.intersection_dim == 2 and not ob.obstruction


def test_d_detector_needs_curvature_on_both_sides(curves):
    with pytest.raises(SideDegenerate):
        detect_type_d_obstruction(curves["line"], 1.0)


def test_bump_curvatures_are_flat_at_junctions():
    s = np.array([-1e-3, -1e-6, 0.0, 1e-6, 1e-3, 1.0, 2.0])
    for system in (BUMP_NO_C, BUMP_YES_C):
        b = system.values(s)
        assert np.all(np.isfinite(b))
        assert np.abs(b[1:4]).max() == 0.0
        assert np.abs(system.derivatives(s)[1:4]).max() == 0.0
    # unit directions survive where magnitudes underflow
    d = BUMP_NO_C.directions(np.array([-1e-2, 0.5, 1.5]))
    assert np.allclose(np.linalg.norm(d, axis=1), 1.0)


def test_bishop_system_reproduces_curvatures():
    s = np.linspace(-1, 3, 2049)
    curve, frame = BUMP_YES_C.curve(s)
    X = verify_frame(frame, curve, "B")
    assert X.passed
    from frame4.construct import bishop_curvatures
    assert np.abs(bishop_curvatures(frame, curve) - BUMP_YES_C.values(s)).max() <= 1e-6


def test_sweep_constant_curvatures_always_succeeds():
    rep = empirical_type_c_sweep(constant_bishop([1.0, 0.5, -0.3], (0.0, 1.0)), grid_Q=64)
    assert rep.success and rep.best_residual <= 1e-8
    assert sum(e.residual <= 1e-5 for e in rep.entries) >= 0.9 * len(rep.entries)


def test_bump_sweeps(bump_sweeps):
    yes, no = bump_sweeps["bumpYesC"], bump_sweeps["bumpNoC"]
    assert yes.success and yes.best_residual <= 1e-5
    assert not no.success and no.best_residual >= 1e-2
    assert len(no.entries) == 4096 + 3
