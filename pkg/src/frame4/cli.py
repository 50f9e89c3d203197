"""frame4 command-line interface.

Exit status: 0 success, 2 admissibility failure (the curve does not support
the requested frame), 1 any other error. Failures print the error class.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import io
from .construct import (bishop_curvatures, frenet_type_f, rmf_bishop, rotate_bishop,
                        type_d_construct)
from .convert import (find_avoided_direction, fd_transform, type_c_from_bishop,
                      type_c_pipeline, type_d_from_f)
from .curves import curve_from_tangent, grid_size
from .errors import Frame4Error
from .frames import (PATTERN_TOL, CoefficientPath, extract_coefficients, integrate_frame,
                     verify_frame)
from .gallery import default_grid_n, get_preset, PRESETS
from .linalg import mat_exp, rotation_to_e2, skew_from_upper
from .patterns import CANONICAL, CATALOG, TYPES, classify_pattern


@dataclass
class RunConfig:
    command: str
    preset: Optional[str] = None
    input: Optional[str] = None
    frame_type: Optional[str] = None
    source: Optional[str] = None
    target: Optional[str] = None
    eps: int = 1
    kappa: int = 1
    sign1: int = 1
    sign3: int = 1
    grid_n: Optional[int] = None
    tol: float = PATTERN_TOL
    output: Optional[str] = None
    format: str = "csv"
    constant: Sequence[float] = ()
    domain: Sequence[float] = (0.0, 4.0)
    frame: Optional[str] = None
    coeffs: Optional[str] = None
    curve: Optional[str] = None
    action: Optional[str] = None
    name: Optional[str] = None
    rotate: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.grid_n is not None and self.grid_n < 16:
            raise ValueError("grid_n must be at least 16")


def _load_curve(cfg):
    if cfg.preset:
        return get_preset(cfg.preset).curve(cfg.grid_n), cfg.preset
    if cfg.input:
        return io.read_curve(cfg.input, cfg.grid_n), cfg.input
    raise ValueError("give --preset or --input")


def _out(cfg, stem):
    prefix = cfg.output or (cfg.preset or cfg.command)
    return f"{prefix}_{stem}.{cfg.format}"


def _meta(cfg, **extra):
    meta = {"command": cfg.command, "preset": cfg.preset, "input": cfg.input,
            "tol": cfg.tol, "signs": {"eps": cfg.eps, "kappa": cfg.kappa,
                                      "sign1": cfg.sign1, "sign3": cfg.sign3}}
    meta.update(extra)
    return meta


def _best_pattern(X, frame_type=None):
    ids = CATALOG.ids_of_type(frame_type) if frame_type else range(len(CATALOG))
    return min(ids, key=lambda k: CATALOG.residual(X, k))


def _write_outputs(cfg, frame, coeffs, curve=None, **meta):
    written = []
    md = _meta(cfg, **meta)
    if curve is not None:
        p = _out(cfg, "curve")
        io.write_curve(p, curve, cfg.format, md)
        written.append(p)
    p = _out(cfg, "frame")
    io.write_frame(p, frame, cfg.format, md)
    written.append(p)
    p = _out(cfg, "coeffs")
    io.write_coefficients(p, coeffs, cfg.format, md)
    written.append(p)
    for w in written:
        print(f"wrote {w}")


def _report(frame, curve, expected, tol):
    rep = verify_frame(frame, curve, expected, tol)
    print("verify:")
    for line in rep.lines():
        print(f"  {line}")
    return rep


def _extracted(frame, frame_type):
    X = extract_coefficients(frame).X
    k = _best_pattern(X, frame_type)
    # declared pattern must hold to PATTERN_TOL; otherwise leave the raw fit
    if CATALOG.residual(X, k) <= PATTERN_TOL:
        return CoefficientPath(frame.s, X, k)
    return CoefficientPath(frame.s, CATALOG.assemble(CATALOG.channels(X, k), k), k)


def cmd_frame(cfg):
    curve, _ = _load_curve(cfg)
    t = cfg.frame_type
    extra = {}
    if t == "B":
        frame = rmf_bishop(curve)
    elif t == "C":
        pipe = type_c_pipeline(curve, cfg.sign1, cfg.sign3)
        frame = pipe.frame
        extra = {"xi": pipe.xi.tolist(), "margin": pipe.margin}
        print(f"avoided direction {' '.join(io._fmt(v) for v in pipe.xi)} "
              f"margin {io._fmt(pipe.margin)}")
    elif t == "D":
        frame = type_d_construct(curve)
    else:
        frame = frenet_type_f(curve)
    coeffs = _extracted(frame, t)
    _write_outputs(cfg, frame, coeffs, curve, frame_type=t, **extra)
    rep = _report(frame, curve, t, cfg.tol)
    return 0 if rep.passed else 1


def cmd_convert(cfg):
    curve, _ = _load_curve(cfg)
    pair = (cfg.source, cfg.target)
    if pair == ("F", "D"):
        F = frenet_type_f(curve)
        f = extract_coefficients(F).declare(CANONICAL["F"])
        d = type_d_from_f(f, cfg.eps, cfg.kappa)
        G0 = fd_transform(f, cfg.eps, cfg.kappa).G[0]
        frame = integrate_frame(d, G0 @ F.Z[0])
        coeffs = d
    elif pair == ("B", "C"):
        B = rmf_bishop(curve)
        b = bishop_curvatures(B, curve)
        if cfg.rotate:
            xi, margin = find_avoided_direction(b)
            Q = rotation_to_e2(xi)
            B = rotate_bishop(B, Q)
            b = b @ Q.T
            print(f"avoided direction {' '.join(io._fmt(v) for v in xi)} "
                  f"margin {io._fmt(margin)}")
        res = type_c_from_bishop(B, b, cfg.sign1, cfg.sign3)
        frame, coeffs = res.frame, res.coeffs
    else:
        raise ValueError("supported conversions: --from F --to D, --from B --to C")
    _write_outputs(cfg, frame, coeffs, curve, conversion=f"{pair[0]}->{pair[1]}")
    rep = _report(frame, curve, pair[1], max(cfg.tol, 1e-5) if pair[1] == "D" else cfg.tol)
    return 0 if rep.passed else 1


def cmd_classify(cfg):
    if cfg.coeffs:
        X = io.read_coefficients(cfg.coeffs).X
    elif cfg.frame:
        X = extract_coefficients(io.read_frame(cfg.frame)).X
    else:
        raise ValueError("give --coeffs or --frame")
    cl = classify_pattern(X, cfg.tol)
    print("pattern_id type permutation residual")
    for m in cl.matches:
        print(f"{m.pattern_id} {m.frame_type} {''.join(map(str, m.permutation))} "
              f"{io._fmt(m.residual)}")
    print("best residual per type: " + " ".join(
        f"{t}={io._fmt(cl.best_residual[t])}" for t in TYPES))
    print(f"degenerate {cl.degenerate}")
    print(f"unique type {cl.unique_type or '-'}")
    return 0


def cmd_verify(cfg):
    if not cfg.frame:
        raise ValueError("give --frame")
    frame = io.read_frame(cfg.frame)
    curve = None
    if cfg.curve:
        curve = io.read_curve(cfg.curve)
    elif cfg.preset:
        curve = get_preset(cfg.preset).curve(cfg.grid_n)
    if curve is not None and len(curve) != len(frame):
        raise ValueError("curve and frame grids differ")
    rep = _report(frame, curve, cfg.frame_type, cfg.tol)
    return 0 if rep.passed in (None, True) else 1


def cmd_generate(cfg):
    if len(cfg.constant) != 6:
        raise ValueError("--constant takes six reals x01 x02 x03 x12 x13 x23")
    X = skew_from_upper(np.asarray(cfg.constant, dtype=float))
    a, b = map(float, cfg.domain)
    n = grid_size((a, b), cfg.grid_n or default_grid_n())
    s = np.linspace(a, b, n)
    coeffs_c = CoefficientPath.from_constant(X, s)
    frame = integrate_frame(coeffs_c, np.eye(4))

    def tangent(t):
        return mat_exp(X, np.asarray(t) - a)[:, 0, :]

    def derivs(t):
        E = mat_exp(X, np.asarray(t) - a)
        return (X @ E)[:, 0, :], (X @ X @ E)[:, 0, :]

    curve = curve_from_tangent(tangent, (a, b), n, np.zeros(4), derivs)
    k = _best_pattern(coeffs_c.X)
    coeffs = coeffs_c
    if CATALOG.residual(coeffs_c.X, k) == 0.0:
        coeffs = coeffs_c.declare(k)
        print(f"pattern {k} (type {CATALOG.type_of[k]})")
    else:
        print("X has more than three nonzero entries: not a generalized Bishop frame")
        coeffs = CoefficientPath(s, CATALOG.assemble(CATALOG.channels(coeffs_c.X, k), k), k)
    _write_outputs(cfg, frame, coeffs, curve, constant=list(map(float, cfg.constant)))
    _report(frame, curve, None, cfg.tol)
    return 0


def cmd_gallery(cfg):
    if cfg.action == "list":
        for name, p in PRESETS.items():
            exp = " ".join(f"{t}:{p.expected[t]}" for t in TYPES)
            print(f"{name:10s} [{p.domain[0]:g}, {p.domain[1]:g}] {exp}  {p.description}")
        return 0
    p = get_preset(cfg.name)
    cfg.preset = p.name
    curve = p.curve(cfg.grid_n)
    md = _meta(cfg, description=p.description, expected=p.expected)
    path = _out(cfg, "curve")
    io.write_curve(path, curve, cfg.format, md)
    print(f"wrote {path}")
    coeffs = p.coefficients(cfg.grid_n)
    if coeffs is not None:
        path = _out(cfg, "coeffs")
        io.write_coefficients(path, coeffs, cfg.format, md)
        print(f"wrote {path}")
    return 0


COMMANDS = {"frame": cmd_frame, "convert": cmd_convert, "classify": cmd_classify,
            "verify": cmd_verify, "generate": cmd_generate, "gallery": cmd_gallery}


def run(cfg: RunConfig) -> int:
    try:
        return COMMANDS[cfg.command](cfg)
    except Frame4Error as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except (OSError, ValueError) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1


def _sign(text):
    v = int(text)
    if v not in (1, -1):
        raise argparse.ArgumentTypeError("sign must be 1 or -1")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="frame4", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, source=True):
        if source:
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--preset", help="gallery preset name")
            g.add_argument("--input", help="curve table (CSV/JSON)")
        sp.add_argument("--grid-n", type=int, default=None,
                        help="samples per unit length (env FRAME4_GRID_N)")
        sp.add_argument("--tol", type=float, default=PATTERN_TOL)
        sp.add_argument("--output", help="output file prefix")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    def signs(sp):
        for name in ("eps", "kappa", "sign1", "sign3"):
            sp.add_argument(f"--{name}", type=_sign, default=1)

    sp = sub.add_parser("frame", help="construct a frame of a given type")
    common(sp)
    sp.add_argument("--type", dest="frame_type", choices=TYPES, required=True)
    signs(sp)

    sp = sub.add_parser("convert", help="F->D or B->C conversion")
    common(sp)
    sp.add_argument("--from", dest="source", choices=("F", "B"), required=True)
    sp.add_argument("--to", dest="target", choices=("D", "C"), required=True)
    sp.add_argument("--rotate", action="store_true",
                    help="B->C: first rotate the Bishop frame by an avoided direction")
    signs(sp)

    sp = sub.add_parser("classify", help="match coefficients against all patterns")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--coeffs")
    g.add_argument("--frame")
    sp.add_argument("--tol", type=float, default=PATTERN_TOL)

    sp = sub.add_parser("verify", help="check a frame file")
    sp.add_argument("--frame", required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--preset", help="gallery preset name")
    g.add_argument("--curve")
    sp.add_argument("--type", dest="frame_type", choices=TYPES)
    sp.add_argument("--grid-n", type=int, default=None)
    sp.add_argument("--tol", type=float, default=PATTERN_TOL)

    sp = sub.add_parser("generate", help="frame exp(sX) for a constant X")
    sp.add_argument("--constant", type=float, nargs=6, required=True,
                    metavar=("X01", "X02", "X03", "X12", "X13", "X23"))
    sp.add_argument("--domain", type=float, nargs=2, default=(0.0, 4.0))
    common(sp, source=False)

    sp = sub.add_parser("gallery", help="list or export presets")
    gsub = sp.add_subparsers(dest="action", required=True)
    gsub.add_parser("list")
    ex = gsub.add_parser("export")
    ex.add_argument("name")
    common(ex, source=False)
    return p


def config_from_args(ns) -> RunConfig:
    known = set(RunConfig.__dataclass_fields__)
    kw = {k: v for k, v in vars(ns).items() if k in known and v is not None}
    return RunConfig(**kw)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
