"""Build frames of every type on helix4d and random 2-regular curves.

Prints the pattern residual of each constructed frame (B, C, D and, when
the Frenet frame exists, F).
"""
import argparse

import numpy as np

from frame4.construct import frenet_type_f, rmf_agreement, rmf_bishop, type_d_construct
from frame4.convert import type_c_pipeline
from frame4.errors import RankDeficient
from frame4.frames import verify_frame
from frame4.gallery import get_preset
from frame4.synthetic import random_curve


def residuals(curve):
    out = {"B": rmf_bishop(curve), "C": type_c_pipeline(curve).frame,
           "D": type_d_construct(curve)}
    try:
        out["F"] = frenet_type_f(curve)
    except RankDeficient:
        pass
    return {t: verify_frame(fr, curve, t).residual(t) for t, fr in out.items()}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--curves", type=int, default=20)
    ap.add_argument("--seed", type=int, default=5)
    ap.add_argument("--grid-n", type=int, default=2048)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    curves = [("helix4d", get_preset("helix4d").curve(args.grid_n))]
    curves += [(f"random{k:02d}", random_curve(rng, grid_n=args.grid_n))
               for k in range(args.curves)]
    print(f"{'curve':10s} {'length':>7s} {'B':>9s} {'C':>9s} {'D':>9s} {'F':>9s} {'rmf_gap':>9s}")
    for name, c in curves:
        r = residuals(c)
        cells = " ".join(f"{r[t]:9.2e}" if t in r else f"{'-':>9s}" for t in "BCDF")
        print(f"{name:10s} {c.s[-1] - c.s[0]:7.3f} {cells} {rmf_agreement(c):9.2e}")


if __name__ == "__main__":
    main()
