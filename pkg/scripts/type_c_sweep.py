"""Empirical type-C sweep over rotation directions for the bump presets.

For each Bishop system, every direction of a Fibonacci grid (plus the axes)
is tried; the best type-C residual is reported. --out writes per-direction
results as CSV.
"""
import argparse
import time

import numpy as np

from frame4 import io
from frame4.gallery import BUMP_NO_C, BUMP_YES_C, empirical_type_c_sweep

OUTCOMES = {"ok": 0, "AvoidanceFailed": 1, "ResolutionError": 2}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid-q", type=int, default=4096)
    ap.add_argument("--grid-n", type=int, default=512)
    ap.add_argument("--out", help="CSV prefix for per-direction results")
    args = ap.parse_args()
    for name, system in (("bumpYesC", BUMP_YES_C), ("bumpNoC", BUMP_NO_C)):
        t0 = time.perf_counter()
        rep = empirical_type_c_sweep(system, grid_Q=args.grid_q, grid_n=args.grid_n)
        res = np.array([e.residual for e in rep.entries])
        print(f"{name:9s} directions {len(res)}  avoiding {rep.avoidance_count}  "
              f"best {rep.best_residual:.3e} at xi = {np.round(rep.best_xi, 6)}  "
              f"median {np.median(res):.3e}  success {rep.success}  "
              f"({time.perf_counter() - t0:.1f} s)")
        if args.out:
            rows = [[*e.xi, float(e.avoidance_ok), OUTCOMES[e.outcome], e.residual]
                    for e in rep.entries]
            path = f"{args.out}_{name}.csv"
            io.write_table(path, ["xi1", "xi2", "xi3", "avoids", "outcome", "residual"], rows)
            print("wrote", path)


if __name__ == "__main__":
    main()
