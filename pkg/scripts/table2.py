"""Recompute the growth and limit-law constants for the built-in classes.

    python scripts/table2.py                 # every class with known T
    python scripts/table2.py ex-k4 planar
"""
import argparse
import time

import mpmath

from closedgraphs.laws import law_report
from closedgraphs.tclass import builtin

CLASSES = ["ex-k4", "ex-w4", "ex-k5e", "ex-k5e-table", "planar", "ex-k33", "ex-k33plus"]
COLUMNS = ["rho_inv", "R_inv", "kappa", "kappa2", "beta", "delta", "p"]


def row(name):
    t0 = time.perf_counter()
    r = law_report(builtin(name))
    vals = [r.rho_inv, r.R_inv, r.kappa, r.kappa2, r.blocks[0], r.cuts[0], r.p]
    return vals, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("classes", nargs="*", default=CLASSES)
    ap.add_argument("--digits", type=int, default=8)
    args = ap.parse_args()
    mpmath.mp.dps = 30
    print("\t".join(["class"] + COLUMNS + ["seconds"]))
    for name in args.classes:
        vals, secs = row(name)
        print("\t".join([name] + [mpmath.nstr(v, args.digits) for v in vals] + [f"{secs:.1f}"]), flush=True)


if __name__ == "__main__":
    main()
