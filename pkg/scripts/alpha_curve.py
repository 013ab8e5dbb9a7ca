"""Largest-block fraction alpha against edge density mu for planar graphs.

The edge weight y is swept on a log grid; each point reports mu(y), the
Airy parameters (alpha, c) of the largest block and the 3-core fraction.
Each mu costs a y-stencil, so expect about a minute per point.
"""
import argparse

import mpmath

from closedgraphs.extremal import critical_core
from closedgraphs.laws import density_at
from closedgraphs.singular import analyse
from closedgraphs.tclass import builtin


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--class", dest="name", default="planar")
    ap.add_argument("--ymin", default="0.01")
    ap.add_argument("--ymax", default="100")
    ap.add_argument("--points", type=int, default=9)
    args = ap.parse_args()
    mpmath.mp.dps = 30
    spec = builtin(args.name)
    lo, hi = mpmath.log10(mpmath.mpf(args.ymin)), mpmath.log10(mpmath.mpf(args.ymax))
    print("y\tcase\tmu\talpha\tc")
    for k in range(args.points):
        y = 10 ** (lo + (hi - lo) * k / max(args.points - 1, 1))
        rep = analyse(spec, y)
        law = critical_core(spec, rep)
        mu, _ = density_at(spec, y, "R", rep.source)
        print("\t".join([mpmath.nstr(y, 6), rep.case, mpmath.nstr(mu, 8),
                         mpmath.nstr(law.airy.a, 8), mpmath.nstr(law.airy.c, 8)]), flush=True)


if __name__ == "__main__":
    main()
