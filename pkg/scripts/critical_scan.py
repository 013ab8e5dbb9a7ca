"""Scan a class along the edge weight y and locate critical values.

With no class file the synthetic 5/2 class is used, whose branch point meets
the singular line of T at y = 0.53217579998660...
"""
import argparse

import mpmath

from closedgraphs.extremal import scan_critical
from closedgraphs.tclass import parse_class, resolve

SYNTHETIC = """name = synthetic
T = x^4*(1 - 5*z/2 + 15*z^2/8 - (1-z)^(5/2))/10
singular { r = 1; exponent = 5/2 }
"""


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--spec", help="class file; defaults to the synthetic class")
    ap.add_argument("--ys", default="0.3,0.45,0.6,0.75", help="comma-separated y samples")
    args = ap.parse_args()
    mpmath.mp.dps = 30
    spec = resolve(args.spec) if args.spec else parse_class(SYNTHETIC)
    rows, crit = scan_critical(spec, [mpmath.mpf(y) for y in args.ys.split(",")])
    print("y\tcase\tsource\tS")
    for r in rows:
        print(f"{mpmath.nstr(r.y, 6)}\t{r.case}\t{r.source}\t{mpmath.nstr(r.S, 8)}")
    for cp in crit:
        print(f"critical ({cp.kind}): y0 = {mpmath.nstr(cp.y, 15)}, mu0 = {mpmath.nstr(cp.mu, 10)}")


if __name__ == "__main__":
    main()
