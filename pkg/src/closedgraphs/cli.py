"""Command line: constants, counts, classification, scans and Airy laws.

Exit codes: 0 ok, 2 usage or unknown class, 3 class needs external data,
4 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import mpmath

from . import extremal as X
from . import laws as L
from .network import ExactSystem, counts, formal_y
from .numerics import NumericError, set_precision
from .oracle import CLASS_MINORS, MAX_N, OracleError, oracle_counts
from .singular import SingularityError, analyse
from .tclass import ClassError, MissingDataError, resolve

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_CONDITIONAL, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(ValueError):
    pass


# ------------------------------------------------------------ output

def _num(v, digits):
    if v is None:
        return None
    if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        return int(v) if isinstance(v, int) or v.denominator == 1 else str(v)
    if isinstance(v, (mpmath.mpf, float)):
        if not mpmath.isfinite(v):
            return str(v)
        return float(mpmath.nstr(v, digits, strip_zeros=False))
    if isinstance(v, (list, tuple)):
        return [_num(a, digits) for a in v]
    if isinstance(v, dict):
        return {k: _num(a, digits) for k, a in v.items()}
    return v


def _emit(args, command, payload, rows=None, columns=None):
    if args.format == "json" or rows is None:
        doc = {"schema_version": SCHEMA_VERSION, "command": command}
        doc.update(_num(payload, args.digits))
        print(json.dumps(doc, indent=2, sort_keys=True))
        return
    sep = "\t" if args.format == "tsv" else "  "
    out = []
    if columns:
        out.append(sep.join(columns))
    for row in rows:
        out.append(sep.join(_cell(v, args.digits) for v in row))
    print("\n".join(out))


def _cell(v, digits):
    if isinstance(v, (mpmath.mpf, float)):
        return mpmath.nstr(v, digits)
    return "" if v is None else str(v)


def _spec(args):
    target = args.spec or args.cls
    if not target:
        raise UsageError("name a class or pass --spec <file>")
    return resolve(target)


def _y_range(text):
    try:
        a, b, n = text.split(":")
        a, b, n = mpmath.mpf(a), mpmath.mpf(b), int(n)
    except ValueError:
        raise UsageError("--y for scan takes start:stop:count") from None
    if not (0 < a < b and n >= 2):
        raise UsageError("scan range must satisfy 0 < start < stop and count >= 2")
    return [a * (b / a) ** (mpmath.mpf(k) / (n - 1)) for k in range(n)]


# ---------------------------------------------------------- commands

def cmd_constants(args):
    spec = _spec(args)
    r = L.law_report(spec, mpmath.mpf(args.y))
    payload = {
        "class": spec.name, "case": r.case, "y": r.y,
        "constants": {"rho_inv": r.rho_inv, "R_inv": r.R_inv, "kappa": r.kappa, "lambda": r.lam,
                      "kappa2": r.kappa2, "lambda2": r.lam2,
                      "beta": r.blocks[0], "beta_var": r.blocks[1],
                      "delta": r.cuts[0], "delta_var": r.cuts[1],
                      "nu": r.nu, "p": r.p, "missed_mean": r.missed_mean, "missed_var": r.missed_var},
        "source": r.sources,
    }
    rows = [(k, v) for k, v in payload["constants"].items()]
    _emit(args, "constants", payload, rows, ("constant", "value"))


def cmd_counts(args):
    spec = _spec(args)
    n = args.n if args.n is not None else 10
    if args.order is not None and n > args.order:
        raise UsageError("--n may not exceed --order")
    seq = counts(spec, n)
    payload = {"class": spec.name, "n_max": n, "g": seq["G"], "c": seq["C"], "b": seq["B"]}
    if args.with_edges:
        es = ExactSystem(spec, max(n, 2), formal_y(max(n * (n - 1) // 2, 1)))
        payload["edges"] = {}
        for key in ("G", "C", "B"):
            grid = es.bi(key).grid
            payload["edges"][key.lower()] = [
                [int(v * math.factorial(k)) for v in grid[k][: k * (k - 1) // 2 + 1]] for k in range(n + 1)]
    rows = [(k, seq["G"][k], seq["C"][k], seq["B"][k]) for k in range(n + 1)]
    _emit(args, "counts", payload, rows, ("n", "g", "c", "b"))


def cmd_classify(args):
    spec = _spec(args)
    rep = analyse(spec, mpmath.mpf(args.y))
    payload = {"class": spec.name, "y": rep.y, "case": rep.case, "source": rep.source,
               "R": rep.R, "D0": rep.D0, "rho": rep.rho, "tau": rep.tau, "S": rep.S,
               "B_exponent": str(rep.B_exponent), "C_exponent": str(rep.C_exponent),
               "B": rep.B, "C": rep.C, "notes": rep.notes}
    rows = [(k, payload[k]) for k in ("case", "source", "R", "D0", "rho", "tau", "S", "B_exponent", "C_exponent")]
    _emit(args, "classify", payload, rows, ("field", "value"))


def cmd_scan(args):
    spec = _spec(args)
    ys = _y_range(args.y if args.y != "1" else "0.1:10:50")
    rows, crit = X.scan_critical(spec, ys)
    payload = {"class": spec.name,
               "rows": [{"y": r.y, "case": r.case, "source": r.source, "gap": r.gap, "S": r.S} for r in rows],
               "critical": [{"y0": c.y, "kind": c.kind, "mu0": c.mu} for c in crit]}
    table = [(r.y, r.case, r.source) for r in rows]
    table += [(c.y, "critical", c.kind) for c in crit]
    _emit(args, "scan", payload, table, ("y", "case", "source"))


def _core_payload(law):
    if law.airy is not None:
        return {"kind": law.kind, "alpha": law.airy.a, "c": law.airy.c, "p_small": law.p_small,
                "alpha_from_H": law.alpha_H,
                "second_largest": "O(n^(2/3)), no constant available",
                "source": "alpha = (R - 2 B4)/R, c = (-2R/(15 B5))^(2/3)"}
    return {"kind": law.kind, "coreless": law.coreless, "tail_exponent": law.tail_exponent,
            "tail_ratio": law.tail_ratio, "tail_constant": law.tail_constant,
            "source": "q(u) = tau u B''(tau u), P(no core) = 1 - rho/tau"}


def cmd_block_law(args):
    spec = _spec(args)
    if args.mu is not None:
        point, law = X.block_law_at_density(spec, mpmath.mpf(args.mu))
        payload = {"class": spec.name, "mu": point.mu, "y0": point.y,
                   "near_boundary": point.near_boundary, "law": _core_payload(law)}
    else:
        rep = analyse(spec, mpmath.mpf(args.y))
        law = (X.critical_core(spec, rep) if L.c_mode(rep) == "R" else X.subcritical_core(spec, rep))
        payload = {"class": spec.name, "y": rep.y, "case": rep.case, "law": _core_payload(law)}
    rows = [(k, v) for k, v in payload["law"].items()]
    _emit(args, "block-law", payload, rows, ("field", "value"))


def cmd_airy(args):
    if args.compose:
        a1, c1, a2, c2 = (mpmath.mpf(v) for v in args.compose)
        p = X.airy_compose(X.AiryParams(a1, c1), X.AiryParams(a2, c2))
        _emit(args, "airy", {"a": p.a, "c": p.c})
        return
    start, stop, step = (mpmath.mpf(v) for v in (args.start, args.stop, args.step))
    if not (step > 0 and stop > start):
        raise UsageError("airy needs --from < --to and a positive --step")
    table = X.airy_table(start, stop, step)
    fmt = args.format if args.format != "json" else "tsv"
    if args.format == "json":
        _emit(args, "airy", {"x": [r[0] for r in table], "g": [r[1] for r in table]})
        return
    args.format = fmt
    _emit(args, "airy", {}, table, ("x", "g"))


def cmd_oracle(args):
    name = args.cls or ""
    if name not in CLASS_MINORS:
        raise UsageError(f"oracle knows {', '.join(CLASS_MINORS)}")
    n = args.n if args.n is not None else 5
    if n > MAX_N:
        raise UsageError(f"oracle enumeration is capped at n = {MAX_N}")
    got = oracle_counts(name, n)
    payload = {"class": name, "n_max": n, "g": got["G"], "c": got["C"], "b": got["B"]}
    rows = [(k, got["G"][k], got["C"][k], got["B"][k]) for k in range(n + 1)]
    _emit(args, "oracle", payload, rows, ("n", "g", "c", "b"))


def cmd_density_map(args):
    spec = _spec(args)
    if args.mu is None:
        raise UsageError("density-map needs --mu")
    pt = L.density_map(spec, mpmath.mpf(args.mu))
    payload = {"class": spec.name, "mu": pt.mu, "y0": pt.y, "residual": pt.residual,
               "near_boundary": pt.near_boundary, "source": "mu = -y rho'(y)/rho(y)"}
    _emit(args, "density-map", payload, [("mu", pt.mu), ("y0", pt.y)], ("field", "value"))


COMMANDS = {
    "constants": cmd_constants, "counts": cmd_counts, "classify": cmd_classify,
    "scan": cmd_scan, "block-law": cmd_block_law, "airy": cmd_airy,
    "oracle": cmd_oracle, "density-map": cmd_density_map,
}


def build_parser():
    p = argparse.ArgumentParser(prog="closedgraphs", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("cls", nargs="?", help="built-in class name or spec file")
    p.add_argument("--spec", help="class-spec file")
    p.add_argument("--y", default="1", help="edge weight (scan: start:stop:count)")
    p.add_argument("--mu", help="edge density for block-law and density-map")
    p.add_argument("--n", type=int, help="largest vertex count")
    p.add_argument("--order", type=int, help="truncation order for series")
    p.add_argument("--precision", type=int, default=30, help="working decimal digits")
    p.add_argument("--digits", type=int, default=12, help="digits printed")
    p.add_argument("--format", choices=("json", "tsv", "table"), default="json")
    p.add_argument("--with-edges", action="store_true", help="counts by edges as well")
    p.add_argument("--density", action="store_true", help="airy: tabulate the density (default)")
    p.add_argument("--compose", nargs=4, metavar=("A1", "C1", "A2", "C2"), help="airy: compose two laws")
    p.add_argument("--from", dest="start", default="-4")
    p.add_argument("--to", dest="stop", default="4")
    p.add_argument("--step", default="0.01")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision < 15:
        parser.error("--precision must be at least 15")
    set_precision(args.precision)
    try:
        COMMANDS[args.command](args)
    except MissingDataError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONDITIONAL
    except (UsageError, ClassError, OracleError, L.DensityRangeError, X.CoreError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, SingularityError, L.LawError, ArithmeticError, ZeroDivisionError) as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
