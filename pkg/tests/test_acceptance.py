"""Acceptance suite: one PASS/FAIL line per criterion.

Every test records its verdict through ``criterion`` before pytest sees the
outcome, so the summary at the end of the run lists all of them.
"""

import time
from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache

import mpmath
import pytest

from closedgraphs.extremal import (AiryParams, airy_compose, airy_density, airy_density_series,
                                   composed_density, critical_core, edges_in_3core, largest_3conn,
                                   scan_critical)
from closedgraphs.laws import component_law, law_report, missed_mass_law
from closedgraphs.network import ExactSystem, NetworkSystem, counts, formal_y, psi_series
from closedgraphs.oracle import oracle_counts
from closedgraphs.series import BiSeries, Series
from closedgraphs.singular import analyse
from closedgraphs.tclass import builtin, parse_class

from conftest import ACCEPTANCE, SYNTHETIC, TABLE2, TABLE2_FIELDS, Y_CRIT, sig, table2_values

CLASSES = ("ex-k4", "ex-w4", "ex-k5e")


@contextmanager
def criterion(label):
    try:
        yield
    except BaseException as exc:
        first = (str(exc).splitlines() or [""])[0][:100]
        ACCEPTANCE.append(f"FAIL  {label}  ({type(exc).__name__}: {first})")
        raise
    ACCEPTANCE.append(f"PASS  {label}")


@lru_cache(maxsize=None)
def _report(name):
    t0 = time.perf_counter()
    return law_report(builtin(name)), time.perf_counter() - t0


def _check_row(name, limit=None, row=None):
    rep, elapsed = _report(name)
    got = table2_values(rep)
    bad = [f"{f}={mpmath.nstr(v, 8)} vs {w}" for f, v, w in zip(TABLE2_FIELDS, got, TABLE2[row or name])
           if not sig(v, mpmath.mpf(w))]
    assert not bad, "; ".join(bad)
    if limit is not None:
        assert elapsed < limit, f"{elapsed:.1f} s"
    return elapsed


# 1 -------------------------------------------------------------- Table 2

@pytest.mark.parametrize("name", ["ex-k4", "ex-w4"])
def test_c1_table_rows(name):
    with criterion(f"C1 Table 2 row {name}, 4 digits, < 10 s"):
        _check_row(name, 10)


@pytest.mark.xfail(strict=True, reason="the tabulated ex-k5e row counts K4 four times; see ex-k5e-table")
def test_c1_table_row_k5e():
    with criterion("C1 Table 2 row ex-k5e, 4 digits, < 10 s"):
        _check_row("ex-k5e", 10)


def test_c1_table_row_k5e_variant():
    with criterion("C1 Table 2 row ex-k5e-table (tabulated T), 4 digits, < 10 s"):
        _check_row("ex-k5e-table", 10, row="ex-k5e")


# 2 --------------------------------------------------------- planar rows

@pytest.mark.parametrize("name", ["planar", "ex-k33", "ex-k33plus"])
def test_c2_conditional_rows(name):
    with criterion(f"C2 Table 2 row {name}, 4 digits"):
        _check_row(name)


# 3 ------------------------------------------------------ oracle equality

def test_c3_oracle():
    with criterion("C3 G, C, B equal enumeration for n <= 6, < 5 min"):
        t0 = time.perf_counter()
        for name in CLASSES:
            assert oracle_counts(name, 6) == counts(builtin(name), 6), name
        assert time.perf_counter() - t0 < 300


# 4 ------------------------------------------------------------ identities

def test_c4_identities():
    with criterion("C4 exact identities: BD to (12,12), psi(F) = x and G = exp(C) to order 30"):
        N = 12
        for name in CLASSES:
            y = formal_y(N)
            es = ExactSystem(builtin(name), N, y)
            lhs = BiSeries.from_nested(es.B, N).dy()
            rhs = BiSeries.from_nested(
                Series([0, 0] + [c * (1 / (1 + y)) / 2 for c in (1 + es.D).c], N, "x"), N - 1)
            assert lhs.grid == rhs.grid, name
            es = ExactSystem(builtin(name), 30)
            comp = psi_series(es.B).compose(es.F)
            assert comp == Series([0, 1], 30).truncate(comp.order), name
            assert es.C.exp() == es.G, name
            assert all(isinstance(c, (int, Fraction)) for c in es.G.c)


# 5 ----------------------------------------------------------------- signs

def _fit(f, R, powers, Xs):
    A = mpmath.matrix([[X ** j for j in powers] for X in Xs])
    b = mpmath.matrix([f(R * (1 - X * X)) for X in Xs])
    c, _ = mpmath.qr_solve(A, b)
    return dict(zip(powers, c))


def test_c5_branch_signs():
    with criterion("C5 branch case: |B1| < 1e-8 by fit, D1 < 0, B3 > 0"):
        for name in CLASSES:
            spec = builtin(name)
            rep = analyse(spec)
            fit = _fit(NetworkSystem(spec, 1).B, rep.R, range(10), [mpmath.mpf(k) / 200 for k in range(4, 45)])
            assert abs(fit[1]) < 1e-8, name
            assert rep.D["D1"] < 0 and rep.B["B3"] > 0 and fit[3] > 0, name


def test_c5_tsing_signs():
    with criterion("C5 T-singular case (planar): B1 = B3 = 0, B5 < 0, D3 > 0, P < 0, Q > 0"):
        spec = builtin("planar")
        rep = analyse(spec)
        fit = _fit(NetworkSystem(spec, 1).B, rep.R, range(10), [mpmath.mpf(k) / 400 for k in range(4, 61, 4)])
        assert abs(fit[1]) < 1e-8 and abs(fit[3]) < 1e-6
        assert rep.B["B1"] == 0 or abs(rep.B["B1"]) < 1e-25
        assert abs(rep.B["B3"]) < 1e-25 and rep.B["B5"] < 0 and fit[5] < 0
        assert rep.D["D3"] > 0 and rep.extra["P"] < 0 and rep.extra["Q"] > 0


# 6 ------------------------------------------------------------------ Airy

def test_c6_airy():
    with criterion("C6 Airy: moments, series vs closed form, composition"):
        cuts = [-mpmath.inf, -2, 0, 2, mpmath.inf]
        assert abs(mpmath.quad(airy_density, cuts) - 1) < 1e-6
        assert abs(mpmath.quad(lambda x: x * airy_density(x), cuts)) < 1e-6
        xs = [mpmath.mpf(k) / 20 - 3 for k in range(121)]
        assert max(abs(airy_density(x) - airy_density_series(x)) for x in xs) < 1e-8
        maps = (AiryParams(mpmath.mpf(1) / 3, 3 / mpmath.cbrt(4) ** 2),
                AiryParams(mpmath.mpf(1) / 3, mpmath.cbrt(3) ** 4 / 4))
        p = airy_compose(*maps)
        assert p.a == maps[0].a * maps[1].a and abs(p.a - mpmath.mpf(1) / 9) < 1e-28
        assert abs(p.c - mpmath.mpf("1.71707")) < 1e-4
        for z in ("-1", "0.4"):
            assert abs(composed_density(mpmath.mpf(z), *maps) - p.density(mpmath.mpf(z))) < 1e-3


# 7 ---------------------------------------------------------- largest block

def test_c7_largest_block():
    with criterion("C7 planar largest block: alpha, c, kappa2 alpha, alpha3, alpha2"):
        spec = builtin("planar")
        rep = analyse(spec)
        law = critical_core(spec, rep)
        assert abs(law.airy.a - mpmath.mpf("0.95982")) < 1e-4
        assert abs(law.airy.c - mpmath.mpf("128.35")) < 0.1
        kappa2 = _report("planar")[0].kappa2
        res = largest_3conn(spec, rep, kappa2=kappa2)
        assert abs(res.block_edges.a - mpmath.mpf("2.172")) < 1e-3
        assert abs(res.edges.a - mpmath.mpf("1.7921")) < 2e-3
        beta = edges_in_3core(spec, rep).beta
        assert mpmath.almosteq(res.edges.a, beta * kappa2 * law.airy.a)
        assert abs(res.vertices.a - mpmath.mpf("0.7346")) < 2e-3


# 8 ------------------------------------------------------ critical detection

@pytest.mark.parametrize("name", CLASSES)
def test_c8_no_critical_point(name):
    with criterion(f"C8 scan of {name} over y in [0.1, 10]: case 1 throughout"):
        ys = [mpmath.mpf(10) ** (mpmath.mpf(k) / 6 - 1) for k in range(13)]
        rows, crit = scan_critical(builtin(name), ys, with_mu=False)
        assert all(r.case == "1" for r in rows) and not crit


def test_c8_synthetic_coalescence():
    with criterion("C8 synthetic class: bisection lands within 1e-8 of the coalescence point"):
        spec = parse_class(SYNTHETIC)
        _, crit = scan_critical(spec, [mpmath.mpf(y) for y in ("0.3", "0.45", "0.6", "0.75")], with_mu=False)
        assert len(crit) == 1 and crit[0].kind == "coalescence"
        assert abs(crit[0].y - Y_CRIT) < 1e-8


# 9 ------------------------------------------------------ largest component

def test_c9_missed_mass():
    with criterion("C9 ex-k4 missed mass: total >= 0.999 at k = 200, mean = tau, variance undefined"):
        spec = builtin("ex-k4")
        rep = analyse(spec)
        m = missed_mass_law(spec, rep, 200)
        assert 0.999 <= m.total <= 1
        assert m.mean == rep.tau and m.variance is None
        assert m.p[0] == component_law(rep)[1]


# ratio test ----------------------------------------------------------------

@pytest.mark.parametrize("name", CLASSES)
def test_ratio_convergence(name):
    with criterion(f"ratio test {name}: g_n/(n g_(n-1)) -> 1/rho, exponent -5/2 within 0.15 at n = 60"):
        spec = builtin(name)
        rho = analyse(spec).rho
        g = counts(spec, 60)["G"]
        # a_n = g_n rho^n / n! ~ const n^e, so n (a_n / a_(n-1) - 1) -> e
        a = [mpmath.mpf(g[n]) * rho ** n / mpmath.factorial(n) for n in range(61)]
        errs = [abs(g[n] * rho / (n * mpmath.mpf(g[n - 1])) - 1) for n in (20, 40, 60)]
        assert errs[0] > errs[1] > errs[2] and errs[2] < 0.05
        exponent = 60 * (a[60] / a[59] - 1)
        assert abs(exponent + mpmath.mpf(5) / 2) < 0.15
