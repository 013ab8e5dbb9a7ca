from fractions import Fraction

import mpmath
import pytest

from closedgraphs.network import NetworkSystem, phi, phi_z
from closedgraphs.singular import analyse, find_R
from closedgraphs.tclass import builtin, parse_class

from conftest import SYNTHETIC, Y_CRIT, rel, sig


@pytest.fixture(scope="module")
def planar():
    mpmath.mp.dps = 30
    return analyse(builtin("planar"))


@pytest.mark.parametrize("name,inv", [("ex-k4", "7.8123"), ("ex-w4", "10.3712")])
def test_radius(name, inv):
    assert sig(1 / find_R(builtin(name)).R, mpmath.mpf(inv), 5)


@pytest.mark.parametrize("name", ["ex-k4", "ex-w4", "ex-k5e"])
def test_case_one(name):
    rep = analyse(builtin(name))
    assert rep.case == "1" and rep.source == "branch-point"
    assert rep.B_exponent == Fraction(3, 2) and rep.C_exponent == Fraction(3, 2)
    assert rep.rho < rep.tau < rep.R


def test_rho_k4():
    assert sig(analyse(builtin("ex-k4")).rho_inv, mpmath.mpf("9.0733"))


@pytest.mark.parametrize("name", ["ex-k4", "ex-w4", "ex-k5e"])
@pytest.mark.parametrize("y", ["0.5", "1", "2"])
def test_on_the_branch_point(name, y):
    spec, y = builtin(name), mpmath.mpf(y)
    loc = find_R(spec, y)
    assert abs(phi(spec, loc.R, loc.D0, y)) < 1e-10
    assert abs(phi_z(spec, loc.R, loc.D0, y)) < 1e-10
    # T is analytic there, so its z-derivatives stay finite
    assert mpmath.isfinite(spec.evaluate(loc.R, loc.D0, (0, 3)))


@pytest.mark.parametrize("name", ["ex-k4", "ex-w4", "ex-k5e"])
def test_branch_signs(name):
    rep = analyse(builtin(name))
    assert rep.D["D1"] < 0 and rep.B["B3"] > 0
    assert abs(rep.B["B1"]) < 1e-20


def _fit(f, R, powers, Xs):
    A = mpmath.matrix([[X ** j for j in powers] for X in Xs])
    b = mpmath.matrix([f(R * (1 - X * X)) for X in Xs])
    c, _ = mpmath.qr_solve(A, b)
    return dict(zip(powers, c))


@pytest.mark.parametrize("name", ["ex-k4", "ex-w4"])
def test_branch_fit(name):
    rep = analyse(builtin(name))
    sys = NetworkSystem(builtin(name), 1)
    Xs = [mpmath.mpf(k) / 200 for k in range(4, 45)]
    c = _fit(sys.B, rep.R, range(10), Xs)
    assert abs(c[1]) < 1e-8
    assert rel(c[3], rep.B["B3"]) < 1e-6
    assert rel(c[2], rep.B["B2"]) < 1e-6


def test_connected_coefficients_case_one():
    rep = analyse(builtin("ex-w4"))
    e = mpmath.exp(rep.C["C0"])
    assert rep.G["G0"] == e
    assert rep.G["G2"] == rep.C["C2"] * e and rep.G["G3"] == rep.C["C3"] * e
    assert rep.C["C2"] == -rep.tau


# ---------------------------------------------------------------- planar

def test_planar_radius(planar):
    assert planar.source == "T-singularity" and planar.case == "2.1"
    assert sig(planar.R_inv, mpmath.mpf("26.1841"), 5)
    assert sig(planar.rho_inv, mpmath.mpf("27.2269"), 5)
    assert planar.S < 1 and planar.rho < planar.R


def test_planar_signs(planar):
    assert planar.extra["P"] < 0 and planar.extra["Q"] > 0
    assert planar.D["D3"] > 0 and planar.B["B5"] < 0
    assert abs(planar.B["B1"]) < 1e-25 and abs(planar.B["B3"]) < 1e-25
    # closed-form P, Q agree with the term-by-term solution
    assert rel(planar.extra["P"], planar.extra["series"]["P"]) < 1e-15
    assert rel(planar.extra["Q"], planar.extra["series"]["Q"]) < 1e-15


def test_planar_alpha(planar):
    alpha = (planar.R - 2 * planar.B["B4"]) / planar.R
    assert abs(alpha - mpmath.mpf("0.95982")) < 1e-5


def test_planar_connected_coefficients(planar):
    C, G = planar.C, planar.G
    e = mpmath.exp(C["C0"])
    assert planar.C_exponent == Fraction(5, 2)
    assert G["G2"] == C["C2"] * e and G["G5"] == C["C5"] * e
    assert G["G4"] == (C["C4"] + C["C2"] ** 2 / 2) * e


def test_planar_fit(planar):
    sys = NetworkSystem(builtin("planar"), 1)
    Xs = [mpmath.mpf(k) / 400 for k in range(4, 61, 4)]
    c = _fit(sys.B, planar.R, [0, 2, 4, 5, 6, 7, 8, 9], Xs)
    assert rel(c[5], planar.B["B5"]) < 1e-4
    assert rel(c[4], planar.B["B4"]) < 1e-6


# ------------------------------------------------------------- synthetic

@pytest.fixture(scope="module")
def synthetic():
    return parse_class(SYNTHETIC)


def test_synthetic_sides(synthetic):
    below, above = analyse(synthetic, "0.4"), analyse(synthetic, "0.7")
    assert below.source == "branch-point" and below.case == "2.3"
    assert above.source == "T-singularity" and above.case == "2.1"
    assert above.extra["P"] < 0 and above.extra["Q"] > 0 and above.D["D3"] > 0 and above.B["B5"] < 0


def test_synthetic_coalescence(synthetic):
    rep = analyse(synthetic, Y_CRIT)
    assert rep.source == "critical-coalescence" and rep.case == "3.1"
    assert rep.B_exponent == Fraction(5, 3)
    assert rep.D["D43"] < 0


def test_synthetic_critical_fit(synthetic):
    rep = analyse(synthetic, Y_CRIT)
    sys = NetworkSystem(synthetic, Y_CRIT)
    # (D - D0) / (D43 X^(4/3)) -> 1 with X = sqrt(1 - x/R)
    ratios = []
    for t in ("1e-4", "1e-6", "1e-8"):
        t = mpmath.mpf(t)
        ratios.append((sys.D(rep.R * (1 - t)) - rep.D0) / (rep.D["D43"] * t ** (mpmath.mpf(2) / 3)))
    errs = [abs(1 - r) for r in ratios]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 0.02
