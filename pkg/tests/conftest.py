import mpmath
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _precision():
    mpmath.mp.dps = 30
    yield
    mpmath.mp.dps = 30


def rel(a, b):
    return abs(a - b) / abs(b)


def sig(a, b, digits=4):
    """True when a and b agree to the given number of significant digits."""
    return float(mpmath.nstr(a, digits)) == float(mpmath.nstr(b, digits)) or rel(a, b) < 5 * 10 ** (-digits)


# published constants: 1/rho, 1/R, kappa, kappa2, beta, delta, p
TABLE2 = {
    "ex-k4": ("9.0733", "7.8123", "1.61673", "1.71891", "0.149374", "0.138753", "0.88904"),
    "ex-w4": ("11.5437", "10.3712", "1.76427", "1.85432", "0.107065", "0.101533", "0.91305"),
    "ex-k5e": ("15.6471", "14.5275", "1.88351", "1.95360", "0.0742327", "0.0715444", "0.93597"),
    "planar": ("27.2269", "26.1841", "2.21327", "2.2629", "0.0390518", "0.0382991", "0.96325"),
    "ex-k33": ("27.2293", "26.1866", "2.21338", "2.26299", "0.0390483", "0.0382957", "0.963262"),
    "ex-k33plus": ("27.2295", "26.1867", "2.21337", "2.26298", "0.0390481", "0.0382956", "0.963263"),
}
TABLE2_FIELDS = ("rho_inv", "R_inv", "kappa", "kappa2", "beta", "delta", "p")

# T with a 5/2 singular line at z = 1; its branch point meets the line at Y_CRIT
SYNTHETIC = """name = synthetic
T = x^4*(1 - 5*z/2 + 15*z^2/8 - (1-z)^(5/2))/10
singular { r = 1; exponent = 5/2 }
"""
Y_CRIT = mpmath.mpf("0.532175799986605829780626491505")


def table2_values(report):
    """The seven tabulated constants of a LawReport, in TABLE2 order."""
    return (report.rho_inv, report.R_inv, report.kappa, report.kappa2,
            report.blocks[0], report.cuts[0], report.p)


# one line per acceptance criterion, collected by test_acceptance and printed at the end
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
