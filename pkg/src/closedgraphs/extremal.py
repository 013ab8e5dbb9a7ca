"""Largest block and largest 3-connected component: core laws, the map
Airy distribution, and the algebra of Airy parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import mpmath

from .laws import c_mode, density_map, edge_law, is_critical
from .network import ExactSystem, NetworkSystem
from .numerics import coefficient, mpf
from .series import Series
from .singular import (SingularReport, SingularityError, _ring_phi, analyse, find_R)
from .tclass import ClassSpec, SingularRing

SERIES_LIMIT = 5        # |x| beyond which the series path is refused
ASYMPTOTIC_FROM = 6     # |x| from which Ai and Ai' use their expansions


class CoreError(ValueError):
    """The requested law does not apply to this class."""


# -------------------------------------------------------- Airy density

def airy_density(x):
    """g(x) = 2 exp(-2x^3/3) (x Ai(x^2) - Ai'(x^2)), the map Airy law."""
    x = mpf(x)
    if abs(x) >= ASYMPTOTIC_FROM:
        return _airy_density_asym(x)
    # for x < 0 the bracket cancels to relative size about 1/(4|x|^3)
    with mpmath.extradps(10 + int(3 * mpmath.log10(1 + abs(x)))):
        t = x * x
        bracket = x * mpmath.airyai(t) - mpmath.airyai(t, derivative=1)
        val = 2 * mpmath.exp(-2 * x ** 3 / 3) * bracket
    return +val


def _airy_density_asym(x):
    # Ai and Ai' at t = x^2 from their expansions in 1/zeta, zeta = 2|x|^3/3;
    # the leading terms cancel for x < 0, leaving |x|^(-5/2) / (4 sqrt(pi))
    s = abs(x)
    zeta = 2 * s ** 3 / 3
    eps = mpmath.mpf(10) ** (-mpmath.mp.dps - 5)
    sign = -1 if x < 0 else 1
    total, u, zk, k = 0, mpmath.mpf(1), mpmath.mpf(1), 0
    while True:
        k += 1
        u *= (3 * k - mpmath.mpf(0.5)) * (3 * k - mpmath.mpf(1.5)) * (3 * k - mpmath.mpf(2.5)) / (54 * k * (k - mpmath.mpf(0.5)))
        v = -(6 * k + 1) * u / (6 * k - 1)
        zk = -zk / zeta
        term = (v + sign * u) * zk
        total += term
        if abs(term) < eps * abs(total) or k > 200:
            break
    lead = mpmath.sqrt(s / mpmath.pi)
    if x < 0:
        return lead * total
    return lead * mpmath.exp(-2 * zeta) * (2 + total)


def airy_density_series(x):
    """The same density from its power series; accurate for |x| <= 5."""
    x = mpf(x)
    if abs(x) > SERIES_LIMIT:
        raise ValueError(f"series path is limited to |x| <= {SERIES_LIMIT}")
    a = -mpmath.cbrt(9)   # -3^(2/3)
    # terms peak near n = 4|x|^3 at about exp(4|x|^3/3); g(x) ~ exp(-4x^3/3) for x > 0
    digits = 20 + int(4 * abs(x) ** 3 / 3 * (2 if x > 0 else 1) / mpmath.ln(10))
    with mpmath.extradps(digits):
        total = 0
        n = 1
        xp = mpmath.mpf(1)        # x^(n-1)
        ap = a
        while True:
            size = ap * xp * mpmath.gamma(1 + mpmath.mpf(2 * n) / 3) / mpmath.factorial(n)
            total += size * mpmath.sinpi(mpmath.mpf(-2 * n) / 3)
            # every third sine vanishes, so test the size of the term
            if n > 20 and abs(size) < mpmath.mpf(10) ** (-mpmath.mp.dps - 5) * (1 + abs(total)):
                break
            n += 1
            xp *= x
            ap *= a
        val = total / mpmath.pi
    return +val


def airy_table(start, stop, step):
    """Rows (x, g(x)) on a uniform grid, endpoints included."""
    start, stop, step = mpf(start), mpf(stop), mpf(step)
    n = int(mpmath.nint((stop - start) / step))
    return [(start + k * step, airy_density(start + k * step)) for k in range(n + 1)]


@dataclass(frozen=True)
class AiryParams:
    """Law of a size a n + x n^(2/3) with density c g(c x)."""

    a: object
    c: object

    def __post_init__(self):
        object.__setattr__(self, "a", mpf(self.a))
        object.__setattr__(self, "c", mpf(self.c))
        if not (self.a > 0 and self.c > 0):
            raise ValueError("Airy parameters must be positive")

    def density(self, x):
        return self.c * airy_density(self.c * x)


def airy_scale(p: AiryParams, k) -> AiryParams:
    """A normal count with mean k per unit of an Airy size: (k a, c / k)."""
    if not k > 0:
        raise ValueError("scale factor must be positive")
    return AiryParams(k * p.a, p.c / k)


def airy_sum(c1, c2):
    """Scale of the sum of two independent Airy variables."""
    return (c1 ** mpmath.mpf(-1.5) + c2 ** mpmath.mpf(-1.5)) ** (-mpmath.mpf(2) / 3)


def airy_compose(p1: AiryParams, p2: AiryParams) -> AiryParams:
    """Largest piece (law p2 at its own size) inside the largest piece of law p1."""
    a = p1.a * p2.a
    c = ((p1.c / p2.a) ** mpmath.mpf(-1.5) + p2.c ** mpmath.mpf(-1.5) * p1.a) ** (-mpmath.mpf(2) / 3)
    return AiryParams(a, c)


def composed_density(z, p1: AiryParams, p2: AiryParams):
    """The convolution the composed law stands for, by quadrature."""
    k1 = p1.c / p2.a
    k2 = p2.c * p1.a ** (-mpmath.mpf(2) / 3)
    f = lambda u: k1 * airy_density(k1 * u) * k2 * airy_density(k2 * (z - u))
    return mpmath.quad(f, [-mpmath.inf, z - 2, z, z + 2, mpmath.inf])


# ------------------------------------------------------------ core laws

@dataclass
class CoreLaw:
    kind: str                      # discrete or two-mode
    pgf: object = None             # q(u) for the discrete law
    radius: object = None          # q is analytic for u < radius
    tail_exponent: object = None
    tail_ratio: object = None
    tail_constant: object = None
    coreless: object = None
    p_small: object = None
    airy: AiryParams | None = None
    alpha_H: object = None         # alpha from the H = xC' expansion
    extra: dict = field(default_factory=dict)

    def coefficients(self, kmax):
        return self.extra["coefficients"](kmax)


def subcritical_core(spec: ClassSpec, rep: SingularReport | None = None) -> CoreLaw:
    """Discrete law q(u) = tau u B''(tau u) of the 2-connected core."""
    rep = rep or analyse(spec)
    if c_mode(rep) != "tau" or is_critical(rep):
        raise CoreError(f"{spec.name} is not series-parallel-like (case {rep.case})")
    tau, R, rho = rep.tau, rep.R, rep.rho
    sys = NetworkSystem(spec, rep.y)

    def q(u):
        u = mpf(u)
        if u == 0:
            return 0 * u
        if not 0 < u * tau < R:
            raise ValueError("q(u) needs 0 <= u < R/tau")
        return tau * u * sys.B_derivs(u * tau, 2)[2]

    def coefficients(kmax):
        # q_k = b_{k+1} tau^k / (k-1)!, with b_n / n! = [x^n] B
        es = ExactSystem(spec, kmax + 1, mpmath.mpf(rep.y))
        out = [mpmath.mpf(0)]
        for k in range(1, kmax + 1):
            out.append(es.B.c[k + 1] * factorial(k + 1) * tau ** k / factorial(k - 1))
        return out

    if rep.B_exponent == Fraction(3, 2):
        expo, const = mpmath.mpf(-0.5), 3 * rep.B["B3"] / (4 * R * mpmath.sqrt(mpmath.pi))
    elif rep.B_exponent == Fraction(5, 2):
        expo, const = mpmath.mpf(-1.5), -5 * rep.B["B5"] / (2 * R * mpmath.sqrt(mpmath.pi))
    else:
        expo, const = None, None
    return CoreLaw("discrete", pgf=q, radius=R / tau, tail_exponent=expo, tail_ratio=tau / R,
                   tail_constant=const, coreless=1 - rho / tau,
                   extra={"coefficients": coefficients})


def critical_core(spec: ClassSpec, rep: SingularReport | None = None) -> CoreLaw:
    """Two-mode law of the core for planar-like classes; the linear mode is Airy."""
    rep = rep or analyse(spec)
    if c_mode(rep) != "R" or is_critical(rep):
        raise CoreError(f"{spec.name} is not planar-like (case {rep.case})")
    R = rep.R
    B2, B4, B5 = rep.B["B2"], rep.B["B4"], rep.B["B5"]
    alpha = (R - 2 * B4) / R
    c = (-2 * R / (15 * B5)) ** (mpmath.mpf(2) / 3)
    # Q = B'(z) in Z = sqrt(1 - z/R); H = x C'(x) in X = sqrt(1 - x/rho)
    Q2, Q3 = -2 * B4 / R, -5 * B5 / (2 * R)
    C2, C4, C5 = rep.C["C2"], rep.C["C4"], rep.C["C5"]
    H0, H2, H3 = -C2, C2 - 2 * C4, -mpmath.mpf(5) / 2 * C5
    alpha0 = -H0 / H2
    M3 = -Q2 * H3 / R + Q3 * alpha0 ** mpmath.mpf(-1.5)
    p_s = -Q2 * H3 / (R * M3)
    c_core = (-H2 / (3 * H3)) ** (mpmath.mpf(2) / 3) / alpha0

    def coefficients(kmax):
        # P(core = k) ~ (H3/M3) k R^(k-1) [z^k] B'(z)
        es = ExactSystem(spec, kmax + 1, mpmath.mpf(rep.y))
        return [H3 / M3 * k * R ** (k - 1) * (k + 1) * es.B.c[k + 1] for k in range(kmax + 1)]

    return CoreLaw("two-mode", p_small=p_s, airy=AiryParams(alpha, c), alpha_H=alpha0,
                   extra={"M3": M3, "H": (H0, H2, H3), "Q": (-B2 / R, Q2, Q3),
                          "c_core": c_core, "coefficients": coefficients})


# ------------------------------------------------- 3-connected components

@dataclass
class ThreeCore:
    """Edges of the largest 3-connected component of a 2-connected graph."""

    D: tuple          # D~0, D~2, D~3 of D(R, y) in Y = sqrt(1 - y)
    beta: object
    c: object
    law: AiryParams


def _y_expansion(spec, loc, order=4):
    """D(R, y) around y = y0 in Y = sqrt(1 - y/y0), frozen at x = R."""
    ring = SingularRing(spec, loc.R, nx=2, nz=order + 2)
    Phi = _ring_phi(ring, loc.y)
    phis = [coefficient(c, "X", 0) if isinstance(c, Series) else c for c in Phi.c]
    tol = mpmath.mpf(10) ** (-mpmath.mp.dps + 10)
    if abs(phis[0]) > mpmath.mpf("1e-12") or abs(phis[1]) > mpmath.mpf("1e-12"):
        raise SingularityError("Phi does not vanish to second order at the singular point")
    if not phis[2] > 0:
        raise SingularityError("Phi_{2,0} must be positive")
    order += 2          # dividing by Y^2 costs two orders
    Y = Series([0, 1], order, "Y")
    y0 = loc.y
    # log((1+y)/(1+y0)) with y = y0 (1 - Y^2), divided by Y^2
    lg = (1 - y0 * Y * Y / (1 + y0)).log()
    lg = Series([0 * y0] + list(lg.c[1:]), var="Y").shift_down(2, tol)
    # Z = Y W: sum_i phi_i Y^(i-2) W^i + lg = 0
    W = Series([mpmath.sqrt(-lg.c[0] / phis[2])], order, "Y")
    for _ in range(order.bit_length() + 3):
        F, dF, Yp = lg, 0, 1
        for i in range(2, len(phis)):
            F = F + phis[i] * Yp * W ** i
            dF = dF + i * phis[i] * Yp * W ** (i - 1)
            Yp = Yp * Y
        W = W - F / dF
    Z = Y * W
    r0 = coefficient(ring.r, "X", 0) if isinstance(ring.r, Series) else ring.r
    D = r0 * (1 - Z * Z)
    return [D.c[k] for k in range(4)], phis


def edges_in_3core(spec: ClassSpec, rep: SingularReport | None = None) -> ThreeCore:
    """Airy law of the edges of the largest 3-connected component (weights R^k/k!)."""
    rep = rep or analyse(spec)
    if rep.source != "T-singularity":
        raise CoreError("needs a T-singular class: the y-expansion runs along the singular curve")
    loc = find_R(spec, rep.y)
    D, _ = _y_expansion(spec, loc)
    D0, D2, D3 = D[0], D[2], D[3]
    beta = -D0 / D2
    c = (-D2 / D0) * (-D2 / (3 * D3)) ** (mpmath.mpf(2) / 3)
    return ThreeCore((D0, D2, D3), beta, c, AiryParams(beta, c))


@dataclass
class ThreeConnLaw:
    vertices: AiryParams
    edges: AiryParams
    mu: object
    block_edges: AiryParams
    labels: dict = field(default_factory=dict)


def largest_3conn(spec: ClassSpec, rep: SingularReport | None = None, kappa2=None) -> ThreeConnLaw:
    """Vertices and edges of the largest 3-connected component of a connected graph."""
    rep = rep or analyse(spec)
    core = critical_core(spec, rep)
    three = edges_in_3core(spec, rep)
    if kappa2 is None:
        kappa2 = edge_law(spec, rep, rep.y).kappa2
    block_edges = airy_scale(core.airy, kappa2)
    edges = airy_compose(block_edges, three.law)
    mu = -rep.R * rep.extra["r1"] / rep.D["D0"]
    vertices = AiryParams(mu * edges.a, edges.c / mu)
    labels = {"vertices": ("alpha_2", "c_2"), "edges": ("alpha_3", "c_3"),
              "three_core": ("beta", "c_2 of the 3-core edge law")}
    return ThreeConnLaw(vertices, edges, mu, block_edges, labels)


# ------------------------------------------------------ density and scan

def block_law_at_density(spec: ClassSpec, mu):
    """Largest-block law for graphs with about mu n edges."""
    point = density_map(spec, mu)
    rep = analyse(spec, point.y)
    if c_mode(rep) == "R" and not is_critical(rep):
        return point, critical_core(spec, rep)
    return point, subcritical_core(spec, rep)


def alpha_curve(spec: ClassSpec, mus):
    """(mu, y0, alpha(mu)) for a planar-like class."""
    rows = []
    for mu in mus:
        point, law = block_law_at_density(spec, mu)
        rows.append((point.mu, point.y, law.airy.a if law.airy else None))
    return rows


@dataclass
class ScanRow:
    y: object
    case: str
    source: str
    gap: object
    S: object


@dataclass
class CriticalPoint:
    y: object
    kind: str          # coalescence (source gap) or connected (S = 1)
    mu: object = None
    bracket: tuple = ()


def _row(spec, y):
    rep = analyse(spec, y)
    return ScanRow(rep.y, rep.case, rep.source, rep.gap, rep.S)


def _gap(spec, y):
    return find_R(spec, y).gap


def _s_minus_one(spec, y):
    return analyse(spec, y).S - 1


def bisect_y(f, lo, hi, rtol="1e-11", maxit=200):
    """Sign change of f on [lo, hi] in log y."""
    lo, hi = mpf(lo), mpf(hi)
    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0:
        raise ValueError("no sign change on the bracket")
    rtol = mpmath.mpf(rtol)
    for _ in range(maxit):
        mid = mpmath.sqrt(lo * hi)
        fm = f(mid)
        if fm == 0:
            return mid, (mid, mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        if hi - lo <= rtol * hi:
            break
    return (lo + hi) / 2, (lo, hi)


def _finite(v):
    return v is not None and mpmath.isfinite(v)


def scan_critical(spec: ClassSpec, ys, refine: bool = True, with_mu: bool = True):
    """Classify along y and bracket every critical value between samples."""
    rows = [_row(spec, y) for y in ys]
    crit = []
    for a, b in zip(rows, rows[1:]):
        if refine and _finite(a.gap) and _finite(b.gap) and (a.gap < 0) != (b.gap < 0):
            y0, br = bisect_y(lambda y: _gap(spec, y), a.y, b.y)
            crit.append(CriticalPoint(y0, "coalescence", bracket=br))
        if (refine and a.source == b.source == "T-singularity" and _finite(a.S) and _finite(b.S)
                and (a.S < 1) != (b.S < 1)):
            y0, br = bisect_y(lambda y: _s_minus_one(spec, y), a.y, b.y)
            crit.append(CriticalPoint(y0, "connected", bracket=br))
    if with_mu:
        for cp in crit:
            cp.mu = mu_one_sided(spec, cp.bracket[0])
    return rows, crit


def mu_one_sided(spec: ClassSpec, y, h="1e-4"):
    """-y rho'(y)/rho(y) from a backward stencil ending at y."""
    from .singular import growth
    y = mpf(y)
    h = mpmath.mpf(h) * y
    f = [growth(spec, y - k * h)[0] for k in range(5)]
    d1 = (25 * f[0] - 48 * f[1] + 36 * f[2] - 16 * f[3] + 3 * f[4]) / (12 * h)
    return -y * d1 / f[0]
