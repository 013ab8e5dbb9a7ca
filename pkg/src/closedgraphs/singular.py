"""Dominant singularities of B, C and G and their local expansions.

For fixed y the network function D(x) stops being analytic at R for one
of two reasons: a branch point of Phi(x, z) = 0 (Phi = Phi_z = 0), or the
curve z = D(x) running into the singular curve z = r(x) of T.  When both
happen at once the point is critical.  Everything below works in the
local variables X = sqrt(1 - x/R) and Z = sqrt(1 - z/r(x)).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath

from .expr import DomainError
from .network import NetworkSystem, b_explicit, phi as phi_expr
from .numerics import NumericError, coefficient, leading, lift, mpf
from .series import Series, SeriesError
from .tclass import ClassSpec, SingularRing

CRIT_TOL = mpmath.mpf("1e-9")   # |Phi_z| (or |S - 1|) below this is critical
X_CAP = mpmath.mpf(1000)        # no class has R beyond this
BRACKET_TOL = mpmath.mpf("1e-7")
_FAIL = (NumericError, DomainError, SeriesError, ZeroDivisionError)


class SingularityError(ArithmeticError):
    pass


class NearCriticalError(SingularityError):
    """Two sources agree to within tolerance; the caller asked for a strict pick."""


@dataclass
class Location:
    y: object
    R: object
    D0: object
    source: str          # branch-point, T-singularity or critical-coalescence
    phi_z: object        # Phi_z(R, D0)
    gap: object          # signed: < 0 T-singular side, > 0 branch side


def has_curve(spec: ClassSpec) -> bool:
    """True when T carries exponent 5/2 data along z = r(x)."""
    return spec.singular is not None and spec.singular.exponent == Fraction(5, 2)


def _ring_phi(ring: SingularRing, y):
    """Phi on the singular ring (a Z-series with X-series coefficients)."""
    x, z = ring.x, ring.z
    tz = ring.T(0, 1)
    return 2 * tz / (x * x) - ((1 + z) / (1 + y)).log() + x * z * z / (1 + x * z)


def curve_values(spec: ClassSpec, x, y):
    """(r, Phi, Phi_z) at the point (x, r(x)) of the singular curve."""
    x = mpf(x)
    ring = SingularRing(spec, x, nx=0, nz=4)
    r = leading(ring.r)
    tz = leading(ring.T(0, 1))
    tzz = leading(ring.T(0, 2))
    ph = 2 * tz / x ** 2 - mpmath.log((1 + r) / (1 + y)) + x * r * r / (1 + x * r)
    phz = 2 * tzz / x ** 2 + r / (1 + r) - 1 / (1 + x * r) ** 2
    return r, ph, phz


# ------------------------------------------------------------ locating R

def _on_branch(sys: NetworkSystem, x, curve: bool):
    try:
        D = sys.D(x)
        if curve and D >= sys.spec.r(x):
            return None
        return D
    except _FAIL:
        return None


def find_R(spec: ClassSpec, y=1, sys: NetworkSystem | None = None, hint: Location | None = None) -> Location:
    """R(y), D0 = D(R) and the source of the singularity.

    hint is a branch point at a nearby y; when given (and T has no singular
    curve) the 2-D Newton starts there instead of after a bracketing search.
    """
    y = mpf(y)
    if y <= 0:
        raise SingularityError("y must be positive")
    sys = sys or NetworkSystem(spec, y)
    curve = has_curve(spec)
    if hint is not None and not curve and hint.source == "branch-point":
        loc = _from_hint(sys, hint)
        if loc is not None:
            return loc

    # continuation along the physical branch until it stops
    lo, x = mpmath.mpf(0), mpmath.mpf("1e-3")
    while _on_branch(sys, x, curve) is None:
        x /= 4
        if x < mpmath.mpf("1e-12"):
            raise SingularityError("no physical branch near x = 0")
    while _on_branch(sys, x, curve) is not None:
        lo, x = x, 2 * x
        if x > X_CAP:
            raise SingularityError(f"no singularity found below x = {X_CAP}")
    hi = x
    # coarse bracket only: the polishing steps converge quadratically
    while hi - lo > BRACKET_TOL * hi:
        mid = (lo + hi) / 2
        if _on_branch(sys, mid, curve) is None:
            hi = mid
        else:
            lo = mid
    xb, Db = lo, sys.D(lo)

    if curve:
        r_b = spec.r(xb)
        if r_b - Db < mpmath.mpf("1e-4") * max(1, Db):
            loc = _curve_crossing(spec, y, xb)
            if loc is not None and loc.source != "branch-point":
                return loc
            gap = loc.gap if loc is not None else r_b - Db
        else:
            gap = r_b - Db
    else:
        gap = mpmath.inf
    R, D0 = _branch_newton(sys, xb, Db, spec.r if curve else None)
    return Location(y, R, D0, "branch-point", sys.phi_z(R, D0), gap)


def _from_hint(sys, hint):
    try:
        R, D0 = _branch_newton(sys, hint.R, hint.D0)
    except _FAIL:
        return None
    # the continued branch must arrive at the same point
    if not 0 < R < 2 * hint.R:
        return None
    D = _on_branch(sys, R * (1 - mpmath.mpf("1e-6")), False)
    if D is None or abs(D - D0) > mpmath.mpf("1e-2") * abs(D0):
        return None
    return Location(sys.y, R, D0, "branch-point", sys.phi_z(R, D0), mpmath.inf)


def _curve_crossing(spec, y, xb):
    """Root of Phi(x, r(x)) next to xb, classified by the sign of Phi_z there."""
    sigma = lambda x: curve_values(spec, x, y)[1]
    delta = mpmath.mpf("1e-12")
    while True:
        a, b = xb * (1 - delta), xb * (1 + delta)
        try:
            sa, sb = sigma(a), sigma(b)
        except _FAIL:
            return None
        if sa <= 0 <= sb or sb <= 0 <= sa:
            break
        delta *= 10
        if delta > mpmath.mpf("1e-2"):
            return None
    xs = mpmath.findroot(sigma, (a, b), solver="anderson")
    xs = mpmath.findroot(sigma, xs, solver="secant")
    r, _, phz = curve_values(spec, xs, y)
    if phz < -CRIT_TOL:
        source = "T-singularity"
    elif phz <= CRIT_TOL:
        source = "critical-coalescence"
    else:
        source = "branch-point"
    return Location(y, xs, r, source, phz, phz)


def _branch_newton(sys: NetworkSystem, x, z, r=None):
    """Polish the branch point with 2-D Newton on (Phi, Phi_z), staying below z = r(x)."""
    x, z = mpf(x), mpf(z)
    tol = mpmath.mpf(10) ** (-mpmath.mp.dps + 6)
    for _ in range(60):
        j = sys.phi_jet(x, z, 2)
        f1, f2 = j[(0, 0)], j[(0, 1)]
        a, b, c, d = j[(1, 0)], j[(0, 1)], j[(1, 1)], j[(0, 2)]
        det = a * d - b * c
        if det == 0:
            raise SingularityError("singular Jacobian at the branch point")
        dx = (f1 * d - b * f2) / det
        dz = (a * f2 - c * f1) / det
        if r is not None:
            for _ in range(60):
                if z - dz < r(x - dx):
                    break
                dx, dz = dx / 2, dz / 2
        x, z = x - dx, z - dz
        if abs(dx) <= tol * abs(x) and abs(dz) <= tol * abs(z):
            break
    else:
        raise SingularityError("2-D Newton for the branch point did not converge")
    if abs(sys.phi(x, z)) > mpmath.mpf("1e-12") or abs(sys.phi_z(x, z)) > mpmath.mpf("1e-12"):
        raise SingularityError("branch point residual too large")
    return x, z


# ---------------------------------------------------------- B expansions

def _partial_x_B(spec, R, D0, y):
    """dB/dx at R; the D-derivative drops out because dB/dD = x^2 Phi / 2."""
    X, var = lift(mpf(R), 1)
    b = b_explicit(X, D0, y, spec.evaluate(X, D0, (0, 0)))
    return coefficient(b, var, 1)


def expand_branch(spec: ClassSpec, loc: Location) -> dict:
    """D1, B0..B3 at a branch point."""
    R, D0, y = loc.R, loc.D0, loc.y
    Tz = spec.evaluate(R, D0, (0, 1))
    Tzzz = spec.evaluate(R, D0, (0, 3))
    Txz = spec.evaluate(R, D0, (1, 1))
    num = 2 * R * Txz - 4 * Tz + R ** 3 * D0 ** 2 / (1 + R * D0) ** 2
    den = R ** 2 / (2 * (1 + D0) ** 2) + R ** 3 / (1 + R * D0) ** 3 + Tzzz
    if den == 0:
        raise SingularityError("degenerate branch point: vanishing denominator in D1")
    D1 = -mpmath.sqrt(num / den)
    B3 = (4 * Tz - 2 * R * Txz - R ** 3 * D0 ** 2 / (1 + R * D0) ** 2) * D1 / 3
    B0 = b_explicit(R, D0, y, spec.evaluate(R, D0, (0, 0)))
    B2 = -R * _partial_x_B(spec, R, D0, y)
    B1 = 2 * R ** 2 * phi_expr(spec, R, D0, y) * D1
    return {"D1": D1, "B0": B0, "B1": B1, "B2": B2, "B3": B3}


def _local_solution(ring: SingularRing, y, Phi: Series, nx: int):
    """Z(X) = X W(X) solving Phi(X, Z) = 0 with W(0) = sqrt(-P/Q) > 0."""
    tol = mpmath.mpf(10) ** (-mpmath.mp.dps + 10)
    coeffs = []
    for i, ci in enumerate(Phi.c):
        ci = ci if isinstance(ci, Series) else Series([ci], nx, "X")
        coeffs.append(ci)
    P = coefficient(coeffs[0], "X", 2)
    Q = coefficient(coeffs[2], "X", 0)
    if not Q > 0:
        raise SingularityError("Q = Phi_{2,0} must be positive at a T-singular point")
    head = Series([0 * P] + list(coeffs[0].c[1:]), var="X").shift_down(2, tol)

    def F(W):
        acc = head
        Xp = 1
        for i in range(2, len(coeffs)):
            acc = acc + coeffs[i] * Xp * W ** i
            Xp = Xp * ring.X
        return acc

    def dF(W):
        acc = 0
        Xp = 1
        for i in range(2, len(coeffs)):
            acc = acc + i * coeffs[i] * Xp * W ** (i - 1)
            Xp = Xp * ring.X
        return acc

    W = Series([mpmath.sqrt(-P / Q)], nx - 2, "X")
    for _ in range(nx.bit_length() + 3):
        W = W - F(W) / dF(W)
    return Series(list((ring.X * W).c), nx - 1, "X"), P, Q


def _subs_Z(val: Series, Zx: Series):
    """Replace Z by the X-series Zx in a Z-series with X-series coefficients."""
    acc = 0
    for c in reversed(val.c):
        acc = acc * Zx + c
    return acc


def expand_tsing(spec: ClassSpec, loc: Location, nx: int = 6, nz: int = 8) -> dict:
    """P, Q, D2, D3 and B0, B2, B4, B5 at a T-singular point.

    The stated closed forms come from the coefficients T_{i,j} and r', r''.
    A second, independent route solves Phi(X, Z) = 0 term by term and
    expands B directly; its coefficients are returned as well.
    """
    R, D0, y = loc.R, loc.D0, loc.y
    ring = SingularRing(spec, R, nx=nx, nz=nz)
    Tgrid = ring.grid(ring.T(0, 0))
    rX = ring.r
    r1 = -rX.c[2] / R
    r2 = 2 * rX.c[4] / R ** 2
    T = lambda i, j: Tgrid.get((i, j), 0)

    P = (-(4 * T(2, 0) + 2 * T(2, 2)) / (R ** 2 * D0) - 2 * T(2, 0) * r1 / (R * D0 ** 2)
         + R * r1 / (1 + D0) - R * D0 * (D0 + (2 + R * D0) * R * r1) / (1 + R * D0) ** 2)
    Q = (-4 * T(4, 0) / (R ** 2 * D0) + D0 / (1 + D0) - 2 * R * D0 ** 2 / (1 + R * D0)
         + R ** 2 * D0 ** 3 / (1 + R * D0) ** 2)
    out = {"P": P, "Q": Q, "r1": r1, "r2": r2,
           "T": {f"T{i}{j}": T(i, j) for (i, j) in sorted(Tgrid) if i <= 5 and j <= 4}}
    out["D2"] = D0 * P / Q - R * r1
    out["D3"] = -5 * T(5, 0) * (-P) ** mpmath.mpf(1.5) / (R ** 2 * Q ** mpmath.mpf(2.5))
    out["B0"] = (R ** 2 / 2 * (D0 + D0 ** 2 / 2) - R * D0 / 2 + mpmath.log(1 + R * D0) / 2
                 - (1 + D0) * R ** 3 * D0 ** 2 / (2 * (1 + R * D0)) + T(0, 0) + (1 + D0) / D0 * T(2, 0))
    out["B2"] = (R ** 2 * D0 * (D0 ** 2 * R - 2) / (2 * (1 + R * D0)) + T(0, 2)
                 - (2 * (1 + D0) / D0 + R * r1 / D0) * T(2, 0))
    out["B4_closed"] = (T(0, 4) + (2 * R ** 3 * D0 ** 2 - R ** 4 * D0 ** 4 + 2 * R ** 2 * D0) / (4 * (1 + R * D0) ** 2)
                        + (1 + D0 + r2) / D0 * T(2, 0) + P ** 2 / Q * R ** 2 * D0 / 4
                        + (2 * R / D0 * T(2, 0) + R ** 4 * D0 ** 2 / (2 * (1 + R * D0) ** 2)) * r1
                        + R ** 4 / 4 * (D0 / (1 + D0) - 1 / (1 + R * D0) ** 2) * r1 ** 2)
    out["B5"] = T(5, 0) * (-P / Q) ** mpmath.mpf(2.5)

    # series route
    Phi = _ring_phi(ring, y)
    Zx, Ps, Qs = _local_solution(ring, y, Phi, nx)
    D = rX * (1 - Zx * Zx)
    Tx = _subs_Z(ring.T(0, 0), Zx)
    B = b_explicit(ring.x, D, y, Tx)
    out["series"] = {"P": Ps, "Q": Qs,
                     "D": [coefficient(D, "X", k) for k in range(4)],
                     "B": [coefficient(B, "X", k) for k in range(6)],
                     "Phi30": coefficient(Phi.c[3], "X", 0)}
    out["B4"] = out["series"]["B"][4]
    out["B1"] = out["series"]["B"][1]
    out["B3"] = out["series"]["B"][3]
    return out


def expand_critical(spec: ClassSpec, loc: Location, nx: int = 4, nz: int = 6) -> dict:
    """D_{4/3} at a coalescence of the branch point with the singular curve."""
    R, D0, y = loc.R, loc.D0, loc.y
    ring = SingularRing(spec, R, nx=nx, nz=nz)
    Phi = _ring_phi(ring, y)
    c0 = Phi.c[0]
    Phi02 = coefficient(c0, "X", 2)
    Phi20 = coefficient(Phi.c[2], "X", 0)
    Phi30 = coefficient(Phi.c[3], "X", 0)
    if Phi30 == 0:
        raise SingularityError("Phi_{3,0} vanishes; the critical expansion is degenerate")
    ratio = -Phi02 / Phi30
    return {"Phi02": Phi02, "Phi20": Phi20, "Phi30": Phi30,
            "Z23": mpmath.cbrt(ratio),
            "D43": -D0 * mpmath.cbrt(ratio) ** 2,
            "B_exponent": Fraction(5, 3)}


# ------------------------------------------------------- connected level

def _tau(sys: NetworkSystem, R, X0=None):
    """Root of x B''(x) = 1 in (0, R), safeguarded Newton.

    B'' grows like 1/sqrt(1 - x/R), so the iteration runs in X = sqrt(1 - x/R)
    on 1/(x B''(x)) - 1, which is close to linear in X.
    """
    R = mpf(R)
    lo, hi = mpmath.mpf(0), mpmath.mpf(1)     # bracket in X
    X = X0 if X0 is not None and 0 < X0 < 1 else mpmath.mpf(1) / 2
    tol = mpmath.mpf(10) ** (-mpmath.mp.dps + 6)
    for _ in range(200):
        x = R * (1 - X * X)
        b = sys.B_derivs(x, 3)
        g = x * b[2]
        f = 1 / g - 1
        if f > 0:
            hi = X
        else:
            lo = X
        d = (b[2] + x * b[3]) / g ** 2 * 2 * R * X
        Xn = X - f / d if d > 0 else (lo + hi) / 2
        if not lo < Xn < hi:
            Xn = (lo + hi) / 2
        if abs(Xn - X) <= tol * X:
            X = Xn
            return R * (1 - X * X)
        X = Xn
    raise SingularityError("tau B''(tau) = 1 did not converge")


@dataclass
class SingularReport:
    y: object
    R: object
    D0: object
    source: str
    case: str
    B_exponent: Fraction
    C_exponent: Fraction
    rho: object
    S: object
    tau: object = None
    D: dict = field(default_factory=dict)
    B: dict = field(default_factory=dict)
    C: dict = field(default_factory=dict)
    G: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    phi_z: object = None
    gap: object = None
    notes: list = field(default_factory=list)

    @property
    def rho_inv(self):
        return 1 / self.rho

    @property
    def R_inv(self):
        return 1 / self.R

    def as_dict(self):
        return asdict(self)


def connected_level(sys: NetworkSystem, loc: Location, Bexp: dict, B_exponent) -> dict:
    """tau or R mode, S, rho and the singular coefficients of C and G."""
    R, y = loc.R, loc.y
    out = {}
    if B_exponent == Fraction(5, 2):
        S = 2 * Bexp["B4"] / R
    else:
        S = mpmath.inf     # B'' blows up at R
    out["S"] = S
    if S > 1 + CRIT_TOL:
        tau = _tau(sys, R)
        b = sys.B_derivs(tau, 3)
        rho = tau * mpmath.exp(-b[1])
        C0 = tau * (1 + mpmath.log(rho) - mpmath.log(tau)) + b[0]
        C2 = -tau
        C3 = mpmath.mpf(2) / 3 * mpmath.sqrt(2 * rho * mpmath.exp(b[1]) / (tau * b[3] - tau * b[2] ** 2 + 2 * b[2]))
        e = mpmath.exp(C0)
        out.update(mode="tau", tau=tau, rho=rho, Bt=b, C_exponent=Fraction(3, 2),
                   C={"C0": C0, "C2": C2, "C3": C3},
                   G={"G0": e, "G2": C2 * e, "G3": C3 * e})
        return out
    B0, B2, B4, B5 = Bexp["B0"], Bexp["B2"], Bexp["B4"], Bexp["B5"]
    Bp = -B2 / R
    rho = R * mpmath.exp(-Bp)
    C0 = R * (1 + mpmath.log(rho) - mpmath.log(R)) + B0
    out.update(mode="R", tau=None, rho=rho)
    if S < 1 - CRIT_TOL:
        alpha = 1 - 2 * B4 / R
        C2, C4, C5 = -R, -R * B4 / (2 * B4 - R), B5 * alpha ** mpmath.mpf(-2.5)
        e = mpmath.exp(C0)
        out.update(C_exponent=Fraction(5, 2), C={"C0": C0, "C2": C2, "C4": C4, "C5": C5},
                   G={"G0": e, "G2": C2 * e, "G4": (C4 + C2 ** 2 / 2) * e, "G5": C5 * e})
        return out
    # psi'(R) = 0: psi = psi0 + psi3 Z^3 with psi3 = 5 rho B5 / (2R)
    psi3 = 5 * rho * B5 / (2 * R)
    F43 = -R * mpmath.cbrt(-rho / psi3) ** 2
    out.update(C_exponent=Fraction(5, 3), C={"C0": C0, "F43": F43, "C103": -3 * F43 / 5},
               G={"G0": mpmath.exp(C0)})
    return out


def _Bprime_on_curve(spec, loc):
    """B'(R) at a T-singular point; the D-dependence drops out, so D = D0."""
    ring = SingularRing(spec, loc.R, nx=2, nz=2)
    T = ring.T(0, 0)
    Z2 = 1 - loc.D0 / ring.r
    Tx = T.c[0] + T.c[2] * Z2
    b = b_explicit(ring.x, loc.D0, loc.y, Tx)
    return -coefficient(b, "X", 2) / loc.R


def growth(spec: ClassSpec, y=1, mode: str | None = None, hint: dict | None = None):
    """(rho, R, source) at y without the full expansion.

    mode is "tau" or "R"; by default it follows from the singularity
    source (branch points always give tau, T-singular points need S).
    hint is a dict shared between calls at nearby y; it carries the last
    location and tau as starting points and is updated in place.
    """
    y = mpf(y)
    sys = NetworkSystem(spec, y)
    hint = {} if hint is None else hint
    loc = find_R(spec, y, sys, hint.get("loc"))
    hint["loc"] = loc
    if mode is None:
        mode = "tau" if loc.source != "T-singularity" else None
    if mode is None:
        rep = analyse(spec, y)
        return rep.rho, rep.R, loc.source
    if mode == "tau":
        tau = _tau(sys, loc.R, hint.get("X"))
        hint["X"] = mpmath.sqrt(1 - tau / loc.R)
        return tau * mpmath.exp(-sys.B_derivs(tau, 1)[1]), loc.R, loc.source
    if loc.source == "T-singularity":
        Bp = _Bprime_on_curve(spec, loc)
    else:
        Bp = _partial_x_B(spec, loc.R, loc.D0, y)
    return loc.R * mpmath.exp(-Bp), loc.R, loc.source


def case_label(loc: Location, B_exponent, S) -> str:
    if loc.source == "critical-coalescence":
        return "3.1"
    if not has_curve_exponent(B_exponent):
        return "1"
    if abs(S - 1) <= CRIT_TOL:
        return "3.2"
    return "2.1" if S < 1 else "2.2"


def has_curve_exponent(B_exponent) -> bool:
    return B_exponent == Fraction(5, 2)


def analyse(spec: ClassSpec, y=1, strict: bool = False) -> SingularReport:
    """Locate, classify and expand at fixed y."""
    y = mpf(y)
    sys = NetworkSystem(spec, y)
    loc = find_R(spec, y, sys)
    notes = []
    D, B, extra = {}, {}, {}
    if loc.source == "branch-point":
        B = expand_branch(spec, loc)
        D = {"D0": loc.D0, "D1": B.pop("D1")}
        B_exponent = Fraction(3, 2)
    elif loc.source == "T-singularity":
        ex = expand_tsing(spec, loc)
        D = {"D0": loc.D0, "D2": ex["D2"], "D3": ex["D3"]}
        B = {k: ex[k] for k in ("B0", "B1", "B2", "B3", "B4", "B5")}
        extra = {k: ex[k] for k in ("P", "Q", "r1", "r2", "B4_closed", "T", "series")}
        B_exponent = Fraction(5, 2)
    else:
        ex = expand_critical(spec, loc)
        D = {"D0": loc.D0, "D43": ex["D43"]}
        extra = ex
        B_exponent = Fraction(5, 3)
        B = {"B0": b_explicit(loc.R, loc.D0, y, _T00_on_curve(spec, loc))}
    if B_exponent == Fraction(5, 3):
        lvl = {"S": mpmath.inf}
        tau = _tau(sys, loc.R)
        b = sys.B_derivs(tau, 3)
        rho = tau * mpmath.exp(-b[1])
        C0 = tau * (1 + mpmath.log(rho) - mpmath.log(tau)) + b[0]
        C3 = mpmath.mpf(2) / 3 * mpmath.sqrt(2 * rho * mpmath.exp(b[1]) / (tau * b[3] - tau * b[2] ** 2 + 2 * b[2]))
        e = mpmath.exp(C0)
        lvl.update(mode="tau", tau=tau, rho=rho, Bt=b, C_exponent=Fraction(3, 2),
                   C={"C0": C0, "C2": -tau, "C3": C3}, G={"G0": e, "G2": -tau * e, "G3": C3 * e})
    else:
        lvl = connected_level(sys, loc, B, B_exponent)
    if "Bt" in lvl:
        extra["B_at_tau"] = lvl["Bt"]
    label = case_label(loc, B_exponent, lvl["S"])
    if loc.source == "branch-point" and has_curve(spec):
        label = "2.3"
        notes.append("T has a 5/2 singular curve, but the branch point comes first")
    if abs(loc.phi_z) <= 10 * CRIT_TOL and loc.source != "branch-point" and loc.source != "critical-coalescence":
        notes.append("near-critical: Phi_z at the crossing is within tolerance")
    if label == "3.2" and strict:
        raise NearCriticalError("S is within tolerance of 1")
    return SingularReport(
        y=y, R=loc.R, D0=loc.D0, source=loc.source, case=label,
        B_exponent=B_exponent, C_exponent=lvl["C_exponent"], rho=lvl["rho"], S=lvl["S"],
        tau=lvl.get("tau"), D=D, B=B, C=lvl["C"], G=lvl["G"], extra=extra,
        phi_z=loc.phi_z, gap=loc.gap, notes=notes)


def _T00_on_curve(spec, loc):
    ring = SingularRing(spec, loc.R, nx=0, nz=2)
    return leading(ring.T(0, 0))
