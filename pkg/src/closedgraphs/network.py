"""Networks D, 2-connected B, connected C and all graphs G of a closed class.

The network equation Phi(x, D) = 0 with

    Phi(x,z) = (2/x^2) T_z(x,z) - log((1+z)/(1+y)) + x z^2/(1+x z)

determines D(x,y); B follows from the explicit integral

    B = T(x,D) - xD/2 + log(1+xD)/2 + (x^2/2)(D + D^2/2 + (1+D) log((1+y)/(1+D))),

and C, G from x C' = x exp(B'(x C')) and G = exp(C).

Two representations share the class spec: exact truncated series for
counting, and pointwise evaluation (with jets) for singularity work.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .numerics import NumericError, leading, lift, coefficient, mpf, scalar_newton, bisect
from .series import BiSeries, Series, egf_counts, lagrange
from .tclass import ClassSpec


# ------------------------------------------------------------- formulas

def phi(spec: ClassSpec, x, z, y, tz=None):
    """Phi(x, z) on numbers or series with nonzero constant term in x."""
    if tz is None:
        tz = spec.evaluate(x, z, (0, 1))
    return 2 * tz / (x * x) - mpmath_log((1 + z) / (1 + y)) + x * z * z / (1 + x * z)


def phi_z(spec: ClassSpec, x, z, y, tzz=None):
    if tzz is None:
        tzz = spec.evaluate(x, z, (0, 2))
    return 2 * tzz / (x * x) + z / (1 + z) - 1 / (1 + x * z) ** 2


def b_explicit(x, D, y, T):
    """B in terms of D and T = T(x, D)."""
    return (T - x * D / 2 + mpmath_log(1 + x * D) / 2
            + x * x / 2 * (D + D * D / 2 + (1 + D) * mpmath_log((1 + y) / (1 + D))))


def mpmath_log(v):
    if isinstance(v, Series):
        return v.log()
    if isinstance(v, (int, Fraction)):
        if v == 1:
            return 0
        return mpmath.log(mpf(v))
    return mpmath.log(v)


# --------------------------------------------------------- exact series

def _ring_variable(order, y):
    """The variable x over the coefficient ring of y (numbers or y-series)."""
    zero = 0 * y
    return Series([zero, 1 + zero], order, "x")


def formal_y(order: int) -> Series:
    return Series([0, 1], order, "y")


def solve_D(spec: ClassSpec, order: int, y=1) -> Series:
    """Exact series of D(x, y) to x^order; y a number or a formal y-series."""
    if order < 1:
        raise ValueError("order must be at least 1")
    N = order
    x = _ring_variable(N, y)
    x2 = _ring_variable(N + 2, y)

    def tz_over_x2(D, j):
        D2 = Series(D.c, N + 2, "x")
        val = spec.evaluate(x2, D2, (0, j))
        if not isinstance(val, Series) or val.var != "x":
            if val == 0 or (isinstance(val, Series) and all(c == 0 for c in val.c)):
                return 0
            raise ValueError("T_z must be O(x^4)")
        if val.valuation() < 2:
            raise ValueError(f"{spec.name}: T is not O(x^4)")
        return val.shift_down(2).truncate(N)

    def F(D):
        return 2 * tz_over_x2(D, 1) - ((1 + D) / (1 + y)).log() + x * D * D / (1 + x * D)

    def dF(D):
        return 2 * tz_over_x2(D, 2) + D / (1 + D) - 1 / (1 + x * D) ** 2

    D = Series([y + 0 * y], N, "x")
    for _ in range(N.bit_length() + 2):
        D = D - F(D) / dF(D)
    res = F(D)
    if not all(_is_zero(c) for c in res.c) and all(_exact(c) for c in res.c):
        raise NumericError("network equation not solved exactly")
    return D


def _is_zero(c):
    if isinstance(c, Series):
        return all(_is_zero(a) for a in c.c)
    return c == 0


def _exact(c):
    if isinstance(c, Series):
        return all(_exact(a) for a in c.c)
    return isinstance(c, (int, Fraction))


def build_B(spec: ClassSpec, D: Series, y=1) -> Series:
    N = D.order
    x = _ring_variable(N, y)
    T = spec.evaluate(x, D, (0, 0))
    return b_explicit(x, D, y, T)


def build_CG(B: Series):
    """(C, G, F) from B via Lagrange inversion of psi(u) = u exp(-B'(u))."""
    N = B.order
    Bp = B.derivative()
    F = lagrange(Bp.exp(), N)
    C = F.shift_down(1).integrate()
    G = C.exp()
    return C, G, F


@dataclass
class ExactSystem:
    """Counting-mode network system at fixed numeric y or formal y."""

    spec: ClassSpec
    order: int
    y: object = 1
    D: Series = field(init=False)
    B: Series = field(init=False)
    C: Series = field(init=False)
    G: Series = field(init=False)
    F: Series = field(init=False)

    def __post_init__(self):
        self.D = solve_D(self.spec, self.order, self.y)
        self.B = build_B(self.spec, self.D, self.y)
        self.C, self.G, self.F = build_CG(self.B)

    def counts(self, which="G"):
        return egf_counts(getattr(self, which))

    def bi(self, which="G") -> BiSeries:
        ny = self.y.order if isinstance(self.y, Series) else 0
        return BiSeries.from_nested(getattr(self, which), ny)


def counts(spec: ClassSpec, nmax: int):
    """Exact integer sequences g_n, c_n, b_n (index n = vertices) at y = 1."""
    es = ExactSystem(spec, max(nmax, 2), 1)
    return {k: [int(v) for v in es.counts(k)[: nmax + 1]] for k in ("G", "C", "B")}


def psi_series(B: Series) -> Series:
    u = _ring_variable(B.order, B.c[0])
    return u * (-B.derivative()).exp()


# ------------------------------------------------------------- pointwise

class NetworkSystem:
    """Pointwise evaluation of D, B, C, F = xC' at a fixed numeric y."""

    GRID = 64

    def __init__(self, spec: ClassSpec, y=1):
        self.spec = spec
        self.y = mpf(y)
        self._solved = []  # (x, D) pairs on the physical branch

    # Phi and friends on generic arguments
    def phi(self, x, z):
        return phi(self.spec, x, z, self.y)

    def phi_z(self, x, z):
        return phi_z(self.spec, x, z, self.y)

    def phi_jet(self, x, z, order=2):
        """Partials {(i, j): d^i_x d^j_z Phi} for i + j <= order."""
        X, vx = lift(mpf(x), order)
        Z, vz = lift(mpf(z), order, X)
        val = self.phi(X, Z)
        out = {}
        for j in range(order + 1):
            cz = coefficient(val, vz, j)
            for i in range(order + 1 - j):
                out[(i, j)] = coefficient(cz, vx, i) * mpmath.factorial(i) * mpmath.factorial(j)
        return out

    def _newton_D(self, x, z0):
        z = mpf(z0)
        eps = mpmath.mpf(10) ** (-mpmath.mp.dps + 4)
        for it in range(200):
            f = self.phi(x, z)
            d = self.phi_z(x, z)
            if d >= 0:
                raise NumericError(f"left the physical branch at x={x}")
            # next to the fold Phi_z is tiny and the step never settles below rounding
            if it >= 20 and abs(f) <= eps / 100:
                return z
            step = f / d
            z -= step
            if abs(step) <= abs(z) * eps:
                return z
        raise NumericError(f"Newton for D did not converge at x={x} (residual {self.phi(x, z)})")

    def D(self, x):
        """D(x) on the physical branch by warm-started continuation from x = 0."""
        x = mpf(x)
        if x == 0:
            return self.y
        best = None
        for xs, ds in self._solved:
            if xs <= x and (best is None or xs > best[0]):
                best = (xs, ds)
        if best is not None and best[0] == x:
            return best[1]
        start_x, z = best if best is not None else (mpmath.mpf(0), self.y)
        if start_x == 0:
            grid = [x * mpmath.mpf(2) ** (k - self.GRID) for k in range(1, self.GRID + 1)]
            grid = [g for g in grid if g > x * mpmath.mpf(10) ** -12]
        else:
            steps = 2 if x - start_x <= x / 20 else 8
            grid = [start_x + (x - start_x) * k / steps for k in range(1, steps + 1)]
        for g in grid:
            z = self._newton_D(g, z)
        self._solved.append((x, z))
        if len(self._solved) > 256:
            self._solved = self._solved[-128:]
        return z

    def D_jet(self, x, order):
        """D(x + e) as a series in e."""
        x = mpf(x)
        d0 = self.D(x)
        X, var = lift(x, order)
        Dj = Series([d0], order, var)
        for _ in range(order.bit_length() + 2):
            Dj = Dj - self.phi(X, Dj) / self.phi_z(X, Dj)
        return X, Dj, var

    def B_jet(self, x, order):
        X, Dj, var = self.D_jet(x, order)
        T = self.spec.evaluate(X, Dj, (0, 0))
        return b_explicit(X, Dj, self.y, T), var

    def B_derivs(self, x, order=3):
        """[B, B', ..., B^(order)] at x."""
        Bj, var = self.B_jet(x, order)
        return [coefficient(Bj, var, k) * mpmath.factorial(k) for k in range(order + 1)]

    def B(self, x):
        x = mpf(x)
        D = self.D(x)
        return b_explicit(x, D, self.y, self.spec.evaluate(x, D, (0, 0)))

    def F(self, x, upper):
        """Solve psi(F) = x for F in (0, upper) where psi(u) = u exp(-B'(u))."""
        x = mpf(x)
        if x == 0:
            return x

        def psi(u):
            if u == 0:
                return -x
            return u * mpmath.exp(-self.B_derivs(u, 1)[1]) - x

        def dpsi(u):
            if u == 0:
                return mpmath.mpf(1)
            b = self.B_derivs(u, 2)
            return mpmath.exp(-b[1]) * (1 - u * b[2])

        lo, hi = mpmath.mpf(0), mpf(upper)
        u = scalar_newton(psi, dpsi, x, lo=lo, hi=hi)
        return u

    def C_from_F(self, x, Fx):
        """C(x) = F (1 + log(x/F)) + B(F)."""
        if x == 0:
            return mpmath.mpf(0)
        return Fx * (1 + mpmath.log(x / Fx)) + self.B(Fx)

    def eval_point(self, what: str, x, upper=None):
        x = mpf(x)
        if what == "D":
            return self.D(x)
        if what in ("B", "B'", "B''", "B'''"):
            return self.B_derivs(x, 3)[len(what) - 1]
        if what in ("F", "C"):
            if upper is None:
                raise ValueError("F and C need the upper end of the inversion interval")
            Fx = self.F(x, upper)
            return Fx if what == "F" else self.C_from_F(x, Fx)
        raise ValueError(f"unknown quantity {what!r}")
