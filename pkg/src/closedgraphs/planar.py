"""Generating function of labelled 3-connected planar graphs.

T_p(x,z) (x marks vertices, z edges) comes from rooted 3-connected maps.
With U = x z (1+V)^2 and V = z (1+U)^2,

    M(x,z) = x^2 z^2 (1/(1+xz) + 1/(1+z) - 1 - (1+U)^2 (1+V)^2 / (1+U+V)^3)

counts rooted maps, and 4 z T_z = M because each graph with k edges has
4k rootings (two embeddings, 2k root darts).  T itself is the z-integral of
T_z, taken in the parameter V along a fixed x, where the integrand stays
analytic up to the singular curve 4UV = (1+U)(1+V).

Every routine accepts mpmath numbers or (nested) Series, so jets and the
local expansions at the singular curve come from the same code.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath

from .numerics import (
    DPS, NumericError, coefficient, gauss_legendre, leading, lift, mpf,
    series_newton, total_order,
)
from .series import Series

QUAD_DEGREE = 6  # 96 Gauss-Legendre nodes


# ---------------------------------------------------------------- exact

@lru_cache(maxsize=4)
def exact_coefficients(nmax: int):
    """P_n(z) with T_p = sum_n P_n(z) x^n, as tuples of Fractions in z."""
    kz = 3 * nmax + 3
    zs = Series([0, 1], kz, "z")
    zero = 0 * zs
    x = Series([zero, 1 + zero], nmax, "x")
    U = Series([zero], nmax, "x")
    V = Series([zs], nmax, "x")
    for _ in range(nmax + 1):
        U = x * zs * (1 + V) ** 2
        V = zs * (1 + U) ** 2
    inner = (1 + x * zs).inverse() + (1 + zs).inverse() - 1 - (1 + U) ** 2 * (1 + V) ** 2 * ((1 + U + V) ** 3).inverse()
    tz = x * x * zs * inner / 4
    out = []
    for n in range(nmax + 1):
        poly = tz.c[n] if isinstance(tz.c[n], Series) else Series([tz.c[n]], kz, "z")
        t = poly.integrate()
        coeffs = list(t.c[: 3 * n + 1])
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        out.append(tuple(Fraction(c) for c in coeffs))
    return tuple(out)


def _poly_deriv(p, j):
    for _ in range(j):
        p = [k * p[k] for k in range(1, len(p))]
    return p


def exact_eval(deriv, x, z):
    """T_p partials on exact series: x is the variable series, z any series."""
    i, j = deriv
    N = x.order
    P = exact_coefficients(N + i)
    terms = []
    for n in range(i, N + i + 1):
        poly = _poly_deriv(list(P[n]), j)
        if not poly:
            terms.append(0)
            continue
        acc = poly[-1]
        for a in reversed(poly[:-1]):
            acc = acc * z + a
        ff = 1
        for m in range(n - i + 1, n + 1):
            ff *= m
        terms.append(acc * ff)
    # sum_n terms[n-i] x^(n-i)
    total = 0
    xp = 1
    for k, t in enumerate(terms[: N + 1]):
        total = total + t * xp
        xp = xp * x
    return total


# ------------------------------------------------------------- analytic

def _lift_const(c, like):
    return c + 0 * like


_LAST_U = {}  # warm start: last (x, z, U) solved


def _seed_U(x0, z0):
    last = _LAST_U.get("p")
    if last is not None:
        lx, lz, lu = last
        if abs(lx - x0) <= lx / 20 and abs(lz - z0) <= lz / 20:
            return lu
    return x0 * z0 * (1 + z0) ** 2


def solve_U(x, z):
    """Physical root of U = x z (1 + z (1+U)^2)^2."""
    x0, z0 = leading(x), leading(z)
    g = lambda u: u - x0 * z0 * (1 + z0 * (1 + u) ** 2) ** 2
    dg = lambda u: 1 - 4 * x0 * z0 * z0 * (1 + u) * (1 + z0 * (1 + u) ** 2)
    u = _seed_U(x0, z0)
    for _ in range(200):
        step = g(u) / dg(u)
        u -= step
        if u < 0 or not mpmath.isfinite(u):
            raise NumericError("no physical solution for U (point outside the domain)")
        if abs(step) <= abs(u) * mpmath.mpf(10) ** (-mpmath.mp.dps + 2):
            break
    if dg(u) <= 0:
        raise NumericError("point beyond the singular curve")
    _LAST_U["p"] = (x0, z0, u)
    if not isinstance(x, Series) and not isinstance(z, Series):
        return u
    G = lambda U: U - x * z * (1 + z * (1 + U) ** 2) ** 2
    dG = lambda U: 1 - 4 * x * z * z * (1 + U) * (1 + z * (1 + U) ** 2)
    return series_newton(G, dG, _lift_const(u, x * z), total_order(x * z))


def _inner(x, z, U, V):
    return 1 / (1 + x * z) + 1 / (1 + z) - 1 - (1 + U) ** 2 * (1 + V) ** 2 / (1 + U + V) ** 3


def tz_from_UV(x, z, U, V):
    return x * x * z * _inner(x, z, U, V) / 4


def t_z(x, z):
    U = solve_U(x, z)
    return tz_from_UV(x, z, U, z * (1 + U) ** 2)


def U_on_curve(x, V, seed=None):
    """Root U of U (1+U)^2 = x V (1+V)^2 continuing the branch U ~ x V."""
    x0, v0 = leading(x), leading(V)
    rhs = x0 * v0 * (1 + v0) ** 2
    u = seed if seed is not None else (rhs ** (mpmath.mpf(1) / 3) if rhs > 1 else rhs)
    for _ in range(200):
        step = (u * (1 + u) ** 2 - rhs) / ((1 + u) * (1 + 3 * u))
        u -= step
        if abs(step) <= abs(u) * mpmath.mpf(10) ** (-mpmath.mp.dps + 2) + mpmath.mpf(10) ** (-mpmath.mp.dps * 2):
            break
    if not isinstance(x, Series) and not isinstance(V, Series):
        return u
    G = lambda U: U * (1 + U) ** 2 - x * V * (1 + V) ** 2
    dG = lambda U: (1 + U) * (1 + 3 * U)
    return series_newton(G, dG, _lift_const(u, x * V), total_order(x * V))


def _integrand(x, V, U):
    dU = x * (1 + V) * (1 + 3 * V) / ((1 + U) * (1 + 3 * U))
    z = V / (1 + U) ** 2
    dz = (1 + U - 2 * V * dU) / (1 + U) ** 3
    return tz_from_UV(x, z, U, V) * dz


def t_value(x, z=None, v_end=None):
    """T_p(x,z) by Gauss-Legendre in V from 0 to V(z) (or to v_end)."""
    if v_end is None:
        U = solve_U(x, z)
        v_end = z * (1 + U) ** 2
    total = 0
    seed = None
    for t, w in gauss_legendre(QUAD_DEGREE, mpmath.mp.dps):
        V = t * v_end
        U = U_on_curve(x, V, seed)
        seed = leading(U)
        total = total + w * _integrand(x, V, U)
    return total * v_end


# -------------------------------------------------------- singular curve

def _x_of_U(u):
    v = (1 + u) / (3 * u - 1)
    return u * (1 + u) ** 2 / (v * (1 + v) ** 2)


def singular_point(x):
    """(U0, V0, r) on the singular curve 4UV = (1+U)(1+V) at abscissa x."""
    x0 = leading(x)
    if not 0 < x0:
        raise NumericError("singular curve needs x > 0")
    f = lambda u: _x_of_U(u) - x0
    third = mpmath.mpf(1) / 3
    # x(U) is increasing on U > 1/3 and vanishes like (U - 1/3)^3 there:
    # bisect geometrically in U - 1/3, then polish with Newton
    lo, hi = mpmath.mpf(10) ** -12, mpmath.mpf(2) / 3
    while f(third + hi) < 0:
        hi *= 2
    while f(third + lo) > 0:
        lo /= 1000
    while hi / lo > 1 + mpmath.mpf("1e-6"):
        mid = mpmath.sqrt(lo * hi)
        if f(third + mid) > 0:
            hi = mid
        else:
            lo = mid
    u = third + mpmath.sqrt(lo * hi)
    eps = mpmath.mpf(10) ** (-mpmath.mp.dps + 3)
    for _ in range(30):
        step = f(u) / _dx_of_U(u)
        u -= step
        if abs(step) <= eps * u:
            break
    if isinstance(x, Series):
        u = _series_U0(x, u)
    V = (1 + u) / (3 * u - 1)
    return u, V, V / (1 + u) ** 2


def _series_U0(x, u0):
    # x (U) is analytic and increasing for U > 1/3; Newton on x(U) - x
    G = lambda U: _x_of_U(U) - x
    return series_newton(G, _dx_of_U, _lift_const(u0, x), total_order(x))


def _dx_of_U(U):
    V = (1 + U) / (3 * U - 1)
    dV = -4 / (3 * U - 1) ** 2
    num = U * (1 + U) ** 2
    den = V * (1 + V) ** 2
    dnum = (1 + U) * (1 + 3 * U)
    dden = (1 + V) * (1 + 3 * V) * dV
    return (dnum * den - num * dden) / den ** 2


def r_of_x(x):
    return singular_point(x)[2]


def singular_coefficients(x, nz: int = 8, with_t0: bool = True):
    """T_i(x), i = 0..nz, with T(x,z) = sum T_i(x) Z^i and Z = sqrt(1 - z/r(x)).

    Returns (list of T_i, r).  T_1 = T_3 = 0 up to rounding.  T_0 needs a
    quadrature; pass with_t0=False when only z-derivatives are wanted.
    """
    U0, V0, r = singular_point(x)
    m = nz  # order in the local parameter w = V - V0
    V, var = lift(V0, m)
    U = U_on_curve(x, V, seed=leading(U0))
    z = V / (1 + U) ** 2
    tzw = tz_from_UV(x, z, U, V)
    r = z.c[0]
    s = (r - z) / r  # Z^2 as a series in w, exact zero constant term
    s = Series([0 * r] + list(s.c[1:]), var=var)
    tol = mpmath.mpf(10) ** (-mpmath.mp.dps + 8)
    q = s.shift_down(2, tol)
    # Z = -w sqrt(q(w)) is positive on the physical side w < 0
    phi = Series([0 * r] + list((-q.sqrt()).c), var=var)
    a = tzw.compose(phi.revert())
    T = [t_value(x, v_end=V0) if with_t0 else 0 * r]
    T.append(0 * r)
    for k in range(0, m - 1):
        T.append(-2 * r * a.c[k] / (k + 2))
    return T[: nz + 1], r


# --------------------------------------------------------- component API

class PlanarComponent:
    """Callable used by the expression evaluator for Tp(x,z)."""

    arity = 2

    def __call__(self, deriv, args, ctx=None):
        x, z = args
        if ctx is not None and getattr(ctx, "singular", False):
            return ctx.expand_component(self, deriv)
        if isinstance(x, Series) and x.var == "x" and x.c[0] == 0 and _exactish(x):
            return exact_eval(deriv, x, z)
        return self.partial(deriv, x, z)

    def partial(self, deriv, x, z):
        i, j = deriv
        if i:
            X, var = lift(x, i, z)
            val = self.partial((0, j), X, z)
            return coefficient(val, var, i) * mpmath.factorial(i)
        if j == 0:
            return t_value(x, z)
        if j == 1:
            return t_z(x, z)
        Z, var = lift(z, j - 1, x)
        val = t_z(x, Z)
        return coefficient(val, var, j - 1) * mpmath.factorial(j - 1)

    def singular_expansion(self, x, nz, with_t0=True):
        return singular_coefficients(x, nz, with_t0)


class SingularCurve:
    """r(x) for the planar component, callable as rp(x)."""

    arity = 1

    def __call__(self, deriv, args, ctx=None):
        (x,) = args
        (i,) = deriv
        if i:
            X, var = lift(x, i)
            return coefficient(r_of_x(X), var, i) * mpmath.factorial(i)
        return r_of_x(x)


def _exactish(x):
    return all(isinstance(c, (int, Fraction)) or isinstance(c, Series) for c in x.c)
