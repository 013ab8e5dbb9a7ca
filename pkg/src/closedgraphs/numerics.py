"""Shared numerical helpers: precision, Newton/bisection, lifting to jets."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath.calculus.quadrature import GaussLegendre

from .series import Series, depth

DPS = 30
NEWTON_TOL = mpmath.mpf("1e-13")
NEWTON_MAXIT = 200


class NumericError(ArithmeticError):
    pass


def set_precision(dps: int):
    global DPS
    DPS = dps
    mpmath.mp.dps = dps


def mpf(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def leading(v):
    """Constant term of a (possibly nested) series."""
    while isinstance(v, Series):
        v = v.c[0]
    return v


def total_order(v) -> int:
    n = 0
    while isinstance(v, Series):
        n += v.order
        v = v.c[0]
    return n


def lift(value, order: int, *others):
    """value + d as a series in a fresh outer variable d, nested above `others`."""
    base = value
    for o in others:
        if depth(o) > depth(base):
            base = base + 0 * o
    var = f"d{depth(base) + 1}"
    return Series([base, 1], order, var), var


def coefficient(v, var: str, k: int):
    """k-th coefficient of v in the lifted variable var."""
    if isinstance(v, Series) and v.var == var:
        return v.c[k] if k < len(v.c) else 0
    return v if k == 0 else 0


def scalar_newton(f, df, x0, tol=None, maxit=NEWTON_MAXIT, lo=None, hi=None):
    """Newton with an optional bracket used for bisection fallback."""
    tol = NEWTON_TOL if tol is None else tol
    x = mpf(x0)
    for _ in range(maxit):
        fx = f(x)
        d = df(x)
        step = fx / d if d != 0 else None
        xn = x - step if step is not None else None
        if xn is None or (lo is not None and not lo < xn < hi):
            if lo is None:
                raise NumericError(f"Newton left the domain at x={x}")
            xn = (lo + hi) / 2
        if lo is not None:
            if (f(lo) < 0) == (fx < 0):
                lo = x
            else:
                hi = x
        if abs(xn - x) <= abs(x) * mpmath.mpf(10) ** (-DPS + 3) and abs(fx) < tol:
            return xn
        x = xn
    if abs(f(x)) < tol:
        return x
    raise NumericError(f"Newton did not converge (residual {f(x)})")


def bisect(f, lo, hi, tol=None, maxit=400):
    """Bisection on a sign change; returns midpoint of the final bracket."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo < 0) == (fhi < 0):
        raise NumericError("no sign change in bracket")
    tol = tol if tol is not None else mpmath.mpf(10) ** (-DPS + 5)
    for _ in range(maxit):
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if abs(hi - lo) <= tol * max(1, abs(mid)):
            break
    return (lo + hi) / 2


def series_newton(g, dg, start, order_hint: int):
    """Lift a scalar root to a series root: U <- U - g(U)/dg(U)."""
    u = start
    its = max(1, order_hint).bit_length() + 2
    for _ in range(its):
        u = u - g(u) / dg(u)
    return u


@lru_cache(maxsize=8)
def gauss_legendre(degree: int, dps: int):
    """Nodes and weights on [0, 1]."""
    with mpmath.workdps(dps):
        nodes = GaussLegendre(mpmath.mp).calc_nodes(degree, mpmath.mp.prec)
        return tuple(((x + 1) / 2, w / 2) for x, w in nodes)
