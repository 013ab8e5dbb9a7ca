"""Truncated power series over an arbitrary coefficient ring.

Coefficients may be ints/Fractions (exact mode), mpmath numbers or floats
(floating mode), or themselves Series in another variable, which gives
bivariate and nested series for free.  A Series of order N stores the
coefficients of x^0..x^N and never extends past N.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath


class SeriesError(ValueError):
    pass


def depth(a) -> int:
    return a.depth if isinstance(a, Series) else 0


def is_exact(a) -> bool:
    if isinstance(a, Series):
        return all(is_exact(c) for c in a.c)
    return isinstance(a, (int, Fraction))


def _to_mp(a):
    if isinstance(a, Fraction):
        return mpmath.mpf(a.numerator) / a.denominator
    return mpmath.mpf(a) if isinstance(a, int) else a


def _rational_root(a: Fraction, q: int):
    """Exact q-th root of a nonnegative rational, or None."""
    if a < 0:
        return None
    out = []
    for part in (a.numerator, a.denominator):
        r = round(part ** (1.0 / q)) if part < 2**1000 else None
        if r is None:
            return None
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**q == part:
                out.append(cand)
                break
        else:
            return None
    return Fraction(out[0], out[1])


def cexp(a):
    if isinstance(a, Series):
        return a.exp()
    if a == 0:
        return 1 if isinstance(a, (int, Fraction)) else a + 1
    if isinstance(a, (int, Fraction)):
        raise SeriesError("exp of an exact series needs a zero constant term")
    return mpmath.exp(_to_mp(a))


def clog(a):
    if isinstance(a, Series):
        return a.log()
    if a == 1:
        return 0 if isinstance(a, (int, Fraction)) else a - 1
    if isinstance(a, (int, Fraction)):
        raise SeriesError("log of an exact series needs constant term 1")
    return mpmath.log(_to_mp(a))


def cpow(a, p):
    """a**p for a scalar or series, p int or Fraction."""
    if isinstance(a, Series):
        return a ** p
    if isinstance(p, int) or (isinstance(p, Fraction) and p.denominator == 1):
        p = int(p)
        if isinstance(a, int) and p < 0:
            return Fraction(1, a**-p)
        return a**p
    if isinstance(a, (int, Fraction)):
        p = Fraction(p)
        root = _rational_root(Fraction(a), p.denominator)
        if root is not None:
            return root ** p.numerator
        return mpmath.power(_to_mp(a), mpmath.mpf(p.numerator) / p.denominator)
    if isinstance(p, Fraction):
        p = mpmath.mpf(p.numerator) / p.denominator
    return mpmath.power(a, p)


def csqrt(a):
    return cpow(a, Fraction(1, 2))


def _is_zero(a, tol) -> bool:
    if isinstance(a, Series):
        return all(_is_zero(c, tol) for c in a.c)
    if tol and not isinstance(a, (int, Fraction)):
        return abs(a) <= tol
    return a == 0


class Series:
    """Truncated power series sum c[n] var^n, n = 0..order."""

    __slots__ = ("c", "var", "depth")

    def __init__(self, coeffs, order: int | None = None, var: str = "x"):
        c = list(coeffs)
        if order is not None:
            if order < 0:
                raise SeriesError("negative truncation order")
            c = c[: order + 1] + [0] * (order + 1 - len(c))
        if not c:
            raise SeriesError("empty series")
        self.c = tuple(c)
        self.var = var
        self.depth = 1 + max(depth(a) for a in c)

    # construction helpers
    @classmethod
    def variable(cls, order: int, var: str = "x", at=0, one=1) -> "Series":
        return cls([at, one], order, var)

    @classmethod
    def constant(cls, value, order: int, var: str = "x") -> "Series":
        return cls([value], order, var)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    def __len__(self):
        return len(self.c)

    def __iter__(self):
        return iter(self.c)

    def __getitem__(self, n):
        return self.c[n]

    def __repr__(self):
        return f"Series({list(self.c)!r}, var={self.var!r})"

    def __eq__(self, other):
        if isinstance(other, Series):
            return self.var == other.var and self.c == other.c
        return NotImplemented

    def __hash__(self):
        return hash((self.var, self.c))

    def truncate(self, order: int) -> "Series":
        return Series(self.c, order, self.var)

    def map(self, fn) -> "Series":
        return Series([fn(a) for a in self.c], var=self.var)

    # coercion: another Series of the same depth must share the variable;
    # anything shallower is a scalar of the coefficient ring.
    def _split(self, other):
        if isinstance(other, Series):
            if other.depth > self.depth:
                return None, None
            if other.depth == self.depth:
                if other.var != self.var:
                    raise SeriesError(f"variable mismatch: {self.var} vs {other.var}")
                return other, False
        return other, True

    def __add__(self, other):
        o, scalar = self._split(other)
        if o is None:
            return other + self
        if scalar:
            return Series((self.c[0] + o,) + self.c[1:], var=self.var)
        n = min(self.order, o.order)
        return Series([a + b for a, b in zip(self.c[: n + 1], o.c[: n + 1])], var=self.var)

    __radd__ = __add__

    def __neg__(self):
        return Series([-a for a in self.c], var=self.var)

    def __sub__(self, other):
        o, scalar = self._split(other)
        if o is None:
            return (-other) + self
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o, scalar = self._split(other)
        if o is None:
            return other * self
        if scalar:
            return Series([a * o for a in self.c], var=self.var)
        n = min(self.order, o.order)
        a, b = self.c, o.c
        if _all_mpf(a, n) and _all_mpf(b, n):
            return Series([mpmath.fdot(a[: k + 1], b[k::-1]) for k in range(n + 1)], var=self.var)
        out = []
        for k in range(n + 1):
            s = 0
            for i in range(k + 1):
                ai = a[i]
                if isinstance(ai, Series) or ai != 0:
                    s = s + ai * b[k - i]
            out.append(s)
        return Series(out, var=self.var)

    def __rmul__(self, other):
        return self * other

    def valuation(self, tol=0) -> int:
        for n, a in enumerate(self.c):
            if not _is_zero(a, tol):
                return n
        return len(self.c)

    def shift_down(self, k: int, tol=0) -> "Series":
        """Divide by var^k; the lowest k coefficients must vanish."""
        if k == 0:
            return self
        if self.valuation(tol) < k:
            raise SeriesError(f"cannot divide by {self.var}^{k}")
        return Series(self.c[k:], var=self.var)

    def shift_up(self, k: int) -> "Series":
        """Multiply by var^k keeping the order."""
        return Series([0] * k + list(self.c), self.order, self.var)

    def inverse(self) -> "Series":
        a = self.c
        if _is_zero(a[0], 0):
            raise SeriesError("inverse of a series with zero constant term")
        inv0 = _recip(a[0])
        b = [inv0]
        fast = _all_mpf(a, len(a)) and type(inv0) is mpmath.mpf
        for n in range(1, len(a)):
            if fast:
                s = mpmath.fdot(a[1: n + 1], b[n - 1::-1])
            else:
                s = 0
                for k in range(1, n + 1):
                    s = s + a[k] * b[n - k]
            b.append(-s * inv0)
        return Series(b, var=self.var)

    def __truediv__(self, other):
        o, scalar = self._split(other)
        if o is None:
            return other.inverse() * self
        if scalar:
            if isinstance(o, int):
                o = Fraction(o)
            if isinstance(o, Series):
                return self * o.inverse()
            return Series([a / o for a in self.c], var=self.var)
        v = o.valuation()
        if v:
            # cancel a common power of the variable; the result loses v orders
            return self.shift_down(v) / o.shift_down(v)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, p):
        if isinstance(p, int) or (isinstance(p, Fraction) and p.denominator == 1):
            p = int(p)
            if p < 0:
                return self.inverse() ** (-p)
            out = Series.constant(1 + 0 * self.c[0], self.order, self.var)
            base = self
            while p:
                if p & 1:
                    out = out * base
                p >>= 1
                if p:
                    base = base * base
            return out
        return self.rpow(p)

    def rpow(self, p, tol=0) -> "Series":
        """Real power via the Miller recurrence; a leading var^v factor needs p*v integral."""
        v = self.valuation(tol)
        if v > self.order:
            raise SeriesError("power of the zero series")
        if v:
            pv = Fraction(p) * v
            if pv.denominator != 1 or pv < 0:
                raise SeriesError(f"{self.var}^{v} raised to {p} is not a power series")
            inner = Series(self.c[v:], var=self.var).rpow(p)
            return Series([0] * int(pv) + list(inner.c), self.order - v + int(pv), self.var)
        a = self.c
        f0 = cpow(a[0], p)
        inv_a0 = _recip(a[0])
        pp = p if not isinstance(p, float) else mpmath.mpf(p)
        f = [f0]
        for n in range(1, len(a)):
            s = 0
            for k in range(1, n + 1):
                if isinstance(a[k], Series) or a[k] != 0:
                    s = s + ((pp + 1) * k - n) * a[k] * f[n - k]
            f.append(s * inv_a0 / n)
        return Series(f, var=self.var)

    def sqrt(self) -> "Series":
        return self.rpow(Fraction(1, 2))

    def exp(self) -> "Series":
        a = self.c
        f = [cexp(a[0])]
        fast = _all_mpf(a, len(a)) and type(f[0]) is mpmath.mpf
        ka = [k * v for k, v in enumerate(a)] if fast else None
        for n in range(1, len(a)):
            if fast:
                f.append(mpmath.fdot(ka[1: n + 1], f[n - 1::-1]) / n)
                continue
            s = 0
            for k in range(1, n + 1):
                if isinstance(a[k], Series) or a[k] != 0:
                    s = s + k * a[k] * f[n - k]
            f.append(s / n if not isinstance(s, int) else Fraction(s, n))
        return Series(f, var=self.var)

    def log(self) -> "Series":
        a = self.c
        if _is_zero(a[0], 0):
            raise SeriesError("log of a series with zero constant term")
        inv_a0 = _recip(a[0])
        f = [clog(a[0])]
        for n in range(1, len(a)):
            s = 0
            for k in range(1, n):
                if isinstance(f[k], Series) or f[k] != 0:
                    s = s + k * f[k] * a[n - k]
            s = s / n if not isinstance(s, int) else Fraction(s, n)
            f.append((a[n] - s) * inv_a0)
        return Series(f, var=self.var)

    def derivative(self) -> "Series":
        if self.order == 0:
            return Series([0], var=self.var)
        return Series([n * self.c[n] for n in range(1, len(self.c))], var=self.var)

    def integrate(self, constant=0) -> "Series":
        out = [constant]
        for n, a in enumerate(self.c):
            out.append(a / (n + 1) if not isinstance(a, int) else Fraction(a, n + 1))
        return Series(out, var=self.var)

    def compose(self, inner: "Series") -> "Series":
        """self(inner) by Horner; inner must have zero constant term."""
        if not isinstance(inner, Series):
            raise SeriesError("compose expects a series argument")
        if not _is_zero(inner.c[0], 0):
            raise SeriesError("compose with nonzero constant term")
        n = min(self.order, inner.order)
        acc = Series.constant(self.c[n], n, inner.var)
        for k in range(n - 1, -1, -1):
            acc = acc * inner + self.c[k]
        return acc

    def __call__(self, point):
        """Evaluate the truncated polynomial at a point (Horner)."""
        acc = self.c[-1]
        for a in reversed(self.c[:-1]):
            acc = acc * point + a
        return acc

    def revert(self) -> "Series":
        """Compositional inverse of a series with a(0)=0, a'(0)!=0."""
        if not _is_zero(self.c[0], 0):
            raise SeriesError("revert needs a zero constant term")
        if self.order < 1 or _is_zero(self.c[1], 0):
            raise SeriesError("revert needs a nonzero linear coefficient")
        one = 1 + 0 * self.c[1]
        ident = Series([0 * one, one], self.order, self.var)
        phi = ident / self  # x / a(x), loses one order
        return lagrange(phi, self.order)

    def to_list(self):
        return list(self.c)


def _all_mpf(c, n):
    mpf_type = mpmath.mpf
    return all(type(v) is mpf_type for v in c[: n + 1])


def _recip(a):
    if isinstance(a, Series):
        return a.inverse()
    if isinstance(a, int):
        return Fraction(1, a)
    return 1 / a


def lagrange(phi: Series, order: int) -> Series:
    """Solve F = x*phi(F): [x^n]F = (1/n)[u^(n-1)] phi(u)^n."""
    out = [0]
    power = Series.constant(1 + 0 * phi.c[0], phi.order, phi.var)
    for n in range(1, order + 1):
        power = power * phi
        c = power.c[n - 1]
        out.append(c / n if not isinstance(c, int) else Fraction(c, n))
    return Series(out, var=phi.var)


def egf_counts(s: Series, scale=1) -> list:
    """n! * [x^n] s as exact integers where possible."""
    out = []
    fact = 1
    for n, a in enumerate(s.c):
        if n:
            fact *= n
        v = a * fact * (scale**n if scale != 1 else 1)
        if isinstance(v, Fraction) and v.denominator == 1:
            v = v.numerator
        out.append(v)
    return out


class BiSeries:
    """Rectangular grid view of a series in x with y-series coefficients."""

    def __init__(self, grid, nx: int, ny: int):
        self.grid = [list(row) for row in grid]
        self.nx, self.ny = nx, ny

    @classmethod
    def from_nested(cls, s: Series, ny: int) -> "BiSeries":
        grid = []
        for a in s.c:
            if isinstance(a, Series):
                row = list(a.c[: ny + 1]) + [0] * (ny + 1 - len(a.c))
            else:
                row = [a] + [0] * ny
            grid.append(row)
        return cls(grid, s.order, ny)

    def to_nested(self, xvar="x", yvar="y") -> Series:
        return Series([Series(row, var=yvar) for row in self.grid], var=xvar)

    def __getitem__(self, nk):
        n, k = nk
        return self.grid[n][k]

    def dx(self) -> "BiSeries":
        rows = [[n * a for a in self.grid[n]] for n in range(1, self.nx + 1)] or [[0] * (self.ny + 1)]
        return BiSeries(rows, max(self.nx - 1, 0), self.ny)

    def dy(self) -> "BiSeries":
        rows = [[k * row[k] for k in range(1, self.ny + 1)] or [0] for row in self.grid]
        return BiSeries(rows, self.nx, max(self.ny - 1, 0))

    def counts(self):
        """n! k!-free scaling: n! * coefficient (the y-exponent counts edges)."""
        out = []
        fact = 1
        for n, row in enumerate(self.grid):
            if n:
                fact *= n
            out.append([_int_if_possible(a * fact) for a in row])
        return out

    def __eq__(self, other):
        return isinstance(other, BiSeries) and self.grid == other.grid


def _int_if_possible(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def convolve_naive(a, b):
    """Reference double-loop convolution used as an oracle in tests."""
    n = min(len(a), len(b))
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n)]

