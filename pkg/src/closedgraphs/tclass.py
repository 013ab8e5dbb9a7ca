"""Closed graph classes described by the GF T(x,z) of their 3-connected members."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from . import expr as E
from .planar import PlanarComponent, SingularCurve
from .series import BiSeries, Series, is_exact


class ClassError(ValueError):
    pass


class MissingDataError(ClassError):
    """A class needs an externally supplied component that is not available."""


COMPONENTS = {"Tp": PlanarComponent(), "rp": SingularCurve()}
ARITY = {name: comp.arity for name, comp in COMPONENTS.items()}


@dataclass(frozen=True)
class SingularData:
    r: object  # expression tree in x
    exponent: Fraction
    grid: tuple = ()  # ((i, j, value), ...) for tabulated coefficients T_{i,j}
    r_text: str = ""


@dataclass(frozen=True, eq=False)
class ClassSpec:
    name: str
    kind: str  # "zero", "expr" or "tabulated"
    expr: object
    text: str = "0"
    singular: SingularData | None = None
    conditional: bool = False
    note: str = ""
    components: dict = field(default_factory=dict, repr=False)

    def derivative(self, i: int, j: int):
        return _derivative(self, i, j)

    def evaluate(self, x, z, deriv=(0, 0), ctx=None):
        val = E.evaluate(self.derivative(*deriv), {"x": x, "z": z}, self.components, ctx)
        if isinstance(val, (int, Fraction)) and not (is_exact(x) and is_exact(z)):
            val = mpmath.mpf(val.numerator) / val.denominator
        return val

    def r(self, x, ctx=None):
        if self.singular is None:
            raise ClassError(f"{self.name}: no singular curve declared")
        val = E.evaluate(self.singular.r, {"x": x}, self.components, ctx)
        if isinstance(val, (int, Fraction)) and not is_exact(x):
            val = mpmath.mpf(val.numerator) / val.denominator
        return val

    @property
    def exponent(self):
        return None if self.singular is None else self.singular.exponent

    def to_text(self) -> str:
        lines = [f"name = {self.name}", f"T = {self.text}"]
        if self.singular is not None:
            body = [f"r = {self.singular.r_text or E.to_string(self.singular.r)}",
                    f"exponent = {self.singular.exponent}"]
            body += [f"T[{i},{j}] = {v}" for i, j, v in self.singular.grid]
            lines.append("singular { " + "; ".join(body) + " }")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=256)
def _derivative(spec: ClassSpec, i: int, j: int):
    if i == 0 and j == 0:
        return spec.expr
    if j > 0:
        return E.diff(_derivative(spec, i, j - 1), "z")
    return E.diff(_derivative(spec, i - 1, j), "x")


# ------------------------------------------------------------- parsing

_LINE = re.compile(r"^\s*([A-Za-z_][\w-]*)\s*=\s*(.*?)\s*$")
_GRID = re.compile(r"^\s*T\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*=\s*(.+?)\s*$")


def parse_class(text: str, name: str | None = None) -> ClassSpec:
    """Parse a class-spec file (name = ..., T = ..., optional singular { ... })."""
    fields = {}
    singular_items = []
    lines = text.splitlines()
    k = 0
    while k < len(lines):
        raw = lines[k]
        lineno = k + 1
        k += 1
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("singular"):
            rest = stripped[len("singular"):].strip()
            if not rest.startswith("{"):
                raise E.ExprSyntaxError("expected '{' after singular", lineno, raw.find("singular") + 9)
            body, start = [rest[1:]], lineno
            while "}" not in body[-1]:
                if k >= len(lines):
                    raise E.ExprSyntaxError("unterminated singular block", start, 1)
                body.append(lines[k].split("#", 1)[0])
                k += 1
            joined = "\n".join(body)
            inside, tail = joined.split("}", 1)
            if tail.strip():
                raise E.ExprSyntaxError("unexpected text after singular block", lineno, 1)
            line = start
            for chunk_line in inside.split("\n"):
                for item in chunk_line.split(";"):
                    if item.strip():
                        singular_items.append((item.strip(), line))
                line += 1
            continue
        m = _LINE.match(stripped)
        if not m:
            raise E.ExprSyntaxError("expected 'key = value'", lineno, 1)
        key, value = m.group(1), m.group(2)
        if key not in ("name", "T"):
            raise E.ExprSyntaxError(f"unknown key {key!r}", lineno, 1)
        col = raw.index("=") + 1 + (len(raw[raw.index("=") + 1:]) - len(raw[raw.index("=") + 1:].lstrip())) + 1
        fields[key] = (value, lineno, col)
    if "T" not in fields:
        raise ClassError("class spec needs a line 'T = <expression>'")
    cname = name or (fields["name"][0] if "name" in fields else "custom")
    ttext, tline, tcol = fields["T"]
    tree = _parse_at(ttext, ("x", "z"), tline, tcol)
    singular = _parse_singular(singular_items) if singular_items else None
    return make_class(cname, ttext, tree, singular)


def _parse_at(text, variables, line, col):
    try:
        return E.parse(text, variables, ARITY, line)
    except E.ExprSyntaxError as exc:
        if exc.line == line:
            raise E.ExprSyntaxError(str(exc).split(": ", 1)[1], line, exc.col + col - 1) from None
        raise


def _parse_singular(items):
    r_tree, r_text, exponent, grid = None, "", None, []
    for item, line in items:
        g = _GRID.match(item)
        if g:
            val = E.fold_constant(E.parse(g.group(3), (), {}, line))
            if val is None:
                raise E.ExprSyntaxError("table entries must be constants", line, 1)
            grid.append((int(g.group(1)), int(g.group(2)), val))
            continue
        m = _LINE.match(item)
        if not m:
            raise E.ExprSyntaxError(f"malformed singular entry {item!r}", line, 1)
        key, value = m.group(1), m.group(2)
        if key == "r":
            r_tree, r_text = E.parse(value, ("x",), ARITY, line), value
        elif key == "exponent":
            exponent = E.fold_constant(E.parse(value, (), {}, line))
            if exponent is None:
                raise E.ExprSyntaxError("exponent must be rational", line, 1)
        else:
            raise E.ExprSyntaxError(f"unknown singular key {key!r}", line, 1)
    if r_tree is None or exponent is None:
        raise ClassError("malformed singular table: needs r and exponent")
    return SingularData(r_tree, Fraction(exponent), tuple(grid), r_text)


def make_class(name, text, tree, singular=None, note="") -> ClassSpec:
    tree = E.simplify(tree)
    used = E.calls(tree) | (E.calls(singular.r) if singular else set())
    components = {k: COMPONENTS[k] for k in used}
    kind = "zero" if tree == E.ZERO else "expr"
    if singular is not None and singular.grid and kind == "zero":
        kind = "tabulated"
    spec = ClassSpec(name, kind, tree, text, singular, bool(used), note, components)
    _check_order4(spec)
    if singular is not None and singular.exponent == Fraction(5, 2) and singular.grid:
        t50 = [v for i, j, v in singular.grid if (i, j) == (5, 0)]
        if t50 and t50[0] == 0:
            raise ClassError("exponent 5/2 declared but T[5,0] = 0")
    return spec


def _check_order4(spec: ClassSpec):
    """A 3-connected graph has at least four vertices: T = O(x^4)."""
    if spec.kind == "zero" or spec.conditional:
        return
    bi = bi_series(spec, 4, 8)
    for n in range(4):
        row = bi.grid[n]
        if any(c != 0 for c in row):
            raise ClassError(f"{spec.name}: T must be O(x^4) but has a nonzero x^{n} term")


# ------------------------------------------------------------ evaluation

def eval_T(spec: ClassSpec, x, z, orders=(1, 3)) -> dict:
    """Derivative tower {(i, j): d^i/dx^i d^j/dz^j T} for i <= orders[0], j <= orders[1]."""
    out = {}
    for i in range(orders[0] + 1):
        for j in range(orders[1] + 1):
            out[(i, j)] = spec.evaluate(x, z, (i, j))
    return out


def bi_series(spec: ClassSpec, nx: int, nz: int) -> BiSeries:
    """Exact expansion of T around the origin: grid[n][k] = [x^n z^k] T."""
    zs = Series([0, 1], nz, "z")
    zero = 0 * zs
    xs = Series([zero, 1 + zero], nx, "x")
    val = E.evaluate(spec.expr, {"x": xs, "z": zs}, spec.components)
    if not isinstance(val, Series):
        val = Series([val], nx, "x")
    return BiSeries.from_nested(val, nz)


# --------------------------------------------------------------- registry

_K5E_CORRECT = "70*z^9*x^6/720 - (1/2)*x*(log(1-z^2*x) + z^2*x + z^4*x^2/2) - x^4*z^6/8"
_K5E_TABLE = "70*z^9*x^6/720 - (1/2)*x*(log(1-z^2*x) + z^2*x + z^4*x^2/2)"

BUILTIN_TEXT = {
    "ex-k4": ("0", None, "no 3-connected members (series-parallel graphs)"),
    "ex-w4": ("z^6*x^4/24", None, "K4 only"),
    "ex-k5e": (_K5E_CORRECT, ("x^(-1/2)", 0),
               "K4, K33, the prism and the wheels W_n (n >= 4); K4 counted once"),
    "ex-k5e-table": (_K5E_TABLE, ("x^(-1/2)", 0),
                     "wheel sum started at W_3, which weights K4 by 4 (x^4 z^6/6); "
                     "this is the variant that reproduces the published constants"),
    "planar": ("Tp(x,z)", ("rp(x)", Fraction(5, 2)), "3-connected planar graphs"),
    "ex-k33": ("Tp(x,z) + z^10*x^5/120", ("rp(x)", Fraction(5, 2)), "planar 3-connected plus K5"),
    "ex-k33plus": ("Tp(x,z) + z^10*x^5/120 + 10*z^9*x^6/720", ("rp(x)", Fraction(5, 2)),
                   "planar 3-connected plus K5 and K33"),
}


@lru_cache(maxsize=None)
def builtin(name: str) -> ClassSpec:
    if name not in BUILTIN_TEXT:
        raise ClassError(f"unknown class {name!r}; built-ins: {', '.join(BUILTIN_TEXT)}")
    text, sing, note = BUILTIN_TEXT[name]
    tree = E.parse(text, ("x", "z"), ARITY)
    singular = None
    if sing is not None:
        singular = SingularData(E.parse(sing[0], ("x",), ARITY), Fraction(sing[1]), (), sing[0])
    return make_class(name, text, tree, singular, note)


# classes whose 3-connected series is not shipped; pass a spec file instead
EXTERNAL = {
    "cubic-planar": "3-connected cubic planar graphs",
    "triangulations-k6": "planar triangulations together with K6",
}


def resolve(name_or_path: str) -> ClassSpec:
    if name_or_path in BUILTIN_TEXT:
        return builtin(name_or_path)
    if name_or_path in EXTERNAL:
        raise MissingDataError(f"{name_or_path} ({EXTERNAL[name_or_path]}) requires external T: "
                                   "supply it with --spec <file>")
    try:
        with open(name_or_path, encoding="utf-8") as fh:
            return parse_class(fh.read())
    except FileNotFoundError:
        raise ClassError(f"unknown class {name_or_path!r}; built-ins: {', '.join(BUILTIN_TEXT)}") from None


# -------------------------------------------------- local singular ring

class SingularRing:
    """Arithmetic near (R, r(R)) in X = sqrt(1 - x/R) and Z = sqrt(1 - z/r(x)).

    Values are Z-series whose coefficients are X-series.  Components such
    as Tp supply their own expansion; closed-form parts are evaluated by
    plain series arithmetic (fractional powers factor out powers of Z).
    """

    singular = True

    def __init__(self, spec: ClassSpec, R, nx: int = 8, nz: int = 8):
        self.spec, self.R, self.nx, self.nz = spec, R, nx, nz
        X = Series([0, 1], nx, "X")
        self.zeroX = 0 * X
        self.X = X
        self.x = R * (1 - X * X)
        self.Z = Series([self.zeroX, 1 + self.zeroX], nz, "Z")
        self.r = spec.r(self.x, self)
        if not isinstance(self.r, Series):
            self.r = self.r + self.zeroX
        self.z = self.r * (1 - self.Z * self.Z)
        self._cache = {}

    def expand_component(self, comp, deriv):
        i, j = deriv
        if i:
            raise ClassError("x-derivatives of a component are not available in the singular ring")
        key = (id(comp), j)
        if key not in self._cache:
            val = self._raw(comp, with_t0=(j == 0))
            for _ in range(j):
                val = self.dz(val)
            self._cache[key] = val
        return self._cache[key]

    def _raw(self, comp, with_t0):
        # the constant term T_0 is a quadrature; z-derivatives never need it
        full, partial = (id(comp), "T0"), (id(comp), "noT0")
        if full in self._cache:
            return self._cache[full]
        if not with_t0 and partial in self._cache:
            return self._cache[partial]
        T, _ = comp.singular_expansion(self.x, self.nz, with_t0)
        val = Series([t + self.zeroX for t in T], self.nz, "Z")
        self._cache[full if with_t0 else partial] = val
        return val

    def dz(self, f: Series) -> Series:
        """d/dz at fixed x equals -1/(2 r Z) d/dZ."""
        tol = mpmath.mpf(10) ** (-mpmath.mp.dps + 10)
        g = f.derivative().shift_down(1, tol)
        return g * (-1 / (2 * self.r))

    def T(self, i=0, j=0):
        if i:
            raise ClassError("only z-derivatives are expanded in the singular ring")
        if self.spec.singular is not None and self.spec.singular.grid and self.spec.kind == "tabulated":
            val = self._from_grid()
            for _ in range(j):
                val = self.dz(val)
            return val
        val = self.spec.evaluate(self.x, self.z, (0, j), ctx=self)
        if not isinstance(val, Series) or val.depth < 2:
            val = Series([val + self.zeroX], self.nz, "Z")
        return val

    def _from_grid(self):
        rows = {}
        for i, j, v in self.spec.singular.grid:
            rows.setdefault(i, [0] * (self.nx + 1))
            if j <= self.nx:
                rows[i][j] = v
        coeffs = [Series(rows.get(i, [0]), self.nx, "X") for i in range(self.nz + 1)]
        return Series(coeffs, self.nz, "Z")

    def grid(self, series: Series, imax=None, jmax=None):
        """{(i, j): coefficient of Z^i X^j}."""
        out = {}
        for i, row in enumerate(series.c[: (imax or self.nz) + 1]):
            row = row if isinstance(row, Series) else Series([row], self.nx, "X")
            for j, v in enumerate(row.c[: (jmax or self.nx) + 1]):
                out[(i, j)] = v
        return out
