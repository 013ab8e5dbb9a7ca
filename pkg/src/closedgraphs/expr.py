"""Small expression language for T(x,z): parser, evaluator, symbolic derivative.

Grammar (usual precedence, ^ binds tightest and is right associative):

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom (("^" | "**") unary)?
    atom   := number | name | name "(" expr ("," expr)* ")" | "(" expr ")"

Exponents must fold to a rational constant.  Functions: log, exp, sqrt.
Externally supplied components are called like functions, e.g. Tp(x,z).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .series import Series, clog, cexp, cpow, is_exact


class ExprSyntaxError(ValueError):
    def __init__(self, msg, line=1, col=1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col = line, col


class DomainError(ValueError):
    pass


FUNCS = ("log", "exp", "sqrt")


# ---------------------------------------------------------------- nodes

@dataclass(frozen=True)
class Const:
    value: Fraction

    def __str__(self):
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Op:
    op: str  # + - * /
    a: object
    b: object

    def __str__(self):
        return f"({self.a} {self.op} {self.b})"


@dataclass(frozen=True)
class Neg:
    a: object

    def __str__(self):
        return f"(-{self.a})"


@dataclass(frozen=True)
class Pow:
    a: object
    p: Fraction

    def __str__(self):
        p = self.p
        ps = str(p.numerator) if p.denominator == 1 else f"({p.numerator}/{p.denominator})"
        return f"({self.a}^{ps})"


@dataclass(frozen=True)
class Func:
    name: str
    a: object

    def __str__(self):
        return f"{self.name}({self.a})"


@dataclass(frozen=True)
class Call:
    """External component with a multi-index of partial derivatives."""
    name: str
    args: tuple
    deriv: tuple

    def __str__(self):
        args = ", ".join(map(str, self.args))
        if any(self.deriv):
            return f"{self.name}[{','.join(map(str, self.deriv))}]({args})"
        return f"{self.name}({args})"


ZERO, ONE = Const(Fraction(0)), Const(Fraction(1))


def const(v) -> Const:
    return Const(Fraction(v))


# --------------------------------------------------------------- parser

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^(),\[\]]))")


def _tokenize(text: str, line0=1):
    toks = []
    line, col0, pos = line0, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:]
            if not rest.strip():
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", line, bad - col0 + 1)
        start = m.start(m.lastindex)
        toks.append((m.lastindex, m.group(m.lastindex), line, start - col0 + 1))
        pos = m.end()
    toks.append((0, "", line, len(text) - col0 + 1))
    return toks


class _Parser:
    def __init__(self, text, variables, calls, line=1):
        self.toks = _tokenize(text, line)
        self.i = 0
        self.variables = variables
        self.calls = calls

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ExprSyntaxError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2], tok[3])
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != 0:
            raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2], tok[3])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = Op(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = Op(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.unary())
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            tok = self.take()
            expo = self.unary()
            val = fold_constant(expo)
            if val is None:
                raise ExprSyntaxError("exponent must be a rational constant", tok[2], tok[3])
            return Pow(base, val)
        return base

    def atom(self):
        kind, text, line, col = self.take()
        if kind == 1:
            return Const(Fraction(text))
        if kind == 2:
            if self.peek()[1] == "(":
                if text not in FUNCS and text not in self.calls:
                    raise ExprSyntaxError(f"unknown function {text!r}", line, col)
                self.take("(")
                args = [self.expr()]
                while self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.take(")")
                if text in FUNCS:
                    if len(args) != 1:
                        raise ExprSyntaxError(f"{text} takes one argument", line, col)
                    return Func(text, args[0])
                arity = self.calls[text]
                if len(args) != arity:
                    raise ExprSyntaxError(f"{text} takes {arity} arguments", line, col)
                return Call(text, tuple(args), (0,) * arity)
            if text not in self.variables:
                raise ExprSyntaxError(f"unknown symbol {text!r}", line, col)
            return Var(text)
        if text == "(":
            node = self.expr()
            self.take(")")
            return node
        raise ExprSyntaxError(f"unexpected {text or 'end of input'!r}", line, col)


def parse(text: str, variables=("x", "z"), calls=None, line=1):
    """Parse an expression; `calls` maps external component names to arity."""
    return simplify(_Parser(text, set(variables), calls or {}, line).parse())


# ------------------------------------------------------- simplification

def fold_constant(node):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Neg):
        v = fold_constant(node.a)
        return None if v is None else -v
    if isinstance(node, Op):
        a, b = fold_constant(node.a), fold_constant(node.b)
        if a is None or b is None:
            return None
        if node.op == "/" and b == 0:
            return None
        return {"+": a + b, "-": a - b, "*": a * b, "/": a / b if b else None}[node.op]
    if isinstance(node, Pow):
        a = fold_constant(node.a)
        if a is None:
            return None
        if node.p.denominator == 1 and (a != 0 or node.p >= 0):
            return a ** int(node.p)
    return None


def simplify(node):
    if isinstance(node, (Const, Var)):
        return node
    if isinstance(node, Call):
        return Call(node.name, tuple(simplify(a) for a in node.args), node.deriv)
    if isinstance(node, Func):
        return Func(node.name, simplify(node.a))
    if isinstance(node, Neg):
        a = simplify(node.a)
        if isinstance(a, Const):
            return Const(-a.value)
        if isinstance(a, Neg):
            return a.a
        return Neg(a)
    if isinstance(node, Pow):
        a = simplify(node.a)
        if node.p == 1:
            return a
        if node.p == 0:
            return ONE
        v = fold_constant(Pow(a, node.p))
        return Const(v) if v is not None else Pow(a, node.p)
    a, b = simplify(node.a), simplify(node.b)
    if isinstance(a, Const) and isinstance(b, Const):
        v = fold_constant(Op(node.op, a, b))
        if v is not None:
            return Const(v)
    op = node.op
    if op == "+":
        if a == ZERO:
            return b
        if b == ZERO:
            return a
    elif op == "-":
        if b == ZERO:
            return a
        if a == ZERO:
            return simplify(Neg(b))
    elif op == "*":
        if a == ZERO or b == ZERO:
            return ZERO
        ca, ra = _split_const(a)
        cb, rb = _split_const(b)
        c = ca * cb
        rest = ra if rb is None else (rb if ra is None else Op("*", ra, rb))
        return _scaled(c, rest)
    elif op == "/":
        if a == ZERO:
            return ZERO
        if b == ONE:
            return a
        if isinstance(b, Const) and b.value != 0:
            ca, ra = _split_const(a)
            return _scaled(ca / b.value, ra)
    return Op(op, a, b)


def _split_const(n):
    """n = c * rest with c rational; rest is None when n is constant."""
    if isinstance(n, Const):
        return n.value, None
    if isinstance(n, Neg):
        c, r = _split_const(n.a)
        return -c, r
    if isinstance(n, Op) and n.op == "*":
        ca, ra = _split_const(n.a)
        cb, rb = _split_const(n.b)
        rest = ra if rb is None else (rb if ra is None else Op("*", ra, rb))
        return ca * cb, rest
    return Fraction(1), n


def _scaled(c, rest):
    if rest is None:
        return Const(c)
    if c == 0:
        return ZERO
    if c == 1:
        return rest
    if c == -1:
        return Neg(rest)
    return Op("*", Const(c), rest)


# ----------------------------------------------------------- derivative

def diff(node, v: str):
    """Symbolic partial derivative with respect to variable v."""
    return simplify(_diff(node, v))


def _diff(node, v):
    if isinstance(node, Const):
        return ZERO
    if isinstance(node, Var):
        return ONE if node.name == v else ZERO
    if isinstance(node, Neg):
        return Neg(_diff(node.a, v))
    if isinstance(node, Op):
        a, b = node.a, node.b
        da, db = _diff(a, v), _diff(b, v)
        if node.op in "+-":
            return Op(node.op, da, db)
        if node.op == "*":
            return Op("+", Op("*", da, b), Op("*", a, db))
        if simplify(db) == ZERO:
            return Op("/", da, b)
        return Op("/", Op("-", Op("*", da, b), Op("*", a, db)), Pow(b, Fraction(2)))
    if isinstance(node, Pow):
        return Op("*", Op("*", Const(node.p), Pow(node.a, node.p - 1)), _diff(node.a, v))
    if isinstance(node, Func):
        da = _diff(node.a, v)
        if node.name == "log":
            return Op("/", da, node.a)
        if node.name == "exp":
            return Op("*", node, da)
        return Op("/", da, Op("*", Const(Fraction(2)), node))
    if isinstance(node, Call):
        total = ZERO
        for k, arg in enumerate(node.args):
            darg = simplify(_diff(arg, v))
            if darg == ZERO:
                continue
            deriv = tuple(d + (1 if i == k else 0) for i, d in enumerate(node.deriv))
            total = Op("+", total, Op("*", Call(node.name, node.args, deriv), darg))
        return total
    raise TypeError(f"unknown node {node!r}")


def variables(node) -> set:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Const):
        return set()
    if isinstance(node, Call):
        return set().union(*(variables(a) for a in node.args))
    if isinstance(node, (Neg, Func)):
        return variables(node.a)
    if isinstance(node, Pow):
        return variables(node.a)
    return variables(node.a) | variables(node.b)


def calls(node) -> set:
    if isinstance(node, Call):
        return {node.name}.union(*(calls(a) for a in node.args))
    if isinstance(node, (Const, Var)):
        return set()
    if isinstance(node, (Neg, Func, Pow)):
        return calls(node.a)
    return calls(node.a) | calls(node.b)


# ----------------------------------------------------------- evaluation

def _real_positive(v) -> bool:
    """Domain guard for log/sqrt/fractional powers: the leading value must be > 0."""
    while isinstance(v, Series):
        v = v.c[0]
    if isinstance(v, mpmath.mpc) or isinstance(v, complex):
        return True
    return v > 0


def _leading(v):
    while isinstance(v, Series):
        v = v.c[0]
    return v


def evaluate(node, env: dict, components=None, ctx=None):
    """Evaluate over numbers or Series; components maps Call names to callables
    f(deriv, args, ctx)."""
    return compiled(node)(env, components, ctx)


# A tree is turned once into straight-line Python, one assignment per
# distinct subtree, so shared subexpressions are computed once.

_COMPILED = {}


def compiled(node):
    # keyed by identity; the node is kept alive alongside its function
    hit = _COMPILED.get(id(node))
    if hit is not None and hit[0] is node:
        return hit[1]
    fn = _compile(node)
    if len(_COMPILED) > 4096:
        _COMPILED.clear()
    _COMPILED[id(node)] = (node, fn)
    return fn


def _compile(node):
    names, consts, lines = {}, {}, []

    def emit(n):
        if n in names:
            return names[n]
        if isinstance(n, Const):
            key = f"c{len(consts)}"
            consts[key] = n.value
            names[n] = key
            return key
        if isinstance(n, Var):
            rhs = f"env[{n.name!r}]"
        elif isinstance(n, Neg):
            rhs = f"-{emit(n.a)}"
        elif isinstance(n, Op):
            a, b = emit(n.a), emit(n.b)
            if n.op == "+":
                rhs = f"_add({a}, {b})"
            elif n.op == "-":
                rhs = f"_sub({a}, {b})"
            elif n.op == "*":
                rhs = f"{a} * {b}"
            else:
                rhs = f"_div({a}, {b}, {str(n)!r})"
        elif isinstance(n, Pow) and n.p.denominator == 1 and 1 <= n.p <= 3:
            a = emit(n.a)
            rhs = " * ".join([a] * int(n.p))
        elif isinstance(n, Pow):
            key = f"c{len(consts)}"
            consts[key] = int(n.p) if n.p.denominator == 1 else n.p
            rhs = f"_pow({emit(n.a)}, {key}, {str(n)!r})"
        elif isinstance(n, Func):
            rhs = f"_func({n.name!r}, {emit(n.a)}, {str(n)!r})"
        elif isinstance(n, Call):
            args = ", ".join(emit(a) for a in n.args)
            rhs = f"_call(components, ctx, {n.name!r}, {n.deriv!r}, ({args},))"
        else:
            raise TypeError(f"unknown node {n!r}")
        var = f"t{len(lines)}"
        lines.append(f"    {var} = {rhs}")
        names[n] = var
        return var

    result = emit(node)
    src = "def _f(env, components, ctx):\n" + "\n".join(lines) + f"\n    return {result}\n"
    scope = dict(consts, _add=_add, _sub=_sub, _div=_div, _pow=_pow, _func=_func, _call=_call)
    exec(compile(src, "<expr>", "exec"), scope)
    return scope["_f"]


def _add(a, b):
    if isinstance(a, Fraction) and isinstance(b, mpmath.mpf):
        return b + a
    return a + b


def _sub(a, b):
    if isinstance(a, Fraction) and isinstance(b, mpmath.mpf):
        return -b + a
    return a - b


def _div(a, b, where):
    if not isinstance(b, Series) and b == 0:
        raise DomainError(f"division by zero in {where}")
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    if isinstance(a, Fraction) and isinstance(b, mpmath.mpf):
        a = _to_mpf(a)
    return a / b


def _pow(a, p, where):
    if type(p) is int:
        if p < 0 and not isinstance(a, Series) and a == 0:
            raise DomainError(f"pole in {where}")
        return cpow(a, p)
    if p.denominator != 1:
        if not isinstance(a, Series) and a == 0 and p > 0:
            return 0 * a
        if not isinstance(a, Series) and not _real_positive(a):
            raise DomainError(f"fractional power of a nonpositive value in {where}")
        if isinstance(a, Series):
            return a.rpow(p, tol=_tol(a))
    elif p < 0 and not isinstance(a, Series) and a == 0:
        raise DomainError(f"pole in {where}")
    return cpow(a, p)


def _func(name, a, where):
    if name == "exp":
        return cexp(a)
    if not _real_positive(a):
        raise DomainError(f"{name} of a nonpositive value in {where}")
    if name == "log":
        return clog(a)
    return cpow(a, Fraction(1, 2))


def _call(components, ctx, name, deriv, args):
    if components is None or name not in components:
        raise KeyError(f"no data supplied for component {name!r}")
    return components[name](deriv, args, ctx)


def _to_mpf(v: Fraction):
    return mpmath.mpf(v.numerator) / v.denominator


def _tol(a):
    return 0 if is_exact(a) else mpmath.mpf(10) ** (-(mpmath.mp.dps - 5))


def to_string(node) -> str:
    return str(node)
