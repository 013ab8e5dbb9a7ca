from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from closedgraphs import expr as E
from closedgraphs.series import Series


@pytest.mark.parametrize("text, col", [("x+*z", 3), ("x + q", 5), ("(x", 3)])
def test_syntax_errors_carry_position(text, col):
    with pytest.raises(E.ExprSyntaxError) as err:
        E.parse(text)
    assert err.value.line == 1 and err.value.col == col


def test_exact_rational_evaluation():
    tree = E.parse("(1/2)*x^2 + z/3")
    assert E.evaluate(tree, {"x": Fraction(1, 3), "z": 1}) == Fraction(1, 18) + Fraction(1, 3)


def test_rational_power():
    tree = E.parse("(1-z)^(5/2)")
    assert mpmath.almosteq(E.evaluate(tree, {"x": 0, "z": mpmath.mpf("0.19")}), mpmath.mpf("0.81") ** 2.5)


def test_domain_guard():
    with pytest.raises(E.DomainError):
        E.evaluate(E.parse("log(1 - z^2*x)"), {"x": mpmath.mpf(2), "z": mpmath.mpf(1)})
    with pytest.raises(E.DomainError):
        E.evaluate(E.parse("x/z"), {"x": 1, "z": 0})


def test_diff_polynomial():
    d = E.diff(E.parse("z^6*x^4/24"), "z")
    assert E.evaluate(d, {"x": 2, "z": 3}) == Fraction(3 ** 5 * 2 ** 4, 4)


coef = st.fractions(min_value=-3, max_value=3, max_denominator=5)


@given(coef, coef, st.integers(min_value=1, max_value=4))
def test_diff_matches_series(a, b, k):
    # d/dz of a*z^k*exp(b*z) read off from a series expansion at z = 0
    tree = E.parse(f"({a.numerator}/{a.denominator})*z^{k}*exp(({b.numerator}/{b.denominator})*z)")
    z = Series([0, 1], 6, "z")
    s = E.evaluate(tree, {"x": 0, "z": z})
    d = E.evaluate(E.diff(tree, "z"), {"x": 0, "z": z})
    s, d = as_series(s), as_series(d)
    assert list(d)[:6] == list(s.derivative())[:6]


def as_series(v):
    # a zero coefficient simplifies the tree down to a plain constant
    return v if isinstance(v, Series) else Series([v], 6, "z")


def test_round_trip_to_string():
    tree = E.parse("70*z^9*x^6/720 - (1/2)*x*(log(1-z^2*x)+z^2*x+z^4*x^2/2)")
    again = E.parse(E.to_string(tree))
    env = {"x": mpmath.mpf("0.3"), "z": mpmath.mpf("0.7")}
    assert mpmath.almosteq(E.evaluate(tree, env), E.evaluate(again, env), 1e-25)
