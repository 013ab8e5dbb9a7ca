from fractions import Fraction

import mpmath
import networkx as nx
import pytest

from closedgraphs.network import ExactSystem, NetworkSystem, counts, formal_y, psi_series, solve_D
from closedgraphs.oracle import class_predicate, labelled_graphs
from closedgraphs.series import BiSeries, Series, egf_counts
from closedgraphs.singular import analyse, find_R
from closedgraphs.tclass import builtin

CLASSES = ("ex-k4", "ex-w4", "ex-k5e")


@pytest.mark.parametrize("name", CLASSES + ("planar",))
def test_two_vertices(name):
    seq = counts(builtin(name), 4)
    assert seq["G"][:3] == [1, 1, 2]
    assert seq["C"][:3] == [0, 1, 1]


def test_sp_network_equation():
    # with T = 0 the network equation reduces to log((1+D)/2) = x D^2/(1+x D)
    D = solve_D(builtin("ex-k4"), 12)
    x = Series([0, 1], 12)
    lhs = ((1 + D) / 2).log()
    assert lhs == x * D * D / (1 + x * D)


@pytest.mark.parametrize("name", CLASSES)
def test_constant_term_is_y(name):
    y = Fraction(3, 7)
    assert solve_D(builtin(name), 4, y).c[0] == y


def _network_count(name, n):
    # poles 0 and 1; the pole edge is optional, adding it must give a 2-connected member
    pred = class_predicate(name)
    total = 0
    for sg in labelled_graphs(n + 2):
        if not sg.mask & 1:
            continue
        g = sg.to_nx()
        if nx.is_biconnected(g) and pred(g):
            total += 2
    return total


@pytest.mark.parametrize("n", range(1, 4))
def test_networks_against_enumeration(n):
    D = ExactSystem(builtin("ex-k4"), 4).D
    assert egf_counts(D)[n] == _network_count("ex-k4", n)


def test_triangle_is_the_only_3_block():
    es = ExactSystem(builtin("ex-k4"), 6, formal_y(15))
    grid = es.bi("B").counts()
    assert grid[3][3] == 1 and sum(grid[3]) == 1
    assert all(isinstance(v, int) and v >= 0 for row in grid for v in row)


@pytest.mark.parametrize("name", CLASSES)
def test_bd_identity(name):
    # B_y = x^2/2 (1+D)/(1+y), coefficientwise with y formal
    N = 12
    y = formal_y(N)
    es = ExactSystem(builtin(name), N, y)
    lhs = BiSeries.from_nested(es.B, N).dy()
    rhs_nested = Series([0, 0] + [c * (1 / (1 + y)) / 2 for c in (1 + es.D).c], N, "x")
    rhs = BiSeries.from_nested(rhs_nested, N - 1)
    assert lhs.grid == rhs.grid


@pytest.mark.parametrize("name", CLASSES)
def test_connected_identities(name):
    es = ExactSystem(builtin(name), 30)
    x = Series([0, 1], 30)
    comp = psi_series(es.B).compose(es.F)
    assert comp.order >= 29 and comp == x.truncate(comp.order)
    assert es.C.exp() == es.G
    # F = x C'
    assert es.F == x * es.C.derivative().truncate(30)


@pytest.mark.parametrize("name", CLASSES)
def test_counts_are_integers(name):
    es = ExactSystem(builtin(name), 14)
    for key in ("D", "B", "C", "G"):
        vals = egf_counts(getattr(es, key))
        assert all(isinstance(v, int) and v >= 0 for v in vals), key


def test_more_blocks_more_networks():
    ds = [egf_counts(ExactSystem(builtin(n), 12).D) for n in CLASSES]
    for a, b in zip(ds, ds[1:]):
        assert all(u <= v for u, v in zip(a, b))
    assert ds[0][4] < ds[1][4] < ds[2][4]


def test_pointwise_at_zero():
    sys = NetworkSystem(builtin("ex-w4"), mpmath.mpf(2))
    assert sys.eval_point("D", 0) == 2


@pytest.mark.parametrize("name", ("ex-k4", "ex-w4"))
def test_pointwise_matches_series(name):
    spec = builtin(name)
    rep = analyse(spec)
    es = ExactSystem(spec, 40)
    sys = NetworkSystem(spec, 1)
    cases = (("D", es.D, rep.R), ("B", es.B, rep.R), ("C", es.C, rep.rho), ("F", es.F, rep.rho))
    for what, series, radius in cases:
        x = radius / 10
        exact = sum(_mp(c) * x ** k for k, c in enumerate(series.c))
        got = sys.eval_point(what, x, upper=rep.tau)
        assert abs(got - exact) < 1e-10 * abs(exact), what


def _mp(c):
    c = Fraction(c)
    return mpmath.mpf(c.numerator) / c.denominator


def test_second_derivative_by_differences():
    spec = builtin("ex-k4")
    sys = NetworkSystem(spec, 1)
    x = find_R(spec).R / 2
    h = mpmath.mpf("1e-6")
    fd = (sys.B(x + h) - 2 * sys.B(x) + sys.B(x - h)) / h ** 2
    assert abs(sys.eval_point("B''", x) - fd) < 1e-6
    assert sys.eval_point("B'''", x) > 0
