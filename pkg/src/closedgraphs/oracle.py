"""Exhaustive enumeration of small labelled graphs in minor-closed classes.

This is the independent ground truth for the counting pipeline.  Nothing
here touches generating functions: graphs are listed (all labelled graphs
for tiny n, the unlabelled atlas weighted by n!/|Aut| up to seven
vertices) and filtered by an explicit minor test.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial

import networkx as nx
from networkx.algorithms import isomorphism

MAX_N = 7           # atlas limit
BRUTE_FORCE_N = 5   # all 2^C(n,2) labelled graphs below this


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class SmallGraph:
    """Labelled simple graph on {0..n-1}; bit k of mask is the k-th pair."""

    n: int
    mask: int

    @staticmethod
    def pairs(n):
        return list(itertools.combinations(range(n), 2))

    @classmethod
    def from_edges(cls, n, edges):
        index = {p: k for k, p in enumerate(cls.pairs(n))}
        mask = 0
        for u, v in edges:
            mask |= 1 << index[(min(u, v), max(u, v))]
        return cls(n, mask)

    def edges(self):
        return [p for k, p in enumerate(self.pairs(self.n)) if self.mask >> k & 1]

    def to_nx(self):
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g


# ------------------------------------------------------------- minors

def _wheel(k):
    g = nx.cycle_graph(k)
    g.add_edges_from((k, i) for i in range(k))
    return g


def _k5_minus_e():
    g = nx.complete_graph(5)
    g.remove_edge(0, 1)
    return g


def _k33_plus():
    g = nx.complete_bipartite_graph(3, 3)
    g.add_edge(0, 1)
    return g


MINORS = {
    "K4": nx.complete_graph(4),
    "W4": _wheel(4),
    "K5-e": _k5_minus_e(),
    "K5": nx.complete_graph(5),
    "K33": nx.complete_bipartite_graph(3, 3),
    "K33+": _k33_plus(),
}

CLASS_MINORS = {
    "ex-k4": ("K4",),
    "ex-w4": ("W4",),
    "ex-k5e": ("K5-e",),
    "planar": ("K5", "K33"),
    "ex-k33": ("K33",),
    "ex-k33plus": ("K33+",),
}


def _as_nx(g):
    return g.to_nx() if isinstance(g, SmallGraph) else g


def _contains_subgraph(big: nx.Graph, small: nx.Graph) -> bool:
    if big.number_of_nodes() < small.number_of_nodes() or big.number_of_edges() < small.number_of_edges():
        return False
    return isomorphism.GraphMatcher(big, small).subgraph_is_monomorphic()


def _partitions(items, k):
    """Assignments of items to k unlabelled nonempty blocks or to 'unused' (-1).

    Blocks are numbered in order of first use, so each partition appears once.
    """
    assign = [-1] * len(items)

    def rec(pos, used):
        remaining = len(items) - pos
        if used + remaining < k:
            return
        if pos == len(items):
            yield list(assign)
            return
        assign[pos] = -1
        yield from rec(pos + 1, used)
        for b in range(min(used + 1, k)):
            assign[pos] = b
            yield from rec(pos + 1, max(used, b + 1))
        assign[pos] = -1

    yield from rec(0, 0)


def has_minor(g, h) -> bool:
    """Exact minor test by enumerating connected branch sets."""
    g, h = _as_nx(g), MINORS[h] if isinstance(h, str) else h
    k = h.number_of_nodes()
    if g.number_of_nodes() < k or g.number_of_edges() < h.number_of_edges():
        return False
    for comp in nx.connected_components(g):
        if len(comp) < k:
            continue
        sub = g.subgraph(comp)
        verts = sorted(comp)
        for assign in _partitions(verts, k):
            blocks = [[] for _ in range(k)]
            for v, b in zip(verts, assign):
                if b >= 0:
                    blocks[b].append(v)
            if not all(nx.is_connected(sub.subgraph(b)) for b in blocks):
                continue
            where = {v: b for b, blk in enumerate(blocks) for v in blk}
            quotient = nx.Graph()
            quotient.add_nodes_from(range(k))
            for u, v in sub.edges:
                if u in where and v in where and where[u] != where[v]:
                    quotient.add_edge(where[u], where[v])
            if _contains_subgraph(quotient, h):
                return True
    return False


def has_minor_contraction(g, h) -> bool:
    """Second algorithm: some sequence of edge contractions leaves h as a subgraph."""
    g, h = _as_nx(g), MINORS[h] if isinstance(h, str) else h
    k, m = h.number_of_nodes(), h.number_of_edges()

    @lru_cache(maxsize=None)
    def rec(edges):
        graph = nx.Graph(list(edges))
        if graph.number_of_nodes() < k or graph.number_of_edges() < m:
            return False
        if _contains_subgraph(graph, h):
            return True
        for u, v in edges:
            c = nx.contracted_nodes(graph, u, v, self_loops=False)
            if rec(_canon(c)):
                return True
        return False

    return rec(_canon(g))


def _canon(g):
    relabel = {v: i for i, v in enumerate(sorted(g.nodes))}
    return tuple(sorted((min(relabel[u], relabel[v]), max(relabel[u], relabel[v])) for u, v in g.edges))


# ---------------------------------------------------------- enumeration

def _connectivity_ok(g: nx.Graph, connectivity: str) -> bool:
    n = g.number_of_nodes()
    if connectivity == "any":
        return True
    if connectivity == "connected":
        return n > 0 and nx.is_connected(g)
    if connectivity == "2-connected":
        return n >= 2 and nx.is_biconnected(g)
    raise OracleError(f"unknown connectivity {connectivity!r}")


def class_predicate(excluded):
    """Membership test for the class with the given excluded minors."""
    if isinstance(excluded, str):
        excluded = CLASS_MINORS[excluded]
    excluded = tuple(excluded)

    def pred(g):
        return not any(has_minor(g, h) for h in excluded)

    pred.excluded = excluded
    return pred


def automorphisms(g: nx.Graph) -> int:
    return sum(1 for _ in isomorphism.GraphMatcher(g, g).isomorphisms_iter())


@lru_cache(maxsize=None)
def atlas(n: int):
    """Unlabelled graphs on n vertices with their labelling counts n!/|Aut|."""
    if n > MAX_N:
        raise OracleError(f"n = {n} exceeds the enumeration cap {MAX_N}")
    out = []
    for g in nx.graph_atlas_g():
        if g.number_of_nodes() == n:
            out.append((g, factorial(n) // automorphisms(g)))
    return tuple(out)


def labelled_graphs(n: int):
    """Every labelled graph on {0..n-1} (2^C(n,2) of them)."""
    pairs = SmallGraph.pairs(n)
    for mask in range(1 << len(pairs)):
        yield SmallGraph(n, mask)


def enumerate_class(pred, n: int, connectivity: str = "any", method: str = "auto") -> int:
    """Number of labelled graphs on n vertices in the class with the given connectivity."""
    if n < 0:
        raise OracleError("n must be nonnegative")
    if isinstance(pred, (str, tuple, list)):
        pred = class_predicate(pred)
    if n == 0:
        return 1 if connectivity == "any" else 0
    if method == "auto":
        method = "brute" if n <= BRUTE_FORCE_N else "atlas"
    total = 0
    if method == "brute":
        if n > BRUTE_FORCE_N + 1:
            raise OracleError(f"brute force is capped at n = {BRUTE_FORCE_N + 1}")
        for sg in labelled_graphs(n):
            g = sg.to_nx()
            if _connectivity_ok(g, connectivity) and pred(g):
                total += 1
        return total
    for g, weight in atlas(n):
        if _connectivity_ok(g, connectivity) and pred(g):
            total += weight
    return total


def oracle_counts(pred, nmax: int):
    """{"G": [...], "C": [...], "B": [...]} for n = 0..nmax."""
    if isinstance(pred, (str, tuple, list)):
        pred = class_predicate(pred)
    names = {"G": "any", "C": "connected", "B": "2-connected"}
    out = {}
    for key, conn in names.items():
        out[key] = [enumerate_class(pred, n, conn) for n in range(nmax + 1)]
    out["C"][0] = 0
    return out


# ---------------------------------------------------------- appearances

def appearance_mean(pred, H: nx.Graph, root, n: int) -> float:
    """Exact mean number of appearances of the rooted labelled graph H in a
    uniform connected graph of the class on n vertices.

    H has vertex set {0..h-1} in label order.  An appearance is a vertex set W
    whose induced subgraph is H under the increasing bijection, joined to the
    rest by exactly one edge, which is incident with the image of the root.
    """
    if isinstance(pred, (str, tuple, list)):
        pred = class_predicate(pred)
    h = H.number_of_nodes()
    hits = 0
    total = 0
    for g, weight in atlas(n):
        if not (nx.is_connected(g) and pred(g)):
            continue
        total += weight
        hits += weight * _appearance_fraction(g, H, root, n)
    return hits / total


def _appearance_fraction(g, H, root, n):
    """Average number of appearances over all labellings of g."""
    h = H.number_of_nodes()
    matcher_count = 0
    for W in itertools.combinations(g.nodes, h):
        Wset = set(W)
        boundary = [(u, v) for u in W for v in g.neighbors(u) if v not in Wset]
        if len(boundary) != 1:
            continue
        sub = g.subgraph(W)
        gm = isomorphism.GraphMatcher(H, sub)
        for iso in gm.isomorphisms_iter():
            if iso[root] == boundary[0][0]:
                matcher_count += 1
    # each rooted isomorphism fixes the labels of W once the label set is chosen
    return matcher_count * comb(n, h) * factorial(n - h) / factorial(n)
