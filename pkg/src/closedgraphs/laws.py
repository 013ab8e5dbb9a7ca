"""Limit-law constants: edges, blocks, cut vertices, appearances,
components and the vertices missed by the largest component.

Derivatives in y of rho(y) and R(y) come from five-point central
stencils at three step sizes, combined by Richardson extrapolation.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from math import factorial

import mpmath

from .network import ExactSystem
from .numerics import mpf
from .singular import SingularReport, analyse, growth
from .tclass import ClassSpec

STEPS = ("1e-2", "5e-3", "2.5e-3")
Y_CAP = mpmath.mpf(10) ** 6     # density_map gives up beyond this edge weight


class LawError(ArithmeticError):
    pass


class DensityRangeError(LawError):
    """The requested edge density is outside what the class can reach."""


# formula strings attached to every emitted constant
SOURCES = {
    "rho_inv": "1/rho, rho = psi(tau) or psi(R), psi(u) = u exp(-B'(u))",
    "R_inv": "1/R, R the dominant singularity of B",
    "kappa": "-rho'(1)/rho(1)",
    "lambda": "-rho''(1)/rho(1) - rho'(1)/rho(1) + (rho'(1)/rho(1))^2",
    "kappa2": "-R'(1)/R(1)",
    "lambda2": "-R''(1)/R(1) - R'(1)/R(1) + (R'(1)/R(1))^2",
    "blocks_tau": "mean log(tau/rho), variance log(tau/rho) - 1/(1 + tau^2 B'''(tau))",
    "blocks_R": "mean and variance log(R/rho)",
    "cuts_tau": "mean 1 - rho/tau, variance (rho/tau)(1 - rho/tau) - (rho/tau)^2/(1 + tau^2 B'''(tau))",
    "cuts_R": "mean 1 - rho/R, variance (rho/R)(1 - rho/R)",
    "nu": "nu = C(rho) = C0",
    "p": "p = exp(-nu)",
    "missed_mean": "tau (case 1) or R (case 2)",
    "missed_var": "R + 2 C4 (case 2); undefined in case 1",
}


def c_mode(rep: SingularReport) -> str:
    """tau when C has exponent 3/2 through tau B''(tau) = 1, otherwise R."""
    return "tau" if rep.tau is not None else "R"


def is_critical(rep: SingularReport) -> bool:
    return rep.case in ("3.1", "3.2")


# ------------------------------------------------------------ stencils

def _stencil(values, h):
    fm2, fm1, f0, f1, f2 = values
    d1 = (fm2 - 8 * fm1 + 8 * f1 - f2) / (12 * h)
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * f1 - f2) / (12 * h * h)
    return d1, d2


def _richardson(estimates):
    """Estimates at h, h/2, h/4 with error series in h^4, h^6."""
    level = list(estimates)
    for p in (4, 6):
        k = mpmath.mpf(2) ** p
        level = [(k * b - a) / (k - 1) for a, b in zip(level, level[1:])]
    return level[0]


def y_derivatives(f, y0=1, steps=STEPS):
    """f(y0), f'(y0), f''(y0) for f returning a tuple of numbers.

    Steps are relative to y0.  Returns (values, first, second), each a tuple.
    """
    y0 = mpf(y0)
    cache = {}

    def at(k, h):
        key = mpmath.nstr(k * h, 20)
        if key not in cache:
            cache[key] = f(y0 + k * h)
        return cache[key]

    centre = at(0, 0)
    d1s, d2s = [], []
    for s in steps:
        h = mpmath.mpf(s) * y0
        pts = [at(k, h) for k in (-2, -1, 0, 1, 2)]
        cols = list(zip(*pts))
        pairs = [_stencil(col, h) for col in cols]
        d1s.append([p[0] for p in pairs])
        d2s.append([p[1] for p in pairs])
    first = tuple(_richardson([d[i] for d in d1s]) for i in range(len(centre)))
    second = tuple(_richardson([d[i] for d in d2s]) for i in range(len(centre)))
    return centre, first, second


def _growth_fn(spec, mode, source):
    hint = {}

    def f(y):
        rho, R, src = growth(spec, y, mode, hint)
        if src != source:
            raise LawError(f"the stencil crosses a critical value of y near {mpmath.nstr(y, 8)}"
                           f" ({source} -> {src})")
        return rho, R
    return f


def _log_constants(v, d1, d2):
    k = -d1 / v
    lam = -d2 / v - d1 / v + (d1 / v) ** 2
    return k, lam


# ------------------------------------------------------------ the laws

@dataclass
class EdgeLaw:
    kappa: object
    lam: object
    kappa2: object
    lam2: object


def edge_law(spec: ClassSpec, rep: SingularReport | None = None, y=1) -> EdgeLaw:
    """kappa, lambda (connected and general graphs) and kappa2, lambda2 (blocks)."""
    rep = rep or analyse(spec, y)
    if is_critical(rep):
        raise LawError("edge law at a critical y: the stencil would cross it")
    f = _growth_fn(spec, c_mode(rep), rep.source)
    (rho, R), (drho, dR), (d2rho, d2R) = y_derivatives(f, y)
    # scale to d/d(log y) at y != 1 is left to density_map; here y = 1 typically
    k, lam = _log_constants(rho, drho, d2rho)
    k2, lam2 = _log_constants(R, dR, d2R)
    return EdgeLaw(k, lam, k2, lam2)


@dataclass
class BlockCutLaw:
    blocks_mean: object
    blocks_var: object
    cuts_mean: object
    cuts_var: object
    mode: str
    cuts_var_printed: object = None   # the published case-1 expression, kept for comparison


def block_cut_law(rep: SingularReport) -> BlockCutLaw:
    """Coefficients of n in the mean and variance of blocks and cut vertices."""
    if is_critical(rep):
        raise LawError(f"no block or cut-vertex formulas in the critical case {rep.case}")
    rho = rep.rho
    if c_mode(rep) == "tau":
        tau = rep.tau
        b3 = rep.extra["B_at_tau"][3]
        L = mpmath.log(tau / rho)
        w = 1 / (1 + tau ** 2 * b3)
        q = rho / tau
        printed = ((tau - rho) * (tau - 2 * tau * rho ** 2 - tau * rho - rho + 2 * rho ** 3)
                   / (tau ** 2 * rho ** 2 * (1 + tau ** 2 * b3)) - q ** 2)
        # sigma(u) = psi(tau(u), u) with psi = t / (u (e^B'(t) - 1) + 1), expanded at u = 1
        cut_var = q * (1 - q) - q ** 2 * w
        return BlockCutLaw(L, L - w, 1 - q, cut_var, "tau", printed)
    R = rep.R
    L = mpmath.log(R / rho)
    q = rho / R
    return BlockCutLaw(L, L, 1 - q, q * (1 - q), "R")


def appearance_law(rep: SingularReport, size: int, kind: str = "rooted-subgraph"):
    """(mean, variance) coefficients of n for appearances of a fixed graph.

    rooted-subgraph: H with h = size vertices.  block: a rooted 2-connected
    L with size + 1 vertices, the root unlabelled.
    """
    if size < 1:
        raise ValueError("size must be at least 1")
    if kind == "rooted-subgraph":
        return rep.rho ** size / factorial(size), rep.rho
    if kind == "block":
        m = rep.R ** size / factorial(size)
        return m, m
    raise ValueError(f"unknown appearance kind {kind!r}")


def component_law(rep: SingularReport):
    """(nu, p): components minus one are Poisson(nu); p = P(connected)."""
    nu = rep.C["C0"]
    return nu, mpmath.exp(-nu)


@dataclass
class MissedMass:
    """Law of n - L_n, the vertices outside the largest component."""

    p: list
    total: object
    mean: object
    variance: object          # None when it does not exist
    tail_exponent: object


def missed_mass_law(spec: ClassSpec, rep: SingularReport, kmax: int = 200) -> MissedMass:
    """p_k = p g_k rho^k / k! for k <= kmax and the limiting moments."""
    if is_critical(rep):
        raise LawError(f"largest-component moments are not given for case {rep.case}")
    _, p = component_law(rep)
    es = ExactSystem(spec, max(kmax, 2), mpmath.mpf(1))
    pk = []
    scale = mpmath.mpf(1)
    for k in range(kmax + 1):
        pk.append(p * es.G.c[k] * scale)
        scale *= rep.rho
    if c_mode(rep) == "tau":
        mean, var, tail = rep.tau, None, mpmath.mpf(-5) / 2
    else:
        mean, var, tail = rep.R, rep.R + 2 * rep.C["C4"], mpmath.mpf(-7) / 2
    return MissedMass(pk, mpmath.fsum(pk), mean, var, tail)


# ------------------------------------------------------------ density

@dataclass
class DensityPoint:
    mu: object
    y: object
    residual: object
    near_boundary: bool = False


def density_at(spec: ClassSpec, y, mode: str, source: str):
    """mu(y) = -y rho'(y)/rho(y) and d mu / d log y."""
    f = _growth_fn(spec, mode, source)
    (rho, _), (d1, _), (d2, _) = y_derivatives(f, y)
    y = mpf(y)
    mu = -y * d1 / rho
    dmu = y * (-d1 / rho - y * d2 / rho + y * (d1 / rho) ** 2)
    return mu, dmu


def density_map(spec: ClassSpec, mu, tol="1e-9", rep: SingularReport | None = None) -> DensityPoint:
    """The edge weight y0 with -y0 rho'(y0)/rho(y0) = mu."""
    mu = mpf(mu)
    if mu <= 1:
        raise DensityRangeError("connected graphs have at least n - 1 edges: mu must exceed 1")
    rep = rep or analyse(spec, 1)
    mode, source = c_mode(rep), rep.source
    tol = mpmath.mpf(tol)
    t = mpmath.mpf(0)                     # log y
    lo, hi = -mpmath.inf, mpmath.inf
    for _ in range(60):
        m, dm = density_at(spec, mpmath.exp(t), mode, source)
        r = m - mu
        if abs(r) <= tol:
            y = mpmath.exp(t)
            return DensityPoint(mu, y, r, near_boundary=y > 1000)
        if r < 0:
            lo = t
        else:
            hi = t
        step = -r / dm if dm > 0 else (1 if r < 0 else -1)
        step = max(min(step, 2), -2)
        tn = t + step
        if not lo < tn < hi:
            tn = (lo + hi) / 2 if mpmath.isfinite(lo) and mpmath.isfinite(hi) else t + step / 2
        t = tn
        if mpmath.exp(t) > Y_CAP:
            raise DensityRangeError(f"mu = {mpmath.nstr(mu, 8)} is at or beyond the largest density"
                                    " of the class (y0 grows without bound)")
        if mpmath.exp(t) < 1 / Y_CAP:
            raise DensityRangeError(f"mu = {mpmath.nstr(mu, 8)} is below the smallest density of the class")
    raise LawError("density_map did not converge")


# ------------------------------------------------------------ report

@dataclass
class LawReport:
    name: str
    case: str
    y: object
    rho_inv: object
    R_inv: object
    kappa: object
    lam: object
    kappa2: object
    lam2: object
    blocks: tuple
    cuts: tuple
    nu: object
    p: object
    missed_mean: object
    missed_var: object
    tau: object = None
    sources: dict = field(default_factory=dict)

    def as_dict(self):
        return asdict(self)


def law_report(spec: ClassSpec, y=1) -> LawReport:
    rep = analyse(spec, y)
    edges = edge_law(spec, rep, y)
    bc = block_cut_law(rep)
    nu, p = component_law(rep)
    mode = c_mode(rep)
    var = None if mode == "tau" else rep.R + 2 * rep.C["C4"]
    keys = ["rho_inv", "R_inv", "kappa", "lambda", "kappa2", "lambda2",
            "blocks_" + mode, "cuts_" + mode, "nu", "p", "missed_mean", "missed_var"]
    return LawReport(
        name=spec.name, case=rep.case, y=rep.y, rho_inv=1 / rep.rho, R_inv=1 / rep.R,
        kappa=edges.kappa, lam=edges.lam, kappa2=edges.kappa2, lam2=edges.lam2,
        blocks=(bc.blocks_mean, bc.blocks_var), cuts=(bc.cuts_mean, bc.cuts_var),
        nu=nu, p=p, missed_mean=rep.tau if mode == "tau" else rep.R, missed_var=var,
        tau=rep.tau, sources={k: SOURCES[k] for k in keys})
