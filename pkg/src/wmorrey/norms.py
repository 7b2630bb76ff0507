"""Lebesgue, weak Lebesgue and Morrey norms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DEFAULT_CONFIG,
    INF,
    Ball,
    Box,
    DivergenceError,
    PreconditionError,
    QuadratureConfig,
    SpaceSpec,
    Weight,
    is_inf,
    unit_ball_volume,
)
from .functions import TestFunction, pairwise_disjoint, power_terms
from .integrate import Integrand, _radial_centered
from .search import BallFamily, family_for, sup_search

__all__ = [
    "lebesgue_norm",
    "weak_lebesgue_norm",
    "level_set_measure",
    "morrey_norm",
    "morrey_norm_cubes",
    "morrey_evaluator",
    "MorreyReport",
    "WeakNormResult",
]


def _full_integral(integrand: Integrand, f: TestFunction) -> float:
    if integrand.route == "pieces":
        return integrand.interval(-INF, INF)
    if integrand.route == "radial":
        return float(_radial_centered(integrand.pieces, np.array(INF), integrand.dim))
    reach = f.support_radius()
    if not np.isfinite(reach):
        raise PreconditionError("full-space integral of a function without declared compact support")
    box = Box(-reach * np.ones(f.dim), reach * np.ones(f.dim))
    return integrand.region(box) if f.dim > 1 else integrand.interval(-reach, reach)


def lebesgue_norm(f: TestFunction, p, w: Weight | None = None, domain=None,
                  cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """(∫_domain |f|^p w)^{1/p}; the essential supremum for p = ∞; domain None is all of R^n."""
    w = Weight.constant(1, f.dim) if w is None else w
    if is_inf(p):
        return _ess_sup(f, domain)
    p = float(p)
    if not p > 0:
        raise PreconditionError("p must be positive")
    integrand = Integrand(f, w, p, cfg)
    val = _full_integral(integrand, f) if domain is None else integrand.region(domain)
    if not np.isfinite(val):
        raise DivergenceError(f"|f|^{p:g} w is not integrable", factor="integrand",
                              witness=None if domain is None else domain.to_json())
    return val ** (1.0 / p)


def _ess_sup(f: TestFunction, domain=None) -> float:
    terms = f.terms()
    if domain is None and terms is not None and f.disjoint_terms():
        return f.sup_abs()
    box = domain.bounding_box() if domain is not None else None
    if box is None:
        reach = f.support_radius()
        reach = reach if np.isfinite(reach) else 10.0
        box = Box(-reach * np.ones(f.dim), reach * np.ones(f.dim))
    if f.dim == 1:
        x = np.linspace(box.lo[0], box.hi[0], 20001)
        inner = np.geomspace(1e-12, 1.0, 2000)
        x = np.concatenate([x, inner, -inner]) if box.lo[0] < 0 < box.hi[0] else x
        pts = x[(x >= box.lo[0]) & (x <= box.hi[0])].reshape(-1, 1)
    else:
        axes = [np.linspace(l, h, 201) for l, h in zip(box.lo, box.hi)]
        pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, f.dim)
    if domain is not None:
        pts = pts[np.asarray(domain.contains(pts), bool)]
    vals = np.abs(f.evaluate(pts))
    return float(np.max(vals)) if vals.size else 0.0


# ------------------------------------------------------------------ weak L_p

@dataclass
class WeakNormResult:
    value: float
    t_argmax: float
    growing: bool

    def to_json(self) -> dict:
        return {"value": self.value, "t_argmax": self.t_argmax, "growing": self.growing}


def _ball_cap_measure(region, rho: float, dim: int) -> float:
    """|region ∩ B(0, rho)| for regions where this is elementary."""
    if rho <= 0:
        return 0.0
    if region is None:
        return unit_ball_volume(dim) * rho ** dim if np.isfinite(rho) else INF
    if dim == 1:
        lo, hi = region.lo[0], region.hi[0]
        return max(0.0, min(hi, rho) - max(lo, -rho))
    if isinstance(region, Ball) and not any(region.center):
        return unit_ball_volume(dim) * min(region.radius, rho) ** dim
    raise NotImplementedError


def _region_measure(region, dim: int) -> float:
    if region is None:
        return INF
    return region.volume()


def level_set_measure(f: TestFunction, t: float) -> float:
    """|{x : |f(x)| > t}|, exact for disjoint indicator-power pieces."""
    terms = power_terms(f, 1.0)
    if terms is None or not pairwise_disjoint(terms):
        raise NotImplementedError
    total = 0.0
    for term in terms:
        c, g = term.coef, term.gamma
        if c <= 0:
            continue
        if g == 0:
            total += _region_measure(term.region, f.dim) if c > t else 0.0
            continue
        rho = (t / c) ** (1.0 / g)
        if g < 0:
            total += _ball_cap_measure(term.region, rho, f.dim)
        else:
            whole = _region_measure(term.region, f.dim)
            total += whole - _ball_cap_measure(term.region, rho, f.dim) if np.isfinite(whole) else INF
    return total


def _level_set_by_grid(f: TestFunction, ts: np.ndarray) -> np.ndarray:
    reach = f.support_radius()
    if not np.isfinite(reach):
        raise PreconditionError("grid level sets need a declared compact support")
    if f.dim == 1:
        edges = np.linspace(-reach, reach, 2 ** 18 + 1)
        mids = 0.5 * (edges[1:] + edges[:-1])
        vals = np.abs(f.evaluate(mids.reshape(-1, 1)))
        cell = edges[1] - edges[0]
    else:
        k = 401 if f.dim == 2 else 81
        axis = np.linspace(-reach, reach, k + 1)
        mids1 = 0.5 * (axis[1:] + axis[:-1])
        pts = np.stack(np.meshgrid(*([mids1] * f.dim), indexing="ij"), axis=-1).reshape(-1, f.dim)
        vals = np.abs(f.evaluate(pts))
        cell = (axis[1] - axis[0]) ** f.dim
    vals = np.sort(vals)
    counts = vals.size - np.searchsorted(vals, ts, side="right")
    return counts * cell


def weak_lebesgue_norm(f: TestFunction, p: float, cfg: QuadratureConfig = DEFAULT_CONFIG,
                       t_grid: np.ndarray | None = None) -> WeakNormResult:
    """sup_t t·|{|f| > t}|^{1/p} over a logarithmic t grid plus the jump levels of f."""
    p = float(p)
    if not (0 < p < INF):
        raise PreconditionError("weak norm needs 0 < p < ∞")
    terms = power_terms(f, 1.0)
    if t_grid is None:
        levels = []
        if terms is not None:
            for term in terms:
                if term.coef <= 0:
                    continue
                levels.append(term.coef)
                if term.region is not None and term.gamma != 0:
                    lo, hi = term.region.distance_range(np.zeros(f.dim))
                    for d in (lo, hi):
                        if 0 < d < INF:
                            levels.append(term.coef * d ** term.gamma)
        if not levels:
            if terms is not None:
                return WeakNormResult(0.0, 0.0, False)
            levels = [1.0]
        mid = math.exp(np.mean(np.log(levels)))
        t_grid = np.concatenate([np.geomspace(mid * 1e-6, mid * 1e6, 601),
                                 np.array(levels) * (1 - 1e-12)])
    t_grid = np.unique(np.asarray(t_grid, float))
    if terms is not None and pairwise_disjoint(terms) and all(_elementary(term, f.dim) for term in terms):
        mu = np.array([level_set_measure(f, t) for t in t_grid])
    else:
        mu = _level_set_by_grid(f, t_grid)
    with np.errstate(invalid="ignore"):
        vals = t_grid * mu ** (1.0 / p)
    if np.any(np.isinf(vals)):
        i = int(np.argmax(np.isinf(vals)))
        return WeakNormResult(INF, float(t_grid[i]), True)
    i = int(np.argmax(vals))
    best = float(vals[i])
    growing = False
    if best > 0 and i in (0, vals.size - 1) and vals.size > 1:
        nb = vals[1] if i == 0 else vals[-2]
        growing = best > nb * (1 + 1e-9)
    return WeakNormResult(best, float(t_grid[i]), growing)


def _elementary(term, dim: int) -> bool:
    r = term.region
    return r is None or dim == 1 or (isinstance(r, Ball) and not any(r.center))


# ------------------------------------------------------------------ Morrey

@dataclass
class MorreyReport:
    value: float
    center: list | None
    radius: float | None
    stable: bool
    last_change: float
    trace: list = field(default_factory=list)
    divergent: bool = False
    shape: str = "ball"

    def to_json(self) -> dict:
        return {"value": self.value, "argmax": {"shape": self.shape, "center": self.center, "radius": self.radius},
                "stable": self.stable, "last_change": self.last_change, "trace": self.trace,
                "divergent": self.divergent}


def morrey_evaluator(f: TestFunction, space: SpaceSpec, cfg: QuadratureConfig = DEFAULT_CONFIG,
                     cubes: bool = False):
    """Vectorised ball (or cube) expression w(B)^{1/u-1/p} (∫_B |f|^p w)^{1/p}."""
    w, p = space.weight, float(space.p)
    num = Integrand(f, w, p, cfg)
    den = Integrand(None, w, 1.0, cfg)
    expo = float(space.morrey_exponent())

    def evaluate(centers, radii):
        if cubes:
            I, m = num.cubes(centers, radii), den.cubes(centers, radii)
        else:
            I, m = num.balls(centers, radii), den.balls(centers, radii)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            val = np.where(I > 0, m ** expo * I ** (1.0 / p), 0.0)
        return np.where(np.isinf(I), INF, val)

    return evaluate


def _morrey(f, space: SpaceSpec, family: BallFamily | None, cfg, cubes: bool) -> MorreyReport:
    space.require_nontrivial()
    if f.dim != space.dim:
        raise PreconditionError("function and weight live in different dimensions")
    if not space.weight.locally_integrable():
        raise PreconditionError(f"{space.weight} is not locally integrable")
    if is_inf(space.u):
        val = lebesgue_norm(f, INF, space.weight, cfg=cfg)
        return MorreyReport(val, None, None, True, 0.0, [val], shape="cube" if cubes else "ball")
    family = family_for(f, space.weight) if family is None else family
    res = sup_search(morrey_evaluator(f, space, cfg, cubes), family)
    return MorreyReport(
        value=res.value,
        center=None if res.center is None else [float(v) for v in np.atleast_1d(res.center)],
        radius=res.radius,
        stable=res.stable(max(cfg.rel_tol, 1e-6)),
        last_change=res.last_change,
        trace=list(res.trace),
        divergent=res.divergent,
        shape="cube" if cubes else "ball",
    )


def morrey_norm(f: TestFunction, space: SpaceSpec, family: BallFamily | None = None,
                cfg: QuadratureConfig = DEFAULT_CONFIG) -> MorreyReport:
    """sup over the family of w(B)^{1/u-1/p} (∫_B |f|^p w)^{1/p}, refined around the argmax."""
    return _morrey(f, space, family, cfg, cubes=False)


def morrey_norm_cubes(f: TestFunction, space: SpaceSpec, family: BallFamily | None = None,
                      cfg: QuadratureConfig = DEFAULT_CONFIG) -> MorreyReport:
    """Same supremum over axis-parallel cubes; family radii are read as half sides."""
    return _morrey(f, space, family, cfg, cubes=True)
