"""Centered Hardy–Littlewood and uncentered weighted maximal operators, sampled."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_CONFIG,
    INF,
    PreconditionError,
    QuadratureConfig,
    SpaceSpec,
    Weight,
    as_points,
    unit_ball_volume,
)
from .functions import AbsPower, BlackBox, TestFunction
from .integrate import Integrand, line_nodes
from .norms import lebesgue_norm, morrey_evaluator, morrey_norm
from .search import family_for, sup_search

__all__ = [
    "hl_maximal",
    "weighted_maximal",
    "maximal_function",
    "lp_operator_ratio",
    "morrey_operator_ratio",
    "pointwise_domination_check",
    "fefferman_stein_check",
    "line_nodes",
    "OFFSETS",
]

HL_RADII = np.geomspace(1e-3, 1e3, 96)
OFFSETS = (0.0, 0.25, -0.25, 0.5, -0.5)


def _anchor_points(f: TestFunction, w: Weight | None = None) -> np.ndarray:
    pts = [np.atleast_1d(b) for b in f.breakpoints()]
    if w is not None:
        pts.append(w.origin)
        if w.kind == "two_regime" and w.dim == 1:
            pts += [w.origin - float(w.knee), w.origin + float(w.knee)]
    if not pts:
        return np.empty((0, f.dim))
    return np.unique(np.array(pts, float).reshape(-1, f.dim), axis=0)


def _zoom(best: np.ndarray, grid: np.ndarray, k: int = 33) -> np.ndarray:
    """Per-point radii spanning one log-cell of the grid around the current best radius."""
    if grid.size > 1:
        step = float(np.max(np.diff(np.log(np.sort(grid)))))
    else:
        step = 0.5
    t = np.exp(np.linspace(-step, step, k))
    return best[:, None] * t[None, :]


def hl_maximal(f: TestFunction, points, radius_grid=None, cfg: QuadratureConfig = DEFAULT_CONFIG,
               anchored: bool = True, refine: bool = True) -> np.ndarray:
    """Mf(x) = max_R (1/|B_R(x)|) ∫_{B_R(x)} |f| over the radius grid.

    With ``anchored`` the radii reaching the jump and singular points of f are added per
    point and ``refine`` zooms once around the best grid radius; with both off the value
    is the plain grid maximum (which is then exactly sublinear in f).
    """
    pts = as_points(points, f.dim)
    grid = HL_RADII if radius_grid is None else np.asarray(radius_grid, float)
    integ = Integrand(f, Weight.constant(1, f.dim), 1.0, cfg)
    vol = unit_ball_volume(f.dim)
    m = pts.shape[0]

    def averages(radii: np.ndarray) -> np.ndarray:
        k = radii.shape[1]
        c = np.repeat(pts, k, axis=0)
        r = radii.reshape(-1)
        vals = integ.balls(c, r) / (vol * r ** f.dim)
        return vals.reshape(m, k)

    radii = np.broadcast_to(grid, (m, grid.size))
    if anchored:
        anchors = _anchor_points(f)
        if anchors.size:
            d = np.linalg.norm(pts[:, None, :] - anchors[None, :, :], axis=2)
            d = np.where(d > 0, d, grid[0])
            radii = np.concatenate([radii, d], axis=1)
    vals = averages(np.asarray(radii))
    best_idx = np.nanargmax(np.where(np.isnan(vals), -INF, vals), axis=1)
    best = vals[np.arange(m), best_idx]
    if refine:
        zoomed = _zoom(np.asarray(radii)[np.arange(m), best_idx], grid)
        best = np.maximum(best, np.nanmax(averages(zoomed), axis=1))
    return best


def _cube_candidates(pts: np.ndarray, half_sides: np.ndarray, anchors: np.ndarray):
    """Cubes containing each point: grid sizes times offsets, plus cubes with an anchor on the far face."""
    n = pts.shape[1]
    offs = np.array(list(itertools.product(OFFSETS, repeat=n)))
    centers = pts[:, None, None, :] + (2 * half_sides)[None, :, None, None] * offs[None, None, :, :]
    hs = np.broadcast_to(half_sides[None, :, None], centers.shape[:3])
    centers = centers.reshape(pts.shape[0], -1, n)
    hs = hs.reshape(pts.shape[0], -1)
    if n == 1 and anchors.size:
        a = anchors[:, 0]
        x = pts[:, 0]
        lo = np.minimum(x[:, None], a[None, :])
        hi = np.maximum(x[:, None], a[None, :])
        ok = hi > lo
        c_extra = np.where(ok, 0.5 * (lo + hi), x[:, None])[:, :, None]
        h_extra = np.where(ok, 0.5 * (hi - lo), half_sides[0])
        centers = np.concatenate([centers, c_extra], axis=1)
        hs = np.concatenate([hs, h_extra], axis=1)
    return centers, hs


def weighted_maximal(f: TestFunction, w: Weight, points, cube_grid=None,
                     cfg: QuadratureConfig = DEFAULT_CONFIG, anchored: bool = True) -> np.ndarray:
    """M_w f(x) = sup over cubes Q ∋ x of (1/w(Q)) ∫_Q |f| w, over sizes × offset fractions."""
    pts = as_points(points, f.dim)
    half_sides = HL_RADII if cube_grid is None else np.asarray(cube_grid, float)
    anchors = _anchor_points(f, w) if anchored else np.empty((0, f.dim))
    centers, hs = _cube_candidates(pts, half_sides, anchors)
    num = Integrand(f, w, 1.0, cfg)
    den = Integrand(None, w, 1.0, cfg)
    m, k = hs.shape
    c = centers.reshape(-1, f.dim)
    h = hs.reshape(-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = (num.cubes(c, h) / den.cubes(c, h)).reshape(m, k)
    return np.nanmax(np.where(np.isnan(vals), -INF, vals), axis=1)


def maximal_function(op: str, f: TestFunction, w: Weight | None = None, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """The sampled operator as a callable on point arrays."""
    if op == "hl":
        return lambda x: hl_maximal(f, x, cfg=cfg)
    if op == "weighted":
        if w is None:
            raise PreconditionError("the weighted maximal operator needs a weight")
        return lambda x: weighted_maximal(f, w, x, cfg=cfg)
    raise PreconditionError(f"unknown maximal operator {op!r}")


# ------------------------------------------------------------------ quadrature on the line

def _weight_breaks(w: Weight) -> list[float]:
    c = float(w.origin[0])
    if w.kind == "two_regime":
        return [c, c - float(w.knee), c + float(w.knee)]
    return [c]


def lp_operator_ratio(op: str, f: TestFunction, p, w: Weight, L: float = 10.0,
                      cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """‖Mf‖_{L_p(w) on [-L, L]} / ‖f‖_{L_p(w)}, the maximal function sampled on a graded mesh."""
    if f.dim != 1:
        raise PreconditionError("operator ratios are computed on the line")
    p = float(p)
    denom = lebesgue_norm(f, p, w, cfg=cfg)
    if denom == 0:
        return 0.0
    brk = [float(b[0]) for b in f.breakpoints()] + _weight_breaks(w)
    x, wt, _ = line_nodes(-L, L, brk)
    M = maximal_function(op, f, w, cfg)(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = np.where(M > 0, M ** p, 0.0) * w(x)
    return float(np.dot(wt, integrand)) ** (1 / p) / denom


@dataclass
class _Table:
    """Cumulative integral of a sampled density on the line, for fast interval integrals."""

    edges: np.ndarray
    cumulative: np.ndarray

    def interval(self, a, b):
        return np.interp(b, self.edges, self.cumulative) - np.interp(a, self.edges, self.cumulative)


def _tabulate(g, lo: float, hi: float, breakpoints) -> _Table:
    x, wt, edges = line_nodes(lo, hi, breakpoints, levels=48)
    vals = g(x) * wt
    cells = vals.reshape(-1, 8).sum(axis=1)
    return _Table(edges, np.concatenate([[0.0], np.cumsum(cells)]))


def morrey_operator_ratio(op: str, f: TestFunction, space: SpaceSpec, family=None,
                          cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """‖Mf‖_{M_{u,p}(w)} / ‖f‖_{M_{u,p}(w)} on the line, Mf tabulated once on a graded mesh."""
    if f.dim != 1:
        raise PreconditionError("operator ratios are computed on the line")
    w, p = space.weight, float(space.p)
    family = family_for(f, w) if family is None else family
    base = morrey_norm(f, space, family, cfg).value
    if base == 0:
        return 0.0
    reach = max(abs(family.center_range[0]), abs(family.center_range[1])) + family.radius_range[1]
    brk = [float(b[0]) for b in f.breakpoints()] + _weight_breaks(w)
    M = maximal_function(op, f, w, cfg)
    table = _tabulate(lambda x: M(x) ** p * w(x), -reach, reach, brk)
    den = Integrand(None, w, 1.0, cfg)
    expo = float(space.morrey_exponent())

    def evaluate(centers, radii):
        c = centers[:, 0]
        I = table.interval(c - radii, c + radii)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(I > 0, den.balls(centers, radii) ** expo * np.maximum(I, 0) ** (1 / p), 0.0)

    return sup_search(evaluate, family).value / base


def pointwise_domination_check(f: TestFunction, w: Weight, p, points, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Smallest C with Mf ≤ C·M_w(|f|^p)^{1/p} on the sample points."""
    p = float(p)
    hl = hl_maximal(f, points, cfg=cfg)
    mw = weighted_maximal(AbsPower(f, p), w, points, cfg=cfg) ** (1 / p)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(hl > 0, hl / mw, 0.0)
    return float(np.nanmax(ratio))


def fefferman_stein_check(f: TestFunction, phi: TestFunction, t_grid=None, L: float | None = None,
                          cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Smallest C with t·∫_{Mf > t} φ ≤ C ∫ |f| Mφ over the t grid (line only)."""
    if f.dim != 1:
        raise PreconditionError("the Fefferman–Stein check runs on the line")
    if L is None:
        L = 10.0 * max(f.support_radius(), 1.0)
    brk = [float(b[0]) for b in f.breakpoints()] + [float(b[0]) for b in phi.breakpoints()]
    x, wt, _ = line_nodes(-L, L, brk)
    Mf = hl_maximal(f, x, cfg=cfg)
    phis = np.abs(phi(x))
    rhs = float(np.dot(wt, np.abs(f(x)) * hl_maximal(phi, x, cfg=cfg)))
    if t_grid is None:
        top = float(np.max(Mf))
        t_grid = np.geomspace(top * 1e-3, top, 60)
    lhs = [t * float(np.dot(wt, phis * (Mf > t))) for t in t_grid]
    return max(lhs) / rhs if rhs > 0 else INF
