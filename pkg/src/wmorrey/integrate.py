"""Weighted integrals over balls and cubes.

Three routes, chosen once per (function, weight, exponent):

* ``pieces``: on the line every analytic integrand is a finite sum of
  ``c·|x - s|^e`` pieces on intervals, so ball and cube integrals are exact
  antiderivative differences, vectorised over whole families.
* ``radial``: in higher dimension, radial integrands about the origin have a
  closed form over centered balls and a one-dimensional shell integral over
  off-center balls.
* ``numeric``: everything else goes through QUADPACK with algebraic endpoint
  weights at known singular points, or a graded mesh when the local exponent
  is unknown (black boxes).
"""

from __future__ import annotations

import functools
import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate as sp_integrate
from scipy import special

from .core import (
    DEFAULT_CONFIG,
    INF,
    Ball,
    Box,
    Cube,
    DivergenceError,
    QuadratureConfig,
    ToleranceError,
    Weight,
    unit_sphere_area,
)
from .functions import IndicatorPower, TestFunction, Term, power_terms

__all__ = [
    "interval_power_integral",
    "Integrand",
    "weight_measure",
    "weighted_p_integral",
    "truncated_integral",
    "graded_integral",
    "cutoff_divergence",
]

ONE = IndicatorPower(None, 0.0, 1.0)


# ------------------------------------------------------------------ primitives

def interval_power_integral(a, b, s: float, e: float) -> np.ndarray:
    """∫_a^b |x - s|^e dx elementwise (a ≤ b); ∞ where the singularity is not integrable."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    u, v = a - s, b - s
    if e == 0:
        return b - a
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if e > -1:
            k = e + 1
            out = np.sign(v) * np.abs(v) ** k / k - np.sign(u) * np.abs(u) ** k / k
            return np.where(b > a, out, 0.0)
        touches = (u <= 0) & (v >= 0) & (b > a)
        if e == -1:
            same = np.log(np.abs(v)) - np.log(np.abs(u))
            out = np.where(u > 0, same, -same)
        else:
            k = e + 1
            out = (np.abs(v) ** k - np.abs(u) ** k) / k
            out = np.where(u >= 0, out, -out)
        out = np.where(b > a, out, 0.0)
        return np.where(touches, INF, out)


@dataclass(frozen=True)
class Piece:
    """coef·|x - s|^e restricted to [lo, hi] (line) or to radii [lo, hi] (radial)."""

    coef: float
    lo: float
    hi: float
    s: float
    e: float


def _weight_segments(w: Weight) -> list[tuple[float, float, float, float]]:
    """(lo, hi, coefficient, exponent) in x with w = coefficient·|x - c|^exponent on each."""
    c = float(w.origin[0]) if w.dim == 1 else 0.0
    a, b = w.exponents
    k, sc = float(w.knee), float(w.scale)
    if a == b:
        return [(-INF, INF, sc * k ** (-a), a)]
    return [
        (-INF, c - k, sc * k ** (-b), b),
        (c - k, c + k, sc * k ** (-a), a),
        (c + k, INF, sc * k ** (-b), b),
    ]


def _line_pieces(terms: list[Term], w: Weight) -> list[Piece] | None:
    """Pieces of Σ terms · w on the line, or None when two singular points interact."""
    c = float(w.origin[0])
    segs = _weight_segments(w)
    pieces = []
    for t in terms:
        lo, hi = (-INF, INF) if t.region is None else (t.region.lo[0], t.region.hi[0])
        if w.is_constant:
            pieces.append(Piece(t.coef * float(w.scale), lo, hi, 0.0, t.gamma))
            continue
        if t.gamma != 0 and c != 0:
            return None
        for slo, shi, coef, e in segs:
            plo, phi = max(lo, slo), min(hi, shi)
            if phi > plo:
                pieces.append(Piece(t.coef * coef, plo, phi, c, e + t.gamma))
    return pieces


def _radial_pieces(terms: list[Term], w: Weight) -> list[Piece] | None:
    """Radial pieces coef·r^e for r in [lo, hi] when everything is radial about 0."""
    if w.center is not None:
        return None
    a, b = w.exponents
    k, sc = float(w.knee), float(w.scale)
    segs = [(0.0, INF, sc * k ** (-a), a)] if a == b else [(0.0, k, sc * k ** (-a), a), (k, INF, sc * k ** (-b), b)]
    pieces = []
    for t in terms:
        if t.region is None:
            rlo, rhi = 0.0, INF
        elif isinstance(t.region, Ball) and not any(t.region.center):
            rlo, rhi = 0.0, t.region.radius
        else:
            return None
        for slo, shi, coef, e in segs:
            plo, phi = max(rlo, slo), min(rhi, shi)
            if phi > plo:
                pieces.append(Piece(t.coef * coef, plo, phi, 0.0, e + t.gamma))
    return pieces


def _line_sum(pieces: list[Piece], A: np.ndarray, B: np.ndarray) -> np.ndarray:
    total = np.zeros(np.broadcast(A, B).shape)
    for pc in pieces:
        lo = np.maximum(pc.lo, A)
        hi = np.minimum(pc.hi, B)
        ok = hi > lo
        if not np.any(ok):
            continue
        val = interval_power_integral(np.where(ok, lo, 0.0), np.where(ok, hi, 0.0), pc.s, pc.e)
        total = total + np.where(ok, pc.coef * val, 0.0)
    return total


def _radial_centered(pieces: list[Piece], R: np.ndarray, n: int) -> np.ndarray:
    """∫_{B(0,R)} over radial pieces: |S^{n-1}| Σ ∫ coef r^{e+n-1} dr."""
    area = unit_sphere_area(n)
    total = np.zeros(np.shape(R))
    for pc in pieces:
        hi = np.minimum(pc.hi, R)
        ok = hi > pc.lo
        val = interval_power_integral(np.full(np.shape(R), pc.lo), np.where(ok, hi, pc.lo), 0.0, pc.e + n - 1)
        total = total + np.where(ok, pc.coef * area * val, 0.0)
    return total


def _cap_fraction(r, d: float, R: float, n: int):
    """Fraction of the sphere |x| = r lying in the ball B(x0, R) with |x0| = d."""
    r = np.asarray(r, dtype=float)
    num = r * r + d * d - R * R
    with np.errstate(divide="ignore", invalid="ignore"):
        cos_t = np.clip(num / (2 * r * d), -1.0, 1.0)
    # r → 0 limit: fully inside, fully outside, or half the sphere when the ball boundary passes through 0
    cos_t = np.where(r > 0, cos_t, np.sign(d * d - R * R))
    if n == 2:
        return np.arccos(cos_t) / math.pi
    if n == 3:
        return (1 - cos_t) / 2
    sin2 = 1 - cos_t ** 2
    half = 0.5 * special.betainc((n - 1) / 2, 0.5, sin2)
    return np.where(cos_t >= 0, half, 1 - half)


def _radial_offcenter(pieces: list[Piece], center: np.ndarray, R: float, n: int, cfg: QuadratureConfig) -> float:
    d = float(np.linalg.norm(center))
    if d == 0:
        return float(_radial_centered(pieces, np.array(R), n))
    area = unit_sphere_area(n)
    full = max(R - d, 0.0)
    total = float(_radial_centered(pieces, np.array(full), n)) if full > 0 else 0.0
    lo_band, hi_band = abs(d - R), d + R
    for pc in pieces:
        a, b = max(pc.lo, lo_band), min(pc.hi, hi_band)
        if b <= a:
            continue
        ex = pc.e + n - 1
        if a == 0:
            if ex <= -1:
                return INF

            def g(r, ex=ex):
                return _cap_fraction(r, d, R, n)

            val, err = _quad(g, a, b, cfg, wvar=(ex, 0.0))
        else:
            # square-root edges at both band ends: a graded Gauss rule resolves them
            x, wt, _ = line_nodes(a, b, ())
            val = float(np.dot(wt, x ** ex * _cap_fraction(x, d, R, n)))
        total += pc.coef * area * val
    return total


# ------------------------------------------------------------------ quadrature

def _quad(g, a: float, b: float, cfg: QuadratureConfig, wvar=None):
    kw = dict(epsabs=cfg.abs_tol, epsrel=max(cfg.rel_tol, 1e-13), limit=cfg.max_subdivisions, full_output=1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if wvar is not None:
            res = sp_integrate.quad(g, a, b, weight="alg", wvar=wvar, **kw)
        else:
            res = sp_integrate.quad(g, a, b, **kw)
    val, err = res[0], res[1]
    if not np.isfinite(val):
        return INF, INF
    if len(res) > 3 and err > max(100 * cfg.abs_tol, 1e-6 * abs(val)):
        raise ToleranceError(f"quadrature did not converge on [{a}, {b}]", best=val, error=err)
    return val, err


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _gauss(g, a: float, b: float) -> float:
    x = 0.5 * (b - a) * _GL_NODES + 0.5 * (a + b)
    return float(0.5 * (b - a) * np.dot(_GL_WEIGHTS, g(x)))


def graded_integral(g, a: float, b: float, singular_end: str | None, cfg: QuadratureConfig = DEFAULT_CONFIG,
                    max_levels: int = 80) -> float:
    """Gauss–Legendre on a mesh halving toward the singular end until cells contribute < abs_tol/10."""
    if b <= a:
        return 0.0
    if singular_end is None:
        return _gauss(g, a, b)
    total = 0.0
    lo, hi = a, b
    for _ in range(max_levels):
        mid = 0.5 * (lo + hi)
        if singular_end == "left":
            cell = _gauss(g, mid, hi)
            hi = mid
        else:
            cell = _gauss(g, lo, mid)
            lo = mid
        total += cell
        if abs(cell) < cfg.abs_tol / 10 or abs(cell) < 1e-15 * abs(total):
            break
    return total


def cutoff_divergence(values: list[float], growth: float = 1.5) -> bool:
    """Classify a cutoff sequence I(ε_k), ε_k ↓ 0, as divergent.

    Divergent when it grows by ``growth`` across the last three levels or when the
    increments stop shrinking (the signature of logarithmic blow-up).
    """
    v = [x for x in values if np.isfinite(x)]
    if len(v) < len(values):
        return True
    if len(v) < 3:
        return False
    a, b, c = v[-3], v[-2], v[-1]
    if a > 0 and c / a > growth:
        return True
    d1, d2 = b - a, c - b
    scale = max(abs(c), 1e-300)
    return d2 > 1e-6 * scale and d2 >= 0.95 * d1


# ------------------------------------------------------------------ integrand

@functools.lru_cache(maxsize=None)
def _leggauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def line_nodes(lo: float, hi: float, breakpoints, levels: int = 36):
    """Nodes and weights on [lo, hi], geometrically graded toward every breakpoint."""
    # an end within rounding of a breakpoint is moved onto it, so no node lands on a pole
    lo, hi = float(lo), float(hi)
    tol = 1e-12 * max(1.0, abs(lo), abs(hi))
    for b in breakpoints:
        b = float(b)
        if abs(b - lo) <= tol:
            lo = b
        elif abs(b - hi) <= tol:
            hi = b
    cuts = sorted({lo, hi} | {float(b) for b in breakpoints if lo < b < hi})
    edges = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        h = b - a
        # grade down to 1e-12 of the cell, but never below what the floats around a and b resolve
        floor = max(1e-12, 8192 * np.finfo(float).eps * max(abs(a), abs(b)) / h)
        dist = 0.5 * h * np.geomspace(min(floor, 0.5), 1.0, levels)
        edges.extend(list(a + dist))
        edges.extend(list(b - dist))
        edges.extend([a, b])
    edges = np.unique(np.array(edges))
    x0, w0 = _leggauss(8)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x0[None, :]).reshape(-1)
    wts = (half[:, None] * w0[None, :]).reshape(-1)
    return nodes, wts, edges


class Integrand:
    """∫ |f|^p w over regions, with the fastest available route fixed up front."""

    def __init__(self, f: TestFunction | None, w: Weight, p: float = 1.0, cfg: QuadratureConfig = DEFAULT_CONFIG):
        f = ONE if f is None else f
        if f.dim != w.dim:
            if f is ONE:
                f = IndicatorPower(None, 0.0, 1.0, dim=w.dim)
            else:
                raise ValueError("function and weight live in different dimensions")
        self.f, self.w, self.p, self.cfg = f, w, float(p), cfg
        self.dim = w.dim
        self.terms = power_terms(f, self.p)
        self.pieces = None
        self.route = "numeric"
        if self.terms is not None:
            if self.dim == 1:
                self.pieces = _line_pieces(self.terms, w)
                if self.pieces is not None:
                    self.route = "pieces"
            else:
                self.pieces = _radial_pieces(self.terms, w)
                if self.pieces is not None:
                    self.route = "radial"

    # pointwise integrand
    def density(self, x: np.ndarray) -> np.ndarray:
        x = x.reshape(-1, self.dim)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            fx = np.abs(self.f.evaluate(x))
            out = np.where(fx > 0, fx ** self.p, 0.0) * self.w(x)
        return np.nan_to_num(out, nan=0.0)

    # vectorised families
    def _pairs(self, centers, radii) -> tuple[np.ndarray, np.ndarray]:
        centers = np.asarray(centers, float).reshape(-1, self.dim)
        radii = np.asarray(radii, float).reshape(-1)
        if centers.shape[0] == 1 and radii.size > 1:
            centers = np.repeat(centers, radii.size, axis=0)
        elif radii.size == 1 and centers.shape[0] > 1:
            radii = np.repeat(radii, centers.shape[0])
        if centers.shape[0] != radii.size:
            raise ValueError(f"{centers.shape[0]} centers for {radii.size} radii")
        return centers, radii

    def balls(self, centers: np.ndarray, radii: np.ndarray) -> np.ndarray:
        centers, radii = self._pairs(centers, radii)
        if self.route == "pieces":
            c = centers[:, 0]
            return _line_sum(self.pieces, c - radii, c + radii)
        if self.route == "radial":
            out = np.empty(radii.shape)
            dist = np.linalg.norm(centers, axis=1)
            centered = dist == 0
            if np.any(centered):
                out[centered] = _radial_centered(self.pieces, radii[centered], self.dim)
            for i in np.flatnonzero(~centered):
                out[i] = _radial_offcenter(self.pieces, centers[i], radii[i], self.dim, self.cfg)
            return out
        return np.array([self.region(Ball(c, r)) for c, r in zip(centers, radii)])

    def cubes(self, centers: np.ndarray, half_sides: np.ndarray) -> np.ndarray:
        centers, half_sides = self._pairs(centers, half_sides)
        if self.dim == 1:
            return self.balls(centers, half_sides)
        return np.array([self.region(Cube(c, h)) for c, h in zip(centers, half_sides)])

    def interval(self, a: float, b: float) -> float:
        if self.route == "pieces":
            return float(_line_sum(self.pieces, np.array(a), np.array(b)))
        return self._numeric_line(a, b)

    # single regions
    def region(self, region) -> float:
        if self.dim == 1:
            box = region.bounding_box()
            return self.interval(box.lo[0], box.hi[0])
        if isinstance(region, Ball):
            if self.route == "radial":
                return float(self.balls(np.asarray(region.center)[None, :], np.array([region.radius]))[0])
            return self._numeric_ball(region)
        return self._numeric_box(region.bounding_box())

    # numeric routes
    def _singular_points(self) -> list[np.ndarray]:
        pts = [np.zeros(self.dim), self.w.origin]
        if hasattr(self.f, "singular_points"):
            pts += self.f.singular_points()
        uniq = {}
        for p in pts:
            uniq.setdefault(tuple(np.round(p, 14)), p)
        return list(uniq.values())

    def _exponent_at(self, s: float, probe: float) -> float | None:
        """Local exponent of |f|^p w at s on the side of probe (line only)."""
        pt, pr = np.array([s]), np.array([probe])
        ef = self.f.singular_exponent(pt, pr)
        if ef is None:
            return None
        if not np.isfinite(ef):
            return INF
        ew = 0.0
        if s == float(self.w.origin[0]):
            a, b = self.w.exponents
            ew = a
        return self.p * ef + ew

    def _numeric_line(self, a: float, b: float) -> float:
        if b <= a:
            return 0.0
        sing = sorted({float(p[0]) for p in self._singular_points()})
        cuts = set(sing)
        for bp in self.f.breakpoints():
            cuts.add(float(bp[0]))
        c, k = float(self.w.origin[0]), float(self.w.knee)
        if not self.w.is_constant and self.w.alpha != self.w.beta:
            cuts.update({c - k, c + k})
        inner = sorted(x for x in cuts if a < x < b)
        edges = [a] + inner + [b]
        total = 0.0
        g = lambda x: self.density(np.asarray(x, float).reshape(-1, 1))
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid = 0.5 * (lo + hi)
            el = self._exponent_at(lo, mid) if lo in sing else 0.0
            er = self._exponent_at(hi, mid) if hi in sing else 0.0
            if el == INF or er == INF:
                continue
            if (el is not None and el <= -1) or (er is not None and er <= -1):
                return INF
            if el is None or er is None:
                total += self._blackbox_cell(g, lo, hi, el is None, er is None)
                continue
            if el == 0 and er == 0:
                val, _ = _quad(lambda x: g(x)[0], lo, hi, self.cfg)
            else:
                def h(x, lo=lo, hi=hi, el=el, er=er):
                    nudge = 1e-12 * (hi - lo)
                    x = min(max(x, lo + nudge), hi - nudge)
                    return g(x)[0] / ((x - lo) ** el * (hi - x) ** er)

                val, _ = _quad(h, lo, hi, self.cfg, wvar=(el, er))
            total += val
        return total

    def _blackbox_cell(self, g, lo, hi, left_sing, right_sing) -> float:
        if left_sing and right_sing:
            mid = 0.5 * (lo + hi)
            return self._blackbox_cell(g, lo, mid, True, False) + self._blackbox_cell(g, mid, hi, False, True)
        end = "left" if left_sing else "right"
        vals = []
        for eps in self.cfg.cutoffs:
            width = (hi - lo) * eps
            a, b = (lo + width, hi) if end == "left" else (lo, hi - width)
            vals.append(graded_integral(g, a, b, end, self.cfg))
        if cutoff_divergence(vals):
            raise DivergenceError("integral grows as the cutoff shrinks", factor="integrand", partial=vals,
                                  witness={"interval": [lo, hi], "end": end})
        return graded_integral(g, lo, hi, end, self.cfg)

    def _numeric_box(self, box: Box, order: int = 10, depth: int = 14) -> float:
        nodes, weights = _leggauss(order)
        sing = self._singular_points()
        sing_t = [tuple(float(v) for v in s) for s in sing]
        corners = list(itertools.product((0, 1), repeat=self.dim))

        def rec(lo, hi, level, leaves):
            inside = any(all(l <= v <= h for l, v, h in zip(lo, s, hi)) for s in sing_t)
            if not inside or level >= depth:
                leaves.append((lo, hi))
                return
            mid = tuple(0.5 * (l + h) for l, h in zip(lo, hi))
            for bits in corners:
                rec(tuple(m if b else l for b, l, m in zip(bits, lo, mid)),
                    tuple(h if b else m for b, m, h in zip(bits, mid, hi)), level + 1, leaves)

        cuts = [set() for _ in range(self.dim)]
        lo, hi = np.asarray(box.lo), np.asarray(box.hi)
        for s in sing:
            for i in range(self.dim):
                if lo[i] < s[i] < hi[i]:
                    cuts[i].add(float(s[i]))
        edges = [[lo[i]] + sorted(cuts[i]) + [hi[i]] for i in range(self.dim)]
        leaves: list = []
        for idx in np.ndindex(*[len(e) - 1 for e in edges]):
            rec(tuple(float(edges[i][j]) for i, j in enumerate(idx)),
                tuple(float(edges[i][j + 1]) for i, j in enumerate(idx)), 0, leaves)
        # one tensor-product Gauss rule per leaf, all evaluated in a single call
        los = np.array([l for l, _ in leaves])
        his = np.array([h for _, h in leaves])
        ref = np.stack(np.meshgrid(*([nodes] * self.dim), indexing="ij"), axis=-1).reshape(-1, self.dim)
        refw = np.ones(1)
        for _ in range(self.dim):
            refw = np.outer(refw, weights).ravel()
        half, mid = 0.5 * (his - los), 0.5 * (his + los)
        pts = mid[:, None, :] + half[:, None, :] * ref[None, :, :]
        vals = self.density(pts.reshape(-1, self.dim)).reshape(len(leaves), -1)
        return float(np.sum((vals @ refw) * np.prod(half, axis=1)))

    def _numeric_ball(self, ball: Ball, n_radial: int = 24, n_angle: int = 48) -> float:
        """Polar coordinates about the ball center, radial mesh graded toward singular points."""
        n = self.dim
        c = np.asarray(ball.center)
        R = ball.radius
        cuts = {0.0, R}
        for s in self._singular_points():
            d = float(np.linalg.norm(s - c))
            if d < R:
                cuts.add(d)
        edges = sorted(cuts)
        if n == 2:
            theta = 2 * math.pi * (np.arange(n_angle) + 0.5) / n_angle
            dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
            dw = np.full(n_angle, 2 * math.pi / n_angle)
        else:
            ct, wt = np.polynomial.legendre.leggauss(n_angle // 2)
            phi = 2 * math.pi * (np.arange(n_angle) + 0.5) / n_angle
            st = np.sqrt(1 - ct ** 2)
            dirs = np.stack([np.outer(st, np.cos(phi)).ravel(), np.outer(st, np.sin(phi)).ravel(),
                             np.repeat(ct, n_angle)], axis=1)
            dw = np.repeat(wt, n_angle) * (2 * math.pi / n_angle)
            if n > 3:
                raise NotImplementedError("off-center balls beyond three dimensions need radial integrands")

        def shell(rho):
            rho = np.atleast_1d(rho)
            pts = c[None, None, :] + rho[:, None, None] * dirs[None, :, :]
            vals = self.density(pts.reshape(-1, n)).reshape(rho.size, -1)
            return (vals @ dw) * rho ** (n - 1)

        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            total += graded_integral(shell, lo, hi, "left" if lo > 0 or lo in cuts else None, self.cfg, max_levels=40)
        return total


# ------------------------------------------------------------------ public API

def weight_measure(w: Weight, region, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """w(region) = ∫_region w."""
    val = Integrand(None, w, 1.0, cfg).region(region)
    if not np.isfinite(val):
        raise DivergenceError(f"{w} is not integrable near its center", factor="weight",
                              witness=region.to_json())
    return val


def weighted_p_integral(f: TestFunction, w: Weight, p: float, region, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """∫_region |f|^p w; divergence raises with the cutoff sequence attached."""
    integrand = Integrand(f, w, p, cfg)
    val = integrand.region(region)
    if not np.isfinite(val):
        partial = [truncated_integral(f, w, p, region, eps, cfg) for eps in cfg.cutoffs]
        raise DivergenceError("integrand is not integrable on the region", factor="integrand",
                              witness=region.to_json(), partial=partial)
    return val


def truncated_integral(f: TestFunction, w: Weight, p: float, region, eps: float,
                       cfg: QuadratureConfig = DEFAULT_CONFIG, around=None) -> float:
    """∫ over region minus the ball B_eps(around) (default the origin)."""
    integrand = Integrand(f, w, p, cfg)
    n = w.dim
    s = np.zeros(n) if around is None else np.asarray(around, float).reshape(n)
    if n == 1:
        box = region.bounding_box()
        a, b = box.lo[0], box.hi[0]
        left = integrand.interval(a, min(b, s[0] - eps)) if a < s[0] - eps else 0.0
        right = integrand.interval(max(a, s[0] + eps), b) if b > s[0] + eps else 0.0
        return left + right
    if integrand.route == "radial" and isinstance(region, Ball) and not any(region.center) and not np.any(s):
        area = unit_sphere_area(n)
        total = 0.0
        for pc in integrand.pieces:
            lo, hi = max(pc.lo, eps), min(pc.hi, region.radius)
            if hi > lo:
                total += pc.coef * area * float(interval_power_integral(lo, hi, 0.0, pc.e + n - 1))
        return total
    raise NotImplementedError(f"truncation needs a radial integrand in dimension {n}")
