"""Muckenhoupt machinery for descriptor weights."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    DEFAULT_CONFIG,
    INF,
    Ball,
    DivergenceError,
    Number,
    PreconditionError,
    QuadratureConfig,
    Weight,
    holder_conjugate,
    unit_ball_volume,
    weight_pow,
    weight_product,
)
from .integrate import Integrand, line_nodes
from .search import BallFamily, TrendResult, classify_trend, family_for, sup_search

__all__ = [
    "ap_ball_expression",
    "ap_constant_estimate",
    "ap_membership_analytic",
    "critical_index",
    "doubling_constant_estimate",
    "reverse_holder_search",
    "a1_check",
    "apq_ball_expression",
    "factor_forward_check",
    "CriticalIndex",
    "DoublingReport",
    "ReverseHolder",
]


def _volumes(radii: np.ndarray, n: int) -> np.ndarray:
    return unit_ball_volume(n) * np.asarray(radii, float) ** n


def _dual_exponent(p) -> Number:
    """-p'/p = -1/(p-1)."""
    return -1 / (Fraction(p) - 1) if isinstance(p, (int, Fraction)) else -1.0 / (p - 1.0)


def ap_ball_expression(w: Weight, p, ball: Ball, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """[avg_B w]·[avg_B w^{-p'/p}]^{p/p'}."""
    if not p > 1:
        raise PreconditionError("the A_p expression needs p > 1")
    vol = ball.volume()
    m1 = Integrand(None, w, 1.0, cfg).region(ball)
    if not np.isfinite(m1):
        raise DivergenceError(f"{w} is not integrable on the ball", factor="weight", witness=ball.to_json())
    sigma = weight_pow(w, _dual_exponent(p))
    m2 = Integrand(None, sigma, 1.0, cfg).region(ball)
    if not np.isfinite(m2):
        raise DivergenceError(f"{sigma} is not integrable on the ball", factor="dual weight", witness=ball.to_json())
    return (m1 / vol) * (m2 / vol) ** (float(p) - 1.0)


def _ap_evaluator(w: Weight, p, cfg):
    num = Integrand(None, w, 1.0, cfg)
    dual = Integrand(None, weight_pow(w, _dual_exponent(p)), 1.0, cfg)
    e = float(p) - 1.0

    def evaluate(centers, radii):
        vol = _volumes(radii, w.dim)
        with np.errstate(invalid="ignore", over="ignore"):
            return (num.balls(centers, radii) / vol) * (dual.balls(centers, radii) / vol) ** e

    return evaluate


def ap_constant_estimate(w: Weight, p, family: BallFamily | None = None, cfg: QuadratureConfig = DEFAULT_CONFIG,
                         extensions: int = 3) -> TrendResult:
    """Supremum of the A_p expression over the family, with a growth trend under extension."""
    if not p > 1:
        raise PreconditionError("use a1_check for p = 1")
    family = family_for(None, w) if family is None else family
    return classify_trend(_ap_evaluator(w, p, cfg), family, extensions)


def ap_membership_analytic(w: Weight, p) -> bool:
    """Exact A_p membership of a descriptor: both exponents in (-n, n(p-1)), or (-n, 0] for p = 1."""
    if not p >= 1:
        raise PreconditionError("A_p classes start at p = 1")
    n = w.dim
    if w.is_constant:
        return True
    if p == 1:
        return all(-n < e <= 0 for e in (w.alpha, w.beta))
    if math.isinf(p):
        return all(-n < e for e in (w.alpha, w.beta))
    hi = n * (p - 1)
    return all(-n < e < hi for e in (w.alpha, w.beta))


@dataclass(frozen=True)
class CriticalIndex:
    r: Number
    attained: bool

    def to_json(self) -> dict:
        return {"r": float(self.r), "attained": self.attained}


def critical_index(w: Weight) -> CriticalIndex:
    """inf{r ≥ 1 : w ∈ A_r} = max(alpha, beta, 0)/n + 1, attained only when both exponents are ≤ 0."""
    if not w.in_a_infinity():
        raise PreconditionError(f"{w} is not in A_infinity (an exponent is ≤ -n)")
    top = max(w.alpha, w.beta, 0)
    r = Fraction(top) / w.dim + 1 if isinstance(top, (int, Fraction)) else top / w.dim + 1.0
    return CriticalIndex(r, top <= 0)


@dataclass
class DoublingReport:
    C: float
    D_lower: float
    centered_C: float
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"C": self.C, "D_lower": self.D_lower, "centered_C": self.centered_C, "witness": self.witness}


def doubling_constant_estimate(w: Weight, family: BallFamily | None = None,
                               cfg: QuadratureConfig = DEFAULT_CONFIG) -> DoublingReport:
    """C = sup w(2B)/w(B) over the family and over balls centered at the weight center; D = 1 + 1/C³."""
    if not w.locally_integrable():
        raise DivergenceError(f"{w} is not locally integrable", factor="weight")
    family = family_for(None, w) if family is None else family
    m = Integrand(None, w, 1.0, cfg)

    def ratio(centers, radii):
        return m.balls(centers, 2 * radii) / m.balls(centers, radii)

    res = sup_search(ratio, family)
    radii = family.radius_grid()
    centered = ratio(np.repeat(w.origin[None, :], radii.size, axis=0), radii)
    c_centered = float(np.max(centered))
    C = max(res.value, c_centered)
    return DoublingReport(C, 1.0 + 1.0 / C ** 3, c_centered, res.witness())


@dataclass
class ReverseHolder:
    r: float
    c: float
    trace: list

    def to_json(self) -> dict:
        return {"r": self.r, "c": self.c}


RH_GRID = tuple(round(1 + 0.05 * k, 2) for k in range(1, 61))


def reverse_holder_search(w: Weight, family: BallFamily | None = None, cfg: QuadratureConfig = DEFAULT_CONFIG,
                          grid=RH_GRID) -> ReverseHolder | None:
    """Largest r on the grid with sup_B [avg w^r]^{1/r} / avg w trending bounded; None if none is."""
    if not w.in_a_infinity():
        raise PreconditionError(f"{w} is not in A_infinity")
    family = family_for(None, w) if family is None else family
    base = Integrand(None, w, 1.0, cfg)
    best, trace = None, []
    for r in grid:
        powered = Integrand(None, weight_pow(w, r), 1.0, cfg)

        def evaluate(centers, radii, powered=powered, r=r):
            vol = _volumes(radii, w.dim)
            with np.errstate(invalid="ignore", over="ignore"):
                return (powered.balls(centers, radii) / vol) ** (1.0 / r) / (base.balls(centers, radii) / vol)

        res = classify_trend(evaluate, family)
        trace.append((r, res.trend, res.estimate))
        if res.trend == "bounded":
            best = ReverseHolder(float(r), res.estimate, trace)
        elif res.trend == "growing":
            break
    if best is not None:
        best.trace = trace
    return best


def _essinf(w: Weight, centers: np.ndarray, radii: np.ndarray) -> np.ndarray:
    d = np.linalg.norm(centers - w.origin[None, :], axis=1)
    rmin, rmax = np.maximum(d - radii, 0.0), d + radii
    vals = [w.profile(rmin), w.profile(rmax)]
    k = float(w.knee)
    inside = (rmin < k) & (k < rmax)
    vals.append(np.where(inside, w.profile(np.full(d.shape, k)), INF))
    out = np.minimum.reduce(vals)
    a = float(w.alpha)
    if a > 0:
        out = np.where(rmin == 0, 0.0, out)
    return out


def a1_check(w: Weight, family: BallFamily | None = None, cfg: QuadratureConfig = DEFAULT_CONFIG,
             extensions: int = 3) -> TrendResult:
    """sup_B avg_B w / essinf_B w with the essential infimum read off the descriptor."""
    if not w.locally_integrable():
        raise DivergenceError(f"{w} is not locally integrable", factor="weight")
    family = family_for(None, w) if family is None else family
    m = Integrand(None, w, 1.0, cfg)

    def evaluate(centers, radii):
        avg = m.balls(centers, radii) / _volumes(radii, w.dim)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(avg > 0, avg / _essinf(w, centers, radii), 0.0)

    return classify_trend(evaluate, family, extensions)


def apq_ball_expression(w: Weight, p, q, ball: Ball, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """(avg w^q)^{1/q}·(avg w^{-p'})^{1/p'}, with esssup 1/w in place of the second factor for p = 1."""
    if not (1 <= p < q < INF):
        raise PreconditionError("need 1 ≤ p < q < ∞")
    vol = ball.volume()
    mq = Integrand(None, weight_pow(w, q), 1.0, cfg).region(ball)
    if not np.isfinite(mq):
        raise DivergenceError("w^q is not integrable on the ball", factor="weight^q", witness=ball.to_json())
    first = (mq / vol) ** (1.0 / float(q))
    if p == 1:
        inf_w = float(_essinf(w, np.asarray(ball.center)[None, :], np.array([ball.radius]))[0])
        if inf_w == 0:
            raise DivergenceError("1/w is unbounded on the ball", factor="1/w", witness=ball.to_json())
        return first / inf_w
    pp = holder_conjugate(p)
    md = Integrand(None, weight_pow(w, -pp), 1.0, cfg).region(ball)
    if not np.isfinite(md):
        raise DivergenceError("w^{-p'} is not integrable on the ball", factor="weight^-p'", witness=ball.to_json())
    return first * (md / vol) ** (1.0 / float(pp))


def factor_forward_check(w1: Weight, w2: Weight, p, family: BallFamily | None = None,
                         cfg: QuadratureConfig = DEFAULT_CONFIG) -> TrendResult:
    """A_p trend of w1·w2^{1-p} for A_1 weights w1, w2."""
    for w in (w1, w2):
        if not ap_membership_analytic(w, 1):
            raise PreconditionError(f"{w} is not an A_1 weight")
    if not p >= 1:
        raise PreconditionError("p must be at least 1")
    try:
        prod = weight_product(w1, weight_pow(w2, 1 - p))
    except PreconditionError:
        return _numeric_factor_trend(w1, w2, p, family, cfg)
    if p == 1:
        return a1_check(prod, family, cfg)
    return ap_constant_estimate(prod, p, family, cfg)


def _numeric_factor_trend(w1: Weight, w2: Weight, p, family, cfg) -> TrendResult:
    """Line-only fallback when the product is not a descriptor: graded Gauss rule per ball."""
    if w1.dim != 1:
        raise PreconditionError("non-descriptor products are supported on the line only")
    p = float(p)
    if p == 1:
        raise PreconditionError("non-descriptor products need p > 1")
    w2p = weight_pow(w2, 1 - p)
    kinks = sorted({float(w.origin[0]) + s * float(w.knee) for w in (w1, w2) for s in (-1, 0, 1)})

    s = -1 / (p - 1)
    dual1, dual2 = weight_pow(w1, s), weight_pow(w2p, s)

    def evaluate(centers, radii):
        out = np.empty(radii.size)
        for i, (c, r) in enumerate(zip(centers[:, 0], radii)):
            x, wt, _ = line_nodes(c - r, c + r, kinks)
            m1 = np.dot(wt, w1(x) * w2p(x)) / (2 * r)
            # powers taken factorwise so a zero of one factor never meets a negative exponent
            m2 = np.dot(wt, dual1(x) * dual2(x)) / (2 * r)
            out[i] = m1 * m2 ** (p - 1)
        return out

    family = family_for(None, w1) if family is None else family
    small = BallFamily(dim=1, center_range=family.center_range, n_centers=9, radius_range=family.radius_range,
                       n_radii=16, refinement_levels=1, anchors=tuple((k,) for k in kinks))
    return classify_trend(evaluate, small, extensions=2)
