"""Empirical checks: test-function corpora, norm-ratio scans and worked examples."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DEFAULT_CONFIG,
    INF,
    Box,
    DivergenceError,
    PreconditionError,
    QuadratureConfig,
    SpaceSpec,
    Weight,
    unit_ball_volume,
)
from .functions import AbsPower, Dilate, IndicatorPower, Product, Sum, TestFunction, indicator, spike
from .integrate import cutoff_divergence, truncated_integral
from .norms import lebesgue_norm, morrey_norm
from .search import BallFamily, family_for

__all__ = [
    "CORPUS_KINDS",
    "corpus_generate",
    "default_corpus",
    "ratio_scan",
    "RatioScan",
    "dilate_ratios",
    "is_monotone_growth",
    "paper_example_check",
    "power_identity_check",
    "product_inequality_check",
    "weight_equivalence_check",
    "ball_cube_bounds",
    "MorreyCache",
]

CORPUS_KINDS = ("indicator", "spike", "dilate", "sum")


# ------------------------------------------------------------------ corpus

def _spike_floor(p: float, alpha: float, n: int = 1) -> float:
    """Smallest admissible spike exponent: p·γ + α > −n."""
    return (-n - alpha) / p


def corpus_generate(count: int | dict = 20, kinds=None, seed: int = 0, weight: Weight | None = None,
                    p: float = 3.0) -> list[TestFunction]:
    """Deterministic corpus of unit-scale line test functions (supports inside [-2, 2]).

    Spike exponents are drawn strictly inside p·γ + α > −1 for the declared p and the
    weight's smaller exponent (defaults: p = 3, unweighted), so every function is
    locally p-integrable against the weight.  ``count`` may also be a dict with the
    keys count, kinds, seed, weight, p.
    """
    if isinstance(count, dict):
        spec = dict(count)
        w = spec.get("weight")
        return corpus_generate(int(spec.get("count", 20)), spec.get("kinds"), int(spec.get("seed", 0)),
                               Weight.from_json(w) if isinstance(w, dict) else w, float(spec.get("p", 3.0)))
    if count < 1:
        raise PreconditionError("count must be at least 1")
    kinds = tuple(kinds) if kinds else CORPUS_KINDS
    bad = set(kinds) - set(CORPUS_KINDS)
    if bad:
        raise PreconditionError(f"unknown corpus kinds {sorted(bad)}")
    alpha = 0.0 if weight is None else float(min(weight.alpha, weight.beta))
    floor = _spike_floor(p, alpha)
    if floor >= 0:
        floor = -0.0
    rng = np.random.default_rng(seed)

    def make_indicator(scale=1.0):
        a = rng.uniform(-2, 1.6)
        hi = min(2.0, a + rng.uniform(0.2, 2))
        return indicator(scale * a, scale * hi, round(rng.uniform(0.5, 2), 3))

    def make_spike(scale=1.0):
        gamma = floor * rng.uniform(0.1, 0.9)
        lo = 0.0 if rng.random() < 0.5 else -rng.uniform(0.2, 2)
        return spike(scale * lo, scale * rng.uniform(0.2, 2), gamma, round(rng.uniform(0.5, 2), 3))

    def make_dilate():
        base = make_spike(0.5) if rng.random() < 0.5 else make_indicator(0.5)
        return Dilate(base, float(2.0 ** rng.uniform(-1, 1)))

    def make_sum():
        gamma = floor * rng.uniform(0.1, 0.9)
        b = rng.uniform(0.2, 1)
        start = b + rng.uniform(0.1, 0.5)
        end = rng.uniform(start + 0.1, 2.0)
        return Sum([spike(0.0, b, gamma, 1.0), indicator(start, end, round(rng.uniform(0.5, 2), 3))])

    makers = {"indicator": make_indicator, "spike": make_spike, "dilate": make_dilate, "sum": make_sum}
    return [makers[kinds[i % len(kinds)]]() for i in range(count)]


def default_corpus() -> list[TestFunction]:
    """The 20-function corpus used by the scans (seed 0, every kind)."""
    return corpus_generate(20, seed=0)


# ------------------------------------------------------------------ ratio scans

class MorreyCache:
    """Memoised Morrey norms keyed by function, space and family."""

    def __init__(self, cfg: QuadratureConfig = DEFAULT_CONFIG):
        self.cfg = cfg
        self._store: dict[str, float] = {}

    def norm(self, f: TestFunction, space: SpaceSpec, family: BallFamily) -> float:
        key = json.dumps([f.to_json(), space.to_json(), family.to_json()], sort_keys=True, default=str)
        if key not in self._store:
            try:
                rep = morrey_norm(f, space, family, self.cfg)
                self._store[key] = INF if rep.divergent else rep.value
            except DivergenceError:
                self._store[key] = INF
        return self._store[key]


@dataclass
class RatioScan:
    sup_ratio: float
    median_ratio: float
    witness: dict | None
    table: list[dict] = field(default_factory=list)
    target_divergent: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"sup_ratio": self.sup_ratio, "median_ratio": self.median_ratio, "witness": self.witness,
                "target_divergent": self.target_divergent, "table": self.table}


def ratio_scan(source: SpaceSpec, target: SpaceSpec, corpus=None, family: BallFamily | None = None,
               cfg: QuadratureConfig = DEFAULT_CONFIG, refinement_levels: int = 3,
               cache: MorreyCache | None = None) -> RatioScan:
    """max over the corpus of ‖f‖_target / ‖f‖_source, skipping divergent sources."""
    source.require_nontrivial()
    target.require_nontrivial()
    corpus = default_corpus() if corpus is None else corpus
    cache = MorreyCache(cfg) if cache is None else cache
    rows, ratios, flagged = [], [], []
    best, witness = -1.0, None
    for i, f in enumerate(corpus):
        fam = family if family is not None else family_for(f, source.weight, refinement_levels=refinement_levels,
                                                           others=[target.weight])
        s = cache.norm(f, source, fam)
        t = cache.norm(f, target, fam)
        row = {"index": i, "function": f.to_json(), "source_norm": s, "target_norm": t}
        if not np.isfinite(s) or s == 0:
            row["status"] = "source_divergent" if not np.isfinite(s) else "zero"
        elif not np.isfinite(t):
            row["status"] = "target_divergent"
            flagged.append(i)
        else:
            r = t / s
            row.update(status="ok", ratio=r)
            ratios.append(r)
            if r > best:
                best, witness = r, {"index": i, "function": f.to_json()}
        rows.append(row)
    if not ratios and not flagged:
        raise DivergenceError("every corpus function diverges in the source space")
    sup = INF if flagged else (best if ratios else 0.0)
    median = float(np.median(ratios)) if ratios else INF
    return RatioScan(sup, median, witness, rows, flagged)


def dilate_ratios(source: SpaceSpec, target: SpaceSpec, base: TestFunction | None = None,
                  exponents=range(11), cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[list[float], list[float]]:
    """Norm ratios target/source along f(λx); λ = 2^k when u_target > u_source, else 2^{-k}."""
    base = indicator(0, 1) if base is None else base
    sign = 1 if float(target.u) > float(source.u) else -1
    lams, out = [], []
    for k in exponents:
        lam = 2.0 ** (sign * k)
        f = Dilate(base, lam)
        fam = family_for(f, source.weight, others=[target.weight])
        s = morrey_norm(f, source, fam, cfg).value
        t = morrey_norm(f, target, fam, cfg).value
        lams.append(lam)
        out.append(t / s)
    return lams, out


def is_monotone_growth(values, rel: float = 1e-9) -> bool:
    return all(b > a * (1 + rel) for a, b in zip(values[:-1], values[1:]))


# ------------------------------------------------------------------ worked example

def paper_example_check(alpha: float, eps_list=(1e-4, 1e-6, 1e-8), family: BallFamily | None = None,
                        cfg: QuadratureConfig = DEFAULT_CONFIG) -> dict:
    """f = χ_(0,1)|x|^{-1/2} against w = |x|^α on the line, u = 2(α+1).

    f lies in M_{u,1}(w) but not in L_u(w): |f|^u w = x^{-1} on (0, 1), so the integral
    cut off at ε equals ln(1/ε) exactly.
    """
    alpha = float(alpha)
    if not -0.5 < alpha < 0:
        raise PreconditionError("alpha must lie in (-1/2, 0)")
    w = Weight.power(alpha, 1)
    u = 2 * (alpha + 1)
    f = spike(0, 1, -0.5)
    rep = morrey_norm(f, SpaceSpec(u, 1, w), family, cfg)
    try:
        lebesgue_norm(f, u, w, cfg=cfg)
        divergent = False
    except DivergenceError:
        divergent = True
    region = Box([0.0], [1.0])
    truncated = []
    for eps in eps_list:
        val = truncated_integral(f, w, u, region, eps, cfg)
        expected = math.log(1 / eps)
        truncated.append({"eps": eps, "value": val, "expected": expected, "rel_err": abs(val - expected) / expected})
    partial = [t["value"] for t in truncated]
    return {
        "alpha": alpha,
        "u": u,
        "morrey": {"value": rep.value, "stable": rep.stable, "last_change": rep.last_change,
                   "finite": bool(np.isfinite(rep.value)) and not rep.divergent},
        "lebesgue": {"divergent": divergent, "cutoff_growth": cutoff_divergence(partial)},
        "truncated": truncated,
    }


# ------------------------------------------------------------------ identities

def power_identity_check(f: TestFunction, space: SpaceSpec, r: float, family: BallFamily | None = None,
                         cfg: QuadratureConfig = DEFAULT_CONFIG) -> dict:
    """‖|f|^r‖ in M_{u/r,p/r}(w) against ‖f‖^r in M_{u,p}(w) on one family."""
    family = family_for(f, space.weight) if family is None else family
    base = morrey_norm(f, space, family, cfg).value
    powered = morrey_norm(AbsPower(f, r), SpaceSpec(float(space.u) / r, float(space.p) / r, space.weight),
                          family, cfg).value
    target = base ** r
    return {"lhs": powered, "rhs": target, "rel_err": abs(powered - target) / target if target else abs(powered)}


def product_inequality_check(f_list, u_list, p_list, w: Weight, p, family: BallFamily | None = None,
                             cfg: QuadratureConfig = DEFAULT_CONFIG) -> dict:
    """Ratio ‖f0·f1⋯fm‖_{M_{u,p}(w)} / (‖f0‖_∞ ∏ ‖fj‖_{M_{uj,pj}(w)}) with 1/u = Σ 1/uj.

    ``f_list[0]`` is the bounded factor (None means f0 ≡ 1); u_list and p_list index
    the remaining factors.
    """
    f0, factors = f_list[0], list(f_list[1:])
    if len(factors) != len(u_list) or len(factors) != len(p_list):
        raise PreconditionError("one (u, p) pair per unbounded factor")
    if not factors:
        raise PreconditionError("at least one Morrey factor is needed")
    inv_p = sum(1.0 / float(pj) for pj in p_list)
    if inv_p > 1.0 / float(p) + 1e-12:
        raise PreconditionError("need sum 1/p_j <= 1/p")
    u = 1.0 / sum(1.0 / float(uj) for uj in u_list)
    dim = factors[0].dim
    f0 = IndicatorPower(None, 0.0, 1.0, dim) if f0 is None else f0
    sup0 = lebesgue_norm(f0, INF)
    if sup0 == 0:
        return {"ratio": 0.0, "u": u, "product_norm": 0.0, "factor_norms": [], "skipped": []}
    norms, skipped = [], []
    for j, (fj, uj, pj) in enumerate(zip(factors, u_list, p_list)):
        fam = family_for(fj, w) if family is None else family
        try:
            rep = morrey_norm(fj, SpaceSpec(float(uj), float(pj), w), fam, cfg)
        except DivergenceError as exc:
            skipped.append({"factor": j + 1, "reason": str(exc)})
            continue
        if rep.divergent or not np.isfinite(rep.value):
            skipped.append({"factor": j + 1, "reason": "divergent Morrey norm"})
            continue
        norms.append(rep.value)
    if skipped:
        return {"ratio": None, "u": u, "product_norm": None, "factor_norms": norms, "skipped": skipped}
    prod = Product([f0] + factors)
    fam = family_for(prod, w) if family is None else family
    pn = morrey_norm(prod, SpaceSpec(u, float(p), w), fam, cfg).value
    denom = sup0 * float(np.prod(norms))
    return {"ratio": pn / denom if denom else INF, "u": u, "product_norm": pn, "factor_norms": norms,
            "skipped": []}


def weight_equivalence_check(w: Weight, v: Weight, samples: int = 4001) -> dict:
    """Whether c_low·v ≤ w ≤ c_high·v everywhere, with the optimal constants.

    Equivalence needs equal local exponents at every singular center and equal
    exponents at infinity.  For a shared center the ratio is a radial piecewise power
    and its extremes sit at the knees or at the constant ends; otherwise it is sampled.
    """
    if w.dim != v.dim:
        raise PreconditionError("weights live in different dimensions")
    centers = {tuple(w.origin)} | {tuple(v.origin)}
    for c in centers:
        lw = w.alpha if tuple(w.origin) == c else 0
        lv = v.alpha if tuple(v.origin) == c else 0
        if w.is_constant:
            lw = 0
        if v.is_constant:
            lv = 0
        if float(lw) != float(lv):
            return {"equivalent": False, "reason": f"local exponents {float(lw)} and {float(lv)} differ at {[float(x) for x in c]}"}
    if float(w.beta) != float(v.beta):
        return {"equivalent": False, "reason": f"exponents at infinity {float(w.beta)} and {float(v.beta)} differ"}
    if len(centers) == 1:
        knees = [float(w.knee), float(v.knee)]
        r = np.array([min(knees) * 1e-3] + knees + [max(knees) * 1e3])
        ratio = w.profile(r) / v.profile(r)
        method = "analytic"
    else:
        c = np.array([cc[0] for cc in centers], float)
        span = float(np.ptp(c)) + max(float(w.knee), float(v.knee))
        x = np.concatenate([np.linspace(c.min() - 10 * span, c.max() + 10 * span, samples),
                            np.concatenate([cc + s * np.geomspace(1e-9, span, 200) for cc in c for s in (-1, 1)])])
        x = x.reshape(-1, 1) if w.dim == 1 else np.hstack([x.reshape(-1, 1), np.zeros((x.size, w.dim - 1))])
        ok = np.all([np.linalg.norm(x - np.asarray(cc), axis=1) > 0 for cc in centers], axis=0)
        ratio = w(x[ok]) / v(x[ok])
        method = "sampled"
    return {"equivalent": True, "c_low": float(np.min(ratio)), "c_high": float(np.max(ratio)), "method": method}


def ball_cube_bounds(dim: int, u, p) -> tuple[float, float]:
    """[c, C] with c·‖f‖_balls ≤ ‖f‖_cubes ≤ C·‖f‖_balls for unweighted Morrey norms.

    Cubes use half sides: B(r) ⊂ Q(r) ⊂ B(√n r).
    """
    e = 1.0 / float(p) - 1.0 / float(u)
    cube = 2.0 ** dim
    ball = unit_ball_volume(dim)
    big = unit_ball_volume(dim) * dim ** (dim / 2)
    return (ball / cube) ** e, (big / cube) ** e
