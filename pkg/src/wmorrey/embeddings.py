"""Embedding decisions between (weighted) Morrey spaces.

Conditions that are closed-form inequalities in the exponents are evaluated in exact
rational arithmetic; conditions that are suprema over balls are either read off the
power-weight windows or sampled numerically with a growth trend.  Failing a
sufficient condition never produces ``not_embeds`` outside the unweighted case,
where the characterization is an equivalence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    DEFAULT_CONFIG,
    INF,
    DivergenceError,
    EmbeddingVerdict,
    Number,
    PreconditionError,
    QuadratureConfig,
    SpaceSpec,
    SupConditionReport,
    Weight,
    unit_ball_volume,
)
from .functions import Sum, TestFunction, indicator, spike
from .integrate import Integrand
from .norms import lebesgue_norm, morrey_evaluator, morrey_norm, weak_lebesgue_norm
from .search import BallFamily, classify_trend, family_for

__all__ = [
    "decide_unweighted",
    "decide_same_weight",
    "decide_weighted_to_unweighted",
    "decide_unweighted_to_weighted",
    "decide_general",
    "decide_spaces",
    "two_weight_power_conditions",
    "sup_condition_evidence",
    "chain_membership_witnesses",
    "Condition",
    "EXPRESSIONS",
]


def _q(x) -> Number:
    """Exact rational for finite inputs (floats through their shortest decimal form); ∞ stays float."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not exponents")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if math.isinf(x):
            if x < 0:
                raise PreconditionError("exponents must be positive")
            return INF
        return Fraction(repr(x))
    if isinstance(x, str):
        s = x.strip().lower()
        return INF if s in ("inf", "infinity", "∞") else Fraction(s)
    return Fraction(x)


def _inv(x: Number) -> Fraction:
    return Fraction(0) if x == INF else 1 / x


def _num(x) -> float | str:
    if x == INF:
        return "inf"
    return float(x)


@dataclass(frozen=True)
class Condition:
    """One evaluated inequality lhs <relation> rhs."""

    id: str
    lhs: Number
    relation: str
    rhs: Number

    @property
    def holds(self) -> bool:
        return {"<": self.lhs < self.rhs, "<=": self.lhs <= self.rhs,
                ">=": self.lhs >= self.rhs, ">": self.lhs > self.rhs, "==": self.lhs == self.rhs}[self.relation]

    @property
    def tight(self) -> bool:
        """A strict inequality failing only through equality."""
        return self.relation in ("<", ">") and self.lhs == self.rhs

    def to_json(self) -> dict:
        return {"id": self.id, "lhs": _num(self.lhs), "relation": self.relation, "rhs": _num(self.rhs),
                "holds": self.holds}


def _verdict(theorem: str, conditions: list[Condition], reports=(), extra: dict | None = None) -> EmbeddingVerdict:
    failed = [c for c in conditions if not c.holds]
    if not failed:
        cert = {"theorem": theorem, "conditions": [c.to_json() for c in conditions]}
        if extra:
            cert.update(extra)
        return EmbeddingVerdict("embeds", certificate=cert, reports=tuple(reports))
    return EmbeddingVerdict("inconclusive", failed_conditions=tuple(c.to_json() for c in failed),
                            boundary=any(c.tight for c in failed), reports=tuple(reports))


def _check_pair(u, p, label: str) -> tuple[Number, Number]:
    u, p = _q(u), _q(p)
    if not (p > 0 and u > 0):
        raise PreconditionError(f"{label}: exponents must be positive")
    if p > u:
        raise PreconditionError(f"{label}: p = {_num(p)} > u = {_num(u)} gives the trivial space")
    return u, p


def _exponents(w: Weight) -> tuple[Fraction, Fraction]:
    return _q(w.alpha), _q(w.beta)


def _r_index(w: Weight) -> Fraction:
    a, b = _exponents(w)
    return max(a, b, Fraction(0)) / w.dim + 1


def _in_a1(w: Weight) -> bool:
    a, b = _exponents(w)
    return max(a, b) <= 0


def _require_a_infinity(w: Weight, label: str) -> None:
    a, b = _exponents(w)
    if not min(a, b) > -w.dim:
        raise PreconditionError(f"{label} = {w} is not in A_infinity")


# ------------------------------------------------------------------ unweighted and same weight

def decide_unweighted(u1, q, u2, p) -> EmbeddingVerdict:
    """M_{u1,q} ↪ M_{u2,p} exactly when p ≤ q and u1 = u2 (L_∞ = M_{∞,p} for every p)."""
    u1, q = _check_pair(u1, q, "source")
    u2, p = _check_pair(u2, p, "target")
    same_u = Condition("u1 == u2", u1, "==", u2)
    if u1 == INF and u2 == INF:
        return _verdict("unweighted characterization (both spaces are L_inf)", [same_u])
    order = Condition("p <= q", p, "<=", q)
    conds = [same_u, order]
    failed = [c for c in conds if not c.holds]
    if not failed:
        return _verdict("unweighted characterization", conds)
    return EmbeddingVerdict("not_embeds", witness={
        "necessary_condition": "p <= q <= u1 == u2",
        "violated": [c.to_json() for c in failed],
        "evidence": "dilates f(lambda x) scale the norm ratio like lambda^(n/u1 - n/u2)"
        if not same_u.holds else "the characterization is an equivalence",
    })


def decide_same_weight(u1, q, u2, p, w: Weight) -> EmbeddingVerdict:
    """M_{u1,q}(w) ↪ M_{u2,p}(w) for u1 = u2 and p ≤ q; constant weights get the full characterization."""
    if w.is_constant:
        return decide_unweighted(u1, q, u2, p)
    u1, q = _check_pair(u1, q, "source")
    u2, p = _check_pair(u2, p, "target")
    conds = [Condition("u1 == u2", u1, "==", u2), Condition("p <= q", p, "<=", q)]
    return _verdict("weighted Hoelder, same weight", conds)


# ------------------------------------------------------------------ one weight

def _w2u_conditions(u1, q, w: Weight, u2, p) -> list[Condition]:
    n = w.dim
    a, b = _exponents(w)
    i1, i2 = _inv(u1), _inv(u2)
    conds = [
        Condition("sup |B|^(1/u2)/w(B)^(1/u1): large balls", i1 * (1 + b / n), ">=", i2),
        Condition("sup |B|^(1/u2)/w(B)^(1/u1): small balls", i2, ">=", i1 * (1 + max(a, 0) / n)),
    ]
    if _in_a1(w):
        conds.append(Condition("w in A_1 so p <= q suffices", p, "<=", q))
    else:
        conds.append(Condition("r_w < q/p", _r_index(w), "<", q / p))
    return conds


def _u2w_conditions(u1, q, u2, p, v: Weight) -> list[Condition]:
    n = v.dim
    a, b = _exponents(v)
    i1, i2 = _inv(u1), _inv(u2)
    conds = [
        Condition("sup condition: large balls", i2 * (1 + b / n), "<=", i1),
        Condition("sup condition: small balls", i1, "<=", i2 * (1 + min(a, 0) / n)),
    ]
    if _in_a1(v.reciprocal()):
        conds.append(Condition("1/v in A_1 so p <= q suffices", p, "<=", q))
    else:
        conds.append(Condition("r_(1/v) < 2 - p/q", _r_index(v.reciprocal()), "<", 2 - p / q))
    return conds


def _maybe_report(expression_id: str, params: dict, evidence: bool, family, cfg) -> tuple:
    if not evidence:
        return ()
    return (sup_condition_evidence(expression_id, params, family, cfg),)


def decide_weighted_to_unweighted(u1, q, w: Weight, u2, p, family: BallFamily | None = None,
                                  cfg: QuadratureConfig = DEFAULT_CONFIG, evidence: bool = False) -> EmbeddingVerdict:
    """M_{u1,q}(w) ↪ M_{u2,p}: sup_B |B|^{1/u2}/w(B)^{1/u1} < ∞ and r_w < q/p (p = q for A_1 weights)."""
    u1, q = _check_pair(u1, q, "source")
    u2, p = _check_pair(u2, p, "target")
    if u1 == INF or u2 == INF:
        raise PreconditionError("weighted embeddings need finite u")
    _require_a_infinity(w, "w")
    conds = _w2u_conditions(u1, q, w, u2, p)
    reports = _maybe_report("weighted_to_unweighted", {"u1": u1, "u2": u2, "w": w}, evidence, family, cfg)
    return _verdict("weighted into unweighted", conds, reports)


def decide_unweighted_to_weighted(u1, q, u2, p, v: Weight, family: BallFamily | None = None,
                                  cfg: QuadratureConfig = DEFAULT_CONFIG, evidence: bool = False) -> EmbeddingVerdict:
    """M_{u1,q} ↪ M_{u2,p}(v): the ball supremum and r_{1/v} < 2 − p/q (p = q when 1/v ∈ A_1)."""
    u1, q = _check_pair(u1, q, "source")
    u2, p = _check_pair(u2, p, "target")
    if u1 == INF or u2 == INF:
        raise PreconditionError("weighted embeddings need finite u")
    _require_a_infinity(v.reciprocal(), "1/v")
    if not v.locally_integrable():
        raise PreconditionError(f"{v} is not locally integrable")
    conds = _u2w_conditions(u1, q, u2, p, v)
    reports = _maybe_report("unweighted_to_weighted", {"u1": u1, "u2": u2, "p": p, "v": v}, evidence, family, cfg)
    return _verdict("unweighted into weighted", conds, reports)


# ------------------------------------------------------------------ two weights

def two_weight_power_conditions(u1, q, w: Weight, u2, p, v: Weight, a1_route: bool = True) -> list[Condition] | None:
    """Window and index conditions for two power-type weights with a common center and knee.

    Returns None when the weights are not ordered as the window requires (the large-ball
    exponent of w is its larger one and that of v its smaller one).
    """
    u1, q, u2, p = _q(u1), _q(q), _q(u2), _q(p)
    if w.dim != v.dim or w.origin.tolist() != v.origin.tolist() or _q(w.knee) != _q(v.knee):
        return None
    n = w.dim
    a1, b1 = _exponents(w)
    a2, b2 = _exponents(v)
    if b1 != max(a1, b1) or b2 != min(a2, b2):
        return None
    i1, i2 = _inv(u1), _inv(u2)
    lower = max(i2 * (1 + b2 / n), i1 * (1 + max(a1, 0) / n))
    upper = min(i2 * (1 + min(a2, 0) / n), i1 * (1 + b1 / n))
    conds = [Condition("power window: max(...) <= min(...)", lower, "<=", upper)]
    r_w, r_vinv = _r_index(w), _r_index(v.reciprocal())
    if a1_route and _in_a1(w) and _in_a1(v.reciprocal()):
        conds.append(Condition("w, 1/v in A_1 so p <= q suffices", p, "<=", q))
    else:
        conds.append(Condition("r_w / (2 - r_(1/v)) < q/p", r_w / (2 - r_vinv), "<", q / p))
    return conds


def decide_general(u1, q, w: Weight, u2, p, v: Weight, family: BallFamily | None = None,
                   cfg: QuadratureConfig = DEFAULT_CONFIG, analytic_only: bool = False,
                   evidence: bool = False) -> EmbeddingVerdict:
    """M_{u1,q}(w) ↪ M_{u2,p}(v) through the two-weight sufficient conditions.

    A constant v (or w) reduces to the one-weight decisions.  Otherwise the power
    window is used when it applies and the ball supremum is sampled numerically when
    it does not (skipped with ``analytic_only``).
    """
    if w.dim != v.dim:
        raise PreconditionError("weights live in different dimensions")
    _require_a_infinity(w, "w")
    _require_a_infinity(v.reciprocal(), "1/v")
    r_vinv = _r_index(v.reciprocal())
    if not r_vinv < 2:
        raise PreconditionError(f"r_(1/v) = {float(r_vinv)} must be below 2")
    if v.is_constant:
        return decide_weighted_to_unweighted(u1, q, w, u2, p, family, cfg, evidence)
    if w.is_constant:
        return decide_unweighted_to_weighted(u1, q, u2, p, v, family, cfg, evidence)
    u1, q = _check_pair(u1, q, "source")
    u2, p = _check_pair(u2, p, "target")
    if u1 == INF or u2 == INF:
        raise PreconditionError("weighted embeddings need finite u")
    strict = [Condition("q < u1", q, "<", u1), Condition("p < u2", p, "<", u2)]
    params = {"u1": u1, "u2": u2, "p": p, "w": w, "v": v}
    conds = two_weight_power_conditions(u1, q, w, u2, p, v)
    if conds is not None:
        reports = _maybe_report("two_weight", params, evidence, family, cfg)
        return _verdict("two power weights", strict + conds, reports)
    r_w = _r_index(w)
    if _in_a1(w) and _in_a1(v.reciprocal()):
        index = Condition("w, 1/v in A_1 so p <= q suffices", p, "<=", q)
    else:
        index = Condition("r_w / (2 - r_(1/v)) < q/p", r_w / (2 - r_vinv), "<", q / p)
    if analytic_only:
        unordered = Condition("power window applicable", 0, "==", 1)
        return _verdict("two weights", strict + [index, unordered])
    report = sup_condition_evidence("two_weight", params, family, cfg)
    bounded = Condition("sampled ball supremum trend bounded", int(report.trend == "bounded"), "==", 1)
    return _verdict("two weights (sampled supremum)", strict + [index, bounded], (report,),
                    {"evidence": "numeric"})


def decide_spaces(source: SpaceSpec, target: SpaceSpec, family: BallFamily | None = None,
                  cfg: QuadratureConfig = DEFAULT_CONFIG, evidence: bool = False) -> EmbeddingVerdict:
    """Dispatch on the weights of two SpaceSpecs."""
    w, v = source.weight, target.weight
    if w.is_constant and v.is_constant:
        return decide_unweighted(source.u, source.p, target.u, target.p)
    if w == v:
        same = decide_same_weight(source.u, source.p, target.u, target.p, w)
        if same.embeds:
            return same
    return decide_general(source.u, source.p, w, target.u, target.p, v, family, cfg, evidence=evidence)


# ------------------------------------------------------------------ sampled suprema

EXPRESSIONS = {
    "weighted_to_unweighted": "|B|^(1/u2) / w(B)^(1/u1)",
    "unweighted_to_weighted": "(|B|/v^-1(B))^(1/p) (v(B)/|B|)^(1/u2-1/p) |B|^(1/u2-1/u1)",
    "two_weight": "v(B)^(1/u2)/w(B)^(1/u1) (|B|/v(B))^(1/p) (|B|/v^-1(B))^(1/p)",
}
_ALIASES = {"expr1": "weighted_to_unweighted", "expr2": "unweighted_to_weighted", "expr3": "two_weight"}


def sup_condition_evidence(expression_id: str, params: dict, family: BallFamily | None = None,
                           cfg: QuadratureConfig = DEFAULT_CONFIG) -> SupConditionReport:
    """Sample one of the ball-supremum conditions over a family and classify its trend."""
    eid = _ALIASES.get(expression_id, expression_id)
    if eid not in EXPRESSIONS:
        raise PreconditionError(f"unknown expression {expression_id!r}; known: {sorted(EXPRESSIONS)}")
    i1, i2 = float(_inv(_q(params["u1"]))), float(_inv(_q(params["u2"])))
    w, v = params.get("w"), params.get("v")
    ip = float(_inv(_q(params["p"]))) if "p" in params else 0.0
    weights = [x for x in (w, v) if x is not None]
    if not weights:
        raise PreconditionError("the expression needs at least one weight")
    for x in weights:
        if not x.locally_integrable():
            raise PreconditionError(f"{x} is not locally integrable")
    if v is not None and not v.reciprocal().locally_integrable():
        raise PreconditionError(f"1/{v} is not locally integrable")
    dim = weights[0].dim
    vol = unit_ball_volume(dim)
    mw = Integrand(None, w, 1.0, cfg) if w is not None else None
    mv = Integrand(None, v, 1.0, cfg) if v is not None else None
    mvi = Integrand(None, v.reciprocal(), 1.0, cfg) if v is not None else None

    def evaluate(centers, radii):
        B = vol * radii ** dim
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if eid == "weighted_to_unweighted":
                return B ** i2 / mw.balls(centers, radii) ** i1
            nu, nui = mv.balls(centers, radii), mvi.balls(centers, radii)
            if eid == "unweighted_to_weighted":
                return (B / nui) ** ip * (nu / B) ** (i2 - ip) * B ** (i2 - i1)
            return nu ** i2 / mw.balls(centers, radii) ** i1 * (B / nu) ** ip * (B / nui) ** ip

    family = family_for(None, weights[0], others=weights[1:]) if family is None else family
    trend = classify_trend(evaluate, family)
    return SupConditionReport(eid, trend.estimate, trend.trend, trend.witness, tuple(trend.trace))


# ------------------------------------------------------------------ chain witnesses

def _finite(fn) -> tuple[bool, float | None]:
    try:
        val = fn()
    except DivergenceError:
        return False, None
    return bool(np.isfinite(val)), float(val)


def chain_membership_witnesses(u, p, cfg: QuadratureConfig = DEFAULT_CONFIG) -> dict:
    """Witnesses for the strict chain L_u ⊂ weak L_u ⊂ M_{u,p} ⊂ L_p,loc on the line, each checked.

    * truncated |x|^{-1/u}: weak L_u but not L_u
    * N unit bumps at 2, 4, ..., 2^N: Morrey norm stays bounded while the weak norm grows like N^{1/u}
    * truncated |x|^{-(1/u+1/p)/2}: locally p-integrable with Morrey expression growing on small balls
    """
    u, p = float(_q(u)), float(_q(p))
    if not 0 < p < u < INF:
        raise PreconditionError("need 0 < p < u < inf")
    space = SpaceSpec(u, p, Weight.constant(1, 1))
    out: dict = {}

    g = spike(-1, 1, -1 / u)
    lu, lu_val = _finite(lambda: lebesgue_norm(g, u, cfg=cfg))
    weak = weak_lebesgue_norm(g, u, cfg=cfg)
    mor = morrey_norm(g, space, cfg=cfg)
    loc, loc_val = _finite(lambda: lebesgue_norm(g, p, cfg=cfg))
    out["weak_not_lebesgue"] = {
        "function": g.to_json(),
        "lebesgue_u": lu_val if lu else "divergent",
        "weak_u": weak.value,
        "morrey": mor.value,
        "lebesgue_p_local": loc_val,
        "consistent": (not lu) and np.isfinite(weak.value) and np.isfinite(mor.value) and loc,
    }

    counts = (1, 2, 4, 8, 16)
    weak_vals, morrey_vals = [], []
    for N in counts:
        f = Sum([indicator(2.0 ** j, 2.0 ** j + 1) for j in range(1, N + 1)])
        weak_vals.append(weak_lebesgue_norm(f, u, cfg=cfg).value)
        morrey_vals.append(morrey_norm(f, space, cfg=cfg).value)
    out["morrey_not_weak"] = {
        "bumps": list(counts),
        "weak_u": weak_vals,
        "morrey": morrey_vals,
        "consistent": bool(weak_vals[-1] > 2 * weak_vals[0] and max(morrey_vals) < 1.5 * morrey_vals[0]),
    }

    h = spike(-1, 1, -(1 / u + 1 / p) / 2)
    loc, loc_val = _finite(lambda: lebesgue_norm(h, p, cfg=cfg))
    trend = classify_trend(morrey_evaluator(h, space, cfg), family_for(h))
    out["local_not_morrey"] = {
        "function": h.to_json(),
        "lebesgue_p_local": loc_val,
        "morrey_trend": trend.trend,
        "morrey_estimate": trend.estimate,
        "consistent": loc and trend.trend == "growing",
    }
    out["consistent"] = all(v["consistent"] for v in out.values())
    return out
