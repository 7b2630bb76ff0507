"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line with its numbers."""

import itertools
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

import oracles
from wmorrey import Ball, SpaceSpec, Weight, holder_conjugate, weight_pow
from wmorrey.embeddings import decide_general, decide_unweighted, two_weight_power_conditions
from wmorrey.functions import Sum, indicator
from wmorrey.lab import (
    corpus_generate,
    default_corpus,
    dilate_ratios,
    is_monotone_growth,
    paper_example_check,
    power_identity_check,
    ratio_scan,
)
from wmorrey.maximal import hl_maximal, lp_operator_ratio
from wmorrey.muckenhoupt import (
    ap_ball_expression,
    ap_constant_estimate,
    ap_membership_analytic,
    critical_index,
    doubling_constant_estimate,
)
from wmorrey.norms import lebesgue_norm, morrey_norm

GRID = [F(1, 2), F(1), F(3, 2), F(2), F(3)]
PAIRS = [(u, p) for u in GRID for p in GRID if p <= u]
TUPLES = [(u1, q, u2, p) for (u1, q), (u2, p) in itertools.product(PAIRS, PAIRS)]


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'} | {detail}")
        return ok
    return emit


def test_criterion_01_ap_window(report):
    hits = total = 0
    misses = []
    for p in (1.5, 2.0, 3.0):
        lo, hi = -1.0, p - 1.0
        axis = [round(lo + (hi - lo) * s, 10) for s in (-0.35, 0.1, 0.3, 0.5, 0.7, 0.9, 1.35)]
        for a, b in itertools.product(axis, axis):
            if a in (lo, hi) or b in (lo, hi):
                continue
            w = Weight.two_regime(a, b)
            member = ap_membership_analytic(w, p)
            trend = ap_constant_estimate(w, p).trend
            total += 1
            if (trend == "bounded") == member:
                hits += 1
            else:
                misses.append((p, a, b, trend))
    rate = hits / total
    ok = report(1, rate >= 0.95, f"{hits}/{total} = {rate:.3f} agree (need 0.95); misses {misses}")
    assert ok


def test_criterion_02_critical_index(report):
    a = critical_index(Weight.two_regime(1, 2)).r
    b = critical_index(Weight.constant()).r
    c = critical_index(Weight.power(-0.5)).r
    ok = a == 3 and isinstance(a, (int, F)) and b == 1 and c == 1
    assert report(2, ok, f"r(TwoRegime(1,2)) = {a}, r(1) = {b}, r(|x|^-1/2) = {c}")


def test_criterion_03_norm_consistency(report):
    w = Weight.power(-0.25)
    corpus = corpus_generate(10, seed=1, weight=w, p=3.0)
    worst_lp = 0.0
    for f in corpus:
        for p in (1.5, 2.0):
            m = morrey_norm(f, SpaceSpec(p, p, w)).value
            l = lebesgue_norm(f, p, w)
            worst_lp = max(worst_lp, abs(m - l) / l)
    worst_pow = 0.0
    space = SpaceSpec(3, 1.5, w)
    for f in corpus_generate(10, seed=1, weight=w, p=1.5):
        for r in (0.5, 2.0):
            worst_pow = max(worst_pow, power_identity_check(f, space, r)["rel_err"])
    ok = worst_lp <= 1e-4 and worst_pow <= 3e-4
    assert report(3, ok, f"max |M_pp - L_p|/L_p = {worst_lp:.2e} (<= 1e-4); "
                         f"max power identity error = {worst_pow:.2e} (<= 3e-4)")


def test_criterion_04_worked_example(report):
    rep = paper_example_check(-0.25)
    trunc = [t["rel_err"] for t in rep["truncated"]]
    ok = (rep["morrey"]["finite"] and rep["morrey"]["last_change"] < 0.01 and rep["lebesgue"]["divergent"]
          and max(trunc) < 0.02)
    assert report(4, ok, f"Morrey = {rep['morrey']['value']:.6f} (last change {rep['morrey']['last_change']:.1e}); "
                         f"L_1.5 divergent = {rep['lebesgue']['divergent']}; "
                         f"ln(1/eps) errors = {[f'{e:.1e}' for e in trunc]}")


def test_criterion_05_maximal_closed_form_and_sublinearity(report):
    xs = [2.0, 4.0, 8.0]
    got = hl_maximal(indicator(0, 1), xs)
    err_closed = max(abs(g - 1 / (2 * x)) for g, x in zip(got, xs))
    err_oracle = max(abs(g - oracles.hl_indicator(x)) for g, x in zip(got, xs))
    corpus = corpus_generate(20, seed=5)
    rng = random.Random(5)
    grid = np.linspace(-4, 4, 256)
    worst = -math.inf
    for _ in range(5):
        f, g = rng.sample(corpus, 2)
        mf = hl_maximal(f, grid, anchored=False, refine=False)
        mg = hl_maximal(g, grid, anchored=False, refine=False)
        mfg = hl_maximal(Sum([f, g]), grid, anchored=False, refine=False)
        worst = max(worst, float(np.max(mfg - (mf + mg))))
    ok = err_closed <= 1e-3 and err_oracle <= 1e-3 and worst <= 1e-12
    assert report(5, ok, f"|Mχ - 1/(2x)| <= {err_closed:.1e}, vs dense grid <= {err_oracle:.1e}; "
                         f"max M(f+g) - Mf - Mg = {worst:.1e} over 5 pairs x 256 points")


def test_criterion_06_lp_boundedness_evidence(report):
    w = Weight.power(-0.25)
    corpus = corpus_generate(10, seed=0, weight=w, p=1.5)
    var, growth, growth_const = [], [], []
    for f in corpus:
        a, b = (lp_operator_ratio("hl", f, 1.5, w, L) for L in (10, 100))
        var.append(abs(b / a - 1))
        c, d = (lp_operator_ratio("hl", f, 1, w, L) for L in (10, 100))
        growth.append(d / c - 1)
        e, g = (lp_operator_ratio("hl", f, 1, Weight.constant(), L) for L in (10, 100))
        growth_const.append(g / e - 1)
    in_window = max(var) < 0.10
    endpoint = min(growth) > 0.5
    ok = report(6, in_window and endpoint,
                f"p = 1.5 variation max {max(var):.3f} (< 0.10: {in_window}); "
                f"p = 1 growth min {min(growth):.3f} max {max(growth):.3f} (> 0.50: {endpoint}); "
                f"unweighted p = 1 growth for reference {min(growth_const):.3f}..{max(growth_const):.3f}")
    assert ok


def test_criterion_07_embedding_decisions(report):
    grid_ok = all(decide_unweighted(*t).embeds == oracles.unweighted_iff(*t) for t in TUPLES)
    rng = random.Random(7)
    one = Weight.constant()
    sample = [rng.choice(TUPLES) for _ in range(100)]
    const_ok = all(decide_general(u1, q, one, u2, p, one).embeds == decide_unweighted(u1, q, u2, p).embeds
                   for u1, q, u2, p in sample)
    exps = [F(k, 4) for k in range(-3, 4)]
    hits, forced = 0, True
    for a, b in itertools.product(exps, exps):
        w = Weight.two_regime(a, b)
        for u1, q, u2, p in TUPLES:
            conds = two_weight_power_conditions(u1, q, w, u2, p, w, a1_route=False)
            if conds is not None and all(c.holds for c in conds):
                hits += 1
                forced &= a == 0 and b == 0 and u1 == u2
    ok = grid_ok and const_ok and forced and hits > 0
    assert report(7, ok, f"iff grid {len(TUPLES)} tuples: {grid_ok}; constant weights on 100 tuples: {const_ok}; "
                         f"reduction forces α = β = 0, u1 = u2 on all {hits} admissible cases: {forced}")


def test_criterion_08_soundness_sampling(report):
    corpus = default_corpus()
    embeds = [t for t in TUPLES if decide_unweighted(*t).embeds]
    worst, scans = 0.0, 0
    for u1, q, u2, p in embeds:
        for levels in (1, 3):
            scan = ratio_scan(SpaceSpec(u1, q), SpaceSpec(u2, p), corpus, refinement_levels=levels)
            worst = max(worst, scan.sup_ratio / scan.median_ratio)
            scans += 1
    splits = [t for t in TUPLES if not decide_unweighted(*t).embeds and t[0] != t[2]]
    growing = 0
    for u1, q, u2, p in splits:
        _, ratios = dilate_ratios(SpaceSpec(u1, q), SpaceSpec(u2, p))
        growing += is_monotone_growth(ratios)
    ok = worst <= 10 and growing == len(splits)
    assert report(8, ok, f"max sup/median over {scans} scans = {worst:.3f} (<= 10); "
                         f"monotone dilate growth in {growing}/{len(splits)} non-embeddings with u1 != u2")


def test_criterion_09_doubling(report):
    rep = doubling_constant_estimate(Weight.power(1))
    ok = abs(rep.centered_C - 4) <= 1e-6 and rep.D_lower == 1 + 1 / rep.C ** 3 and rep.D_lower > 1
    assert report(9, ok, f"centred ratio {rep.centered_C:.9f} (4 = 2^(α+n)); C = {rep.C:.6f}, "
                         f"D = 1 + 1/C^3 = {rep.D_lower:.6f}")


def test_criterion_10_duality(report):
    rng = random.Random(10)
    worst = 0.0
    for _ in range(50):
        p = rng.choice([1.25, 1.5, 2.0, 3.0, 4.0])
        lo, hi = -0.95, 0.95 * (p - 1)
        w = Weight.two_regime(round(rng.uniform(lo, hi), 4), round(rng.uniform(lo, hi), 4))
        ball = Ball([rng.uniform(-3, 3)], 10 ** rng.uniform(-2, 2))
        pp = float(holder_conjugate(p))
        sigma = weight_pow(w, -pp / p)
        lhs = ap_ball_expression(sigma, pp, ball) ** (1 / pp)
        rhs = ap_ball_expression(w, p, ball) ** (1 / p)
        worst = max(worst, abs(lhs - rhs) / rhs)
    assert report(10, worst <= 1e-6, f"max relative gap over 50 triples = {worst:.2e} (<= 1e-6)")
