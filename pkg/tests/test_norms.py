import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from wmorrey import Box, DivergenceError, PreconditionError, SpaceSpec, Weight
from wmorrey.functions import Dilate, IndicatorPower, Sum, indicator, spike
from wmorrey.core import Ball
from wmorrey.search import BallFamily
from wmorrey.norms import (
    level_set_measure,
    lebesgue_norm,
    morrey_norm,
    morrey_norm_cubes,
    weak_lebesgue_norm,
)

# Brute-force grid plus Nelder-Mead over (center, log radius) with tanh-sinh integrals;
# equals 4·2^{-1/6}, attained on the ball [0, 1].
MORREY_SPIKE_TWO_REGIME = 3.5635948725613575


def test_lebesgue_closed_forms():
    assert lebesgue_norm(indicator(0, 4), 2) == pytest.approx(2.0)
    # ∫_0^1 x^{-1/2} x^{1/2}... with weight |x|: ∫_0^1 x^{2γ+1} = 1/(2γ+2)
    assert lebesgue_norm(spike(0, 1, -0.25), 2, Weight.power(1)) ** 2 == pytest.approx(1 / 1.5)
    assert lebesgue_norm(indicator(-1, 1, coef=3.0), math.inf) == 3.0
    assert lebesgue_norm(indicator(0, 2), 1, domain=Box([1.0], [5.0])) == pytest.approx(1.0)


def test_lebesgue_divergence_raises():
    with pytest.raises(DivergenceError):
        lebesgue_norm(spike(0, 1, -0.5), 2)
    with pytest.raises(PreconditionError):
        lebesgue_norm(indicator(0, 1), 0)


def test_lebesgue_radial_in_2d():
    f = IndicatorPower(Ball([0.0, 0.0], 1.0), -0.5, dim=2)
    # ∫_{|x|<1} |x|^{-1} dx = 2π
    assert lebesgue_norm(f, 2) ** 2 == pytest.approx(2 * math.pi)


def test_level_sets_and_weak_norm():
    f = spike(-1, 1, -0.5)
    assert level_set_measure(f, 2.0) == pytest.approx(0.5)
    assert level_set_measure(f, 0.5) == pytest.approx(2.0)
    # t · (2 t^{-2})^{1/2} = √2 for every t ≥ 1
    assert weak_lebesgue_norm(f, 2).value == pytest.approx(math.sqrt(2), rel=1e-9)
    assert weak_lebesgue_norm(indicator(0, 3, coef=2.0), 1).value == pytest.approx(6.0, rel=1e-9)


def test_weak_norm_below_strong_norm():
    for f in (spike(0, 2, -0.2), indicator(0, 1) + indicator(3, 5, coef=2.0)):
        assert weak_lebesgue_norm(f, 2).value <= lebesgue_norm(f, 2) * (1 + 1e-9)


def test_weak_norm_grid_route_for_overlaps():
    f = Sum([indicator(0, 2), indicator(1, 3)])
    # |f| = 2 on [1,2], 1 on the rest of [0,3]: sup(1·3, 2·1) = 3
    assert weak_lebesgue_norm(f, 1).value == pytest.approx(3.0, rel=1e-3)


def test_frozen_weighted_morrey_value():
    rep = morrey_norm(spike(0, 1, -0.25), SpaceSpec(2, 1.5, Weight.two_regime(-0.5, 0.5)))
    assert rep.value == pytest.approx(MORREY_SPIKE_TWO_REGIME, rel=1e-6)
    assert rep.stable


def test_morrey_closed_forms():
    # |x|^{-1/2} on [-1,1] in M_{2,1}: every centred ball gives (2r)^{-1/2}·4r^{1/2}
    rep = morrey_norm(spike(-1, 1, -0.5), SpaceSpec(2, 1))
    assert rep.value == pytest.approx(2 * math.sqrt(2), rel=1e-6)
    # x^{-1/2}χ(0,1) in M_{3/2,1}(|x|^{-1/4})
    rep = morrey_norm(spike(0, 1, -0.5), SpaceSpec(1.5, 1, Weight.power(-0.25)))
    assert rep.value == pytest.approx(4 * 0.75 ** (1 / 3), rel=1e-6)


def test_morrey_with_infinite_u_is_sup_norm():
    assert morrey_norm(indicator(0, 1, coef=2.5), SpaceSpec(math.inf, 2)).value == 2.5


def test_morrey_rejects_trivial_space():
    with pytest.raises(PreconditionError):
        morrey_norm(indicator(0, 1), SpaceSpec(1, 2))


@settings(max_examples=12, deadline=None)
@given(st.floats(0.2, 2.0), st.floats(-0.3, 0.3), st.sampled_from([(2.0, 1.0), (3.0, 1.5), (4.0, 2.0)]))
def test_morrey_dominates_brute_force_grid(hi, gamma, up):
    u, p = up
    f = spike(0, hi, gamma)
    w = Weight.two_regime(-0.25, 0.5)
    g = lambda x: np.where((x > 0) & (x < hi), np.abs(x) ** gamma, 0.0)
    ref = oracles.morrey_grid(g, oracles.two_regime(-0.25, 0.5), u, p, np.linspace(-0.5, 2.5, 7),
                              np.geomspace(0.05, 3, 7), cuts=(0.0, hi, 1.0, -1.0))
    got = morrey_norm(f, SpaceSpec(u, p, w)).value
    # any finite grid only bounds the supremum from below
    assert got >= ref * (1 - 1e-8)


def test_morrey_dilation_scaling():
    # unweighted: ‖f(λ·)‖_{M_{u,p}} = λ^{-n/u} ‖f‖_{M_{u,p}}
    f = indicator(0, 1) + indicator(2, 2.5, coef=2.0)
    space = SpaceSpec(3, 1.5)
    base = morrey_norm(f, space).value
    for lam in (0.25, 4.0):
        assert morrey_norm(Dilate(f, lam), space).value == pytest.approx(lam ** (-1 / 3) * base, rel=1e-6)


def test_cube_and_ball_norms_coincide_in_one_dimension():
    f = spike(0, 1, -0.25)
    space = SpaceSpec(3, 1.5, Weight.power(0.5))
    assert morrey_norm_cubes(f, space).value == pytest.approx(morrey_norm(f, space).value, rel=1e-6)


def test_cube_norm_in_two_dimensions_is_comparable():
    f = IndicatorPower(Ball([0.0, 0.0], 1.0), -0.5, dim=2)
    space = SpaceSpec(4, 2, Weight.constant(1, dim=2))
    family = BallFamily(dim=2, center_range=(-1.0, 1.0), n_centers=3, radius_range=(0.05, 5.0), n_radii=9,
                        refinement_levels=1, anchors=((0.0, 0.0),))
    mb = morrey_norm(f, space, family).value
    mc = morrey_norm_cubes(f, space, family).value
    # centred balls inside the support give √2·π^{1/4} for every radius
    assert mb == pytest.approx(2 ** 0.5 * math.pi ** 0.25, rel=1e-6)
    # B(r) ⊂ Q(r) ⊂ B(r√2) with |Q(r)| = (4/π)|B(r)| = (2/π)|B(r√2)|
    e = 1 / 4 - 1 / 2
    assert (4 / math.pi) ** e * (1 - 1e-6) <= mc / mb <= (2 / math.pi) ** e * (1 + 1e-6)
