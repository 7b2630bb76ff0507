import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wmorrey import (
    Ball,
    Box,
    Cube,
    EmbeddingVerdict,
    PreconditionError,
    QuadratureConfig,
    SpaceSpec,
    Weight,
    holder_conjugate,
    weight_pow,
    weight_product,
)
from wmorrey.core import exact, reciprocal, unit_ball_volume, unit_sphere_area
from wmorrey.functions import (
    AbsPower,
    Dilate,
    Product,
    Scale,
    Sum,
    function_from_json,
    indicator,
    spike,
    zero,
)


def test_exact_keeps_inf_and_rationals():
    assert exact(0.5) == Fraction(1, 2)
    assert exact(math.inf) == math.inf
    assert reciprocal(math.inf) == 0
    assert reciprocal(Fraction(2, 3)) == Fraction(3, 2)


@pytest.mark.parametrize("p, expected", [(2, 2), (Fraction(3, 2), 3), (3, Fraction(3, 2)), (1, math.inf),
                                         (0.5, math.inf), (math.inf, 1)])
def test_holder_conjugate(p, expected):
    assert holder_conjugate(p) == expected


def test_weight_constructors_and_indices():
    w = Weight.two_regime(-0.5, 0.7)
    assert w.exponents == (-0.5, 0.7)
    assert w.locally_integrable() and w.in_a_infinity()
    assert not Weight.power(-1).locally_integrable()
    assert Weight.constant(3).is_constant
    assert float(w(0.25)) == pytest.approx(0.25 ** -0.5)
    assert float(w(4.0)) == pytest.approx(4.0 ** 0.7)


def test_weight_power_and_product_stay_in_family():
    w = Weight.two_regime(-0.5, 0.5)
    sq = weight_pow(w, 2)
    assert (sq.alpha, sq.beta) == (-1, 1)
    prod = weight_product(Weight.power(0.25), Weight.two_regime(-0.5, 0.5))
    assert (prod.alpha, prod.beta) == (-0.25, 0.75)
    x = np.array([0.3, 2.5])
    assert np.allclose(prod(x), Weight.power(0.25)(x) * Weight.two_regime(-0.5, 0.5)(x))


def test_weight_dilate_and_translate():
    w = Weight.two_regime(-0.5, 0.5)
    d = w.dilate(2.0)
    x = np.array([0.3, 1.7, 5.0])
    assert np.allclose(d(x), w(2.0 * x))
    t = w.translate(1.5)
    assert np.allclose(t(x), w(x - 1.5))


exps = st.sampled_from([Fraction(k, 4) for k in range(-3, 9)])


@settings(max_examples=60, deadline=None)
@given(exps, exps, st.integers(1, 3))
def test_weight_json_round_trip(a, b, dim):
    w = Weight.two_regime(a, b, dim=dim)
    back = Weight.from_json(json.dumps(w.to_json()))
    assert back == w


def test_space_spec_trivial_and_exponent():
    s = SpaceSpec(Fraction(3), Fraction(3, 2))
    assert s.morrey_exponent() == Fraction(1, 3) - Fraction(2, 3)
    assert not s.trivial
    assert SpaceSpec(1, 2).trivial
    with pytest.raises(PreconditionError):
        SpaceSpec(1, 2).require_nontrivial()
    assert SpaceSpec(2, 2).is_lebesgue
    back = SpaceSpec.from_json(SpaceSpec(math.inf, 2, Weight.power(0.5)).to_json())
    assert back.u == math.inf and back.weight == Weight.power(0.5)


def test_regions():
    assert unit_ball_volume(1) == pytest.approx(2.0)
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)
    assert unit_sphere_area(2) == pytest.approx(2 * math.pi)
    b = Ball([0.0, 0.0], 2.0)
    assert b.volume() == pytest.approx(4 * math.pi)
    assert list(b.contains(np.array([[1.0, 1.0], [2.0, 1.0]]))) == [True, False]
    c = Cube([0.0, 0.0], 1.0)
    assert c.volume() == pytest.approx(4.0)
    assert c.radius == c.half_side == 1.0
    box = Box([0.0], [2.0]).intersect(Box([1.0], [3.0]))
    assert box.lo == (1.0,) and box.hi == (2.0,)
    assert Box([0.0], [1.0]).intersect(Box([2.0], [3.0])) is None


def test_quadrature_config_validates():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=-1)
    with pytest.raises(ValueError):
        QuadratureConfig(singularity_mode="magic")


def test_verdict_requires_known_label():
    with pytest.raises(ValueError):
        EmbeddingVerdict("maybe")
    v = EmbeddingVerdict("embeds", certificate={"theorem": "x", "conditions": []})
    assert v.embeds and v.to_json()["verdict"] == "embeds"


def test_function_values_and_json():
    f = spike(0, 1, -0.5, coef=2.0)
    assert float(f(np.array([0.25]))[0]) == pytest.approx(4.0)
    assert float(f(np.array([1.5]))[0]) == 0.0
    g = function_from_json(json.dumps(f.to_json()))
    x = np.linspace(-2, 2, 17)
    assert np.allclose(np.nan_to_num(g(x), posinf=0), np.nan_to_num(f(x), posinf=0))
    assert zero().sup_abs() == 0.0
    assert indicator(-1, 2).support_radius() == 2.0


def test_function_combinators():
    f, g = indicator(0, 1), indicator(2, 3, coef=3.0)
    x = np.array([0.5, 2.5, 5.0])
    assert np.allclose(Sum([f, g])(x), [1, 3, 0])
    assert np.allclose(Scale(g, 2.0)(x), [0, 6, 0])
    assert np.allclose(Dilate(f, 2.0)(x), [1, 0, 0])
    assert np.allclose(AbsPower(Scale(g, -1.0), 2)(x), [0, 9, 0])
    assert np.allclose(Product([indicator(0, 2), indicator(1, 3)])(np.array([0.5, 1.5, 2.5])), [0, 1, 0])
    for h in (Sum([f, g]), Dilate(f, 2.0), AbsPower(g, 2), Product([f, g])):
        back = function_from_json(h.to_json())
        assert np.allclose(back(x), h(x))
