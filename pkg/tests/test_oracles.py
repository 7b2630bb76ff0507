"""The reference implementations are checked against closed forms, then re-derive the frozen constants."""

import math

import numpy as np
import pytest

import oracles
from test_integrate import MASS_2D_OFFCENTER, MASS_TWO_REGIME
from test_maximal import LP_RATIO_L10, LP_RATIO_L50
from test_muckenhoupt import AP_BALL_REFERENCE
from test_norms import MORREY_SPIKE_TWO_REGIME


def test_tanh_sinh_endpoint_singularities():
    assert oracles.tanh_sinh(lambda x: x ** -0.5, 0.0, 1.0) == pytest.approx(2.0, rel=1e-12)
    assert oracles.tanh_sinh(lambda x: np.abs(x) ** -0.75, -1.0, 0.0) == pytest.approx(4.0, rel=1e-10)
    assert oracles.integral(np.cos, 0.0, math.pi / 2, cuts=(0.5,)) == pytest.approx(1.0, rel=1e-13)


def test_two_regime_mass_closed_form():
    # ∫_{-1}^{3} ω_{-1/2, 1/2} = 2·2 + (2/3)(3^{3/2} - 1)
    exact = 4 + (2 / 3) * (3 ** 1.5 - 1)
    assert oracles.weight_mass(oracles.two_regime(-0.5, 0.5), -1.0, 3.0) == pytest.approx(exact, rel=1e-12)


def test_ap_expression_constant_and_centred_power():
    assert oracles.ap_expression(0.0, 0.0, 2.0, 0.3, 0.7) == pytest.approx(1.0, rel=1e-12)
    # centred at 0 inside the knee, |x|^a with p = 2: 1/((1+a)(1-a))
    a = 0.5
    assert oracles.ap_expression(a, a, 2.0, 0.0, 0.8) == pytest.approx(1 / ((1 + a) * (1 - a)), rel=1e-10)


def test_hl_indicator_and_dense_grid():
    for x in (2.0, 4.0, 8.0):
        assert oracles.hl_indicator(x) == pytest.approx(1 / (2 * x), rel=1e-4)
    ind = lambda t: np.where((t > 0) & (t < 1), 1.0, 0.0)
    assert oracles.hl_dense(ind, 2.0, np.linspace(1.5, 2.5, 101), cuts=(0, 1)) == pytest.approx(0.25, rel=1e-12)


def test_morrey_grid_is_a_lower_bound():
    ind = lambda t: np.where((t > 0) & (t < 1), 1.0, 0.0)
    one = oracles.two_regime(0.0, 0.0)
    val = oracles.morrey_grid(ind, one, 2.0, 1.0, [0.5], [0.5, 1.0], cuts=(0.0, 1.0))
    assert val == pytest.approx(1.0, rel=1e-12)


def test_unweighted_iff_cases():
    assert oracles.unweighted_iff(4, 2, 4, 1)
    assert not oracles.unweighted_iff(4, 2, 3, 2)
    assert not oracles.unweighted_iff(4, 1, 4, 2)
    assert oracles.unweighted_iff(math.inf, 1, math.inf, 3)


def test_frozen_masses():
    assert oracles.weight_mass(oracles.two_regime(-0.5, 0.7), -0.4, 2.3) == pytest.approx(MASS_TWO_REGIME, rel=1e-12)
    # polar Gauss-Legendre about the disc center; |x|^{-1/2} is smooth there since the origin lies outside
    x, wt = np.polynomial.legendre.leggauss(200)
    rho, wr = 0.35 * (x + 1), 0.35 * wt
    th, wth = math.pi * (x + 1), math.pi * wt
    R, TH = np.meshgrid(rho, th, indexing="ij")
    X, Y = 1 + R * np.cos(TH), 0.5 + R * np.sin(TH)
    val = np.sum(np.outer(wr, wth) * (X ** 2 + Y ** 2) ** -0.25 * R)
    assert val == pytest.approx(MASS_2D_OFFCENTER, rel=1e-12)


def test_frozen_ap_and_ratio_values():
    assert oracles.ap_expression(-0.3, 0.4, 2.5, 0.7, 1.6) == pytest.approx(AP_BALL_REFERENCE, rel=1e-12)
    assert oracles.lp_ratio_indicator_closed_form(10) == pytest.approx(LP_RATIO_L10, rel=1e-12)
    assert oracles.lp_ratio_indicator_closed_form(50) == pytest.approx(LP_RATIO_L50, rel=1e-12)
    # the L = 10 ratio in closed form: tails integrate to (1/4)(1 - 1/L) and (1/4)(1 - 1/(L+1))
    L = 10
    assert LP_RATIO_L10 == pytest.approx(math.sqrt(1 + 0.25 * (1 - 1 / L) + 0.25 * (1 - 1 / (L + 1))), rel=1e-12)


def test_frozen_morrey_value():
    assert MORREY_SPIKE_TWO_REGIME == pytest.approx(4 * 2 ** (-1 / 6), rel=1e-12)
    f = lambda x: np.where((x > 0) & (x < 1), np.abs(x) ** -0.25, 0.0)
    w = oracles.two_regime(-0.5, 0.5)
    at_support = oracles.morrey_grid(f, w, 2.0, 1.5, [0.5], [0.5], cuts=(0.0, 1.0, -1.0))
    assert at_support == pytest.approx(MORREY_SPIKE_TWO_REGIME, rel=1e-10)
    near = oracles.morrey_grid(f, w, 2.0, 1.5, np.linspace(0.3, 0.7, 9), np.linspace(0.3, 0.7, 9),
                               cuts=(0.0, 1.0, -1.0))
    assert near <= MORREY_SPIKE_TWO_REGIME * (1 + 1e-12)
