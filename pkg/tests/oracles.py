"""Independent reference computations used to derive and re-check frozen test values.

Nothing here imports the package's integration code: integrals use tanh-sinh
quadrature (robust at algebraic endpoint singularities) and suprema use brute-force
grids.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


def _tanh_sinh_nodes(step: float = 1 / 64, T: float = 6.0):
    # T = 6 reaches distances ~1e-280 from the endpoints, so x^-e tails are negligible
    t = np.arange(-T, T + step / 2, step)
    u = 0.5 * math.pi * np.sinh(t)
    with np.errstate(over="ignore"):
        w = step * 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2
    with np.errstate(over="ignore"):
        left = 2.0 / (1.0 + np.exp(-2.0 * u))  # 1 + tanh(u), accurate for u << 0
        right = 2.0 / (1.0 + np.exp(2.0 * u))  # 1 - tanh(u), accurate for u >> 0
    return u, w, left, right


_U, _W, _L, _R = _tanh_sinh_nodes()


def tanh_sinh(g, a: float, b: float) -> float:
    """∫_a^b g with nodes placed from the nearer endpoint so singular ends stay resolved.

    Singularities should sit at 0 (or be shifted there) so that tiny offsets survive rounding.
    """
    half = 0.5 * (b - a)
    x = np.where(_U < 0, a + half * _L, b - half * _R)
    keep = (x > a) & (x < b) & (_W > 0)
    return float(half * np.sum(_W[keep] * g(x[keep])))


def integral(g, a: float, b: float, cuts=()) -> float:
    """Split at the given interior points (jumps or singularities) and integrate each piece."""
    pts = sorted({a, b} | {c for c in cuts if a < c < b})
    return sum(tanh_sinh(g, lo, hi) for lo, hi in zip(pts[:-1], pts[1:]))


def two_regime(alpha: float, beta: float, scale: float = 1.0, knee: float = 1.0, center: float = 0.0):
    def w(x):
        r = np.abs(np.asarray(x, float) - center)
        with np.errstate(divide="ignore"):
            return scale * np.where(r <= knee, (r / knee) ** alpha, (r / knee) ** beta)
    return w


def weight_mass(w, a: float, b: float, cuts=(0.0, -1.0, 1.0)) -> float:
    return integral(w, a, b, cuts)


def ap_expression(alpha, beta, p, c, r) -> float:
    w = two_regime(alpha, beta)
    e = -1.0 / (p - 1.0)
    m1 = weight_mass(w, c - r, c + r) / (2 * r)
    m2 = weight_mass(lambda x: w(x) ** e, c - r, c + r) / (2 * r)
    return m1 * m2 ** (p - 1)


def hl_indicator(x: float, lo: float = 0.0, hi: float = 1.0, radii=None) -> float:
    """Centered maximal function of χ_[lo,hi] at x from a dense radius grid (exact overlaps)."""
    radii = np.geomspace(1e-4, 1e4, 400001) if radii is None else radii
    overlap = np.clip(np.minimum(hi, x + radii) - np.maximum(lo, x - radii), 0, None)
    return float(np.max(overlap / (2 * radii)))


def hl_dense(g, x: float, radii, cuts=()) -> float:
    return max(integral(g, x - r, x + r, cuts) / (2 * r) for r in radii)


def morrey_grid(f, w, u: float, p: float, centers, radii, cuts=()) -> float:
    """Brute-force sup of w(B)^{1/u-1/p} (∫_B |f|^p w)^{1/p} over a center × radius grid."""
    e = 1.0 / u - 1.0 / p
    best = 0.0
    for c in centers:
        for r in radii:
            I = integral(lambda x: np.abs(f(x)) ** p * w(x), c - r, c + r, cuts)
            if I <= 0:
                continue
            m = integral(w, c - r, c + r, cuts)
            best = max(best, m ** e * I ** (1.0 / p))
    return best


def unweighted_iff(u1, q, u2, p) -> bool:
    """The unweighted characterization written out directly: 0 < p ≤ q ≤ u1 = u2 ≤ ∞ (any p, q for u = ∞)."""
    if u1 == math.inf and u2 == math.inf:
        return True
    return Fraction(p) <= Fraction(q) and u1 == u2


def lp_ratio_indicator_closed_form(L: float, p: float = 2.0) -> float:
    """‖M χ_[0,1]‖_{L_p[-L,L]} / ‖χ_[0,1]‖_p using M = 1 on [0,1], 1/(2x) right, 1/(2(1-x)) left."""
    tail_right = integral(lambda x: (1 / (2 * x)) ** p, 1, L)
    tail_left = integral(lambda x: (1 / (2 * (1 - x))) ** p, -L, 0)
    return (1 + tail_right + tail_left) ** (1 / p)
