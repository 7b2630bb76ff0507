"""Shared value types: extended-real exponents, weights, regions, spaces, configs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Iterable, Sequence, Union

import numpy as np

Number = Union[int, float, Fraction]

INF = math.inf

__all__ = [
    "INF",
    "Number",
    "PreconditionError",
    "DivergenceError",
    "ToleranceError",
    "exact",
    "reciprocal",
    "is_inf",
    "holder_conjugate",
    "Weight",
    "weight_pow",
    "weight_product",
    "Ball",
    "Cube",
    "Box",
    "SpaceSpec",
    "QuadratureConfig",
    "EmbeddingVerdict",
    "SupConditionReport",
]


class PreconditionError(ValueError):
    """Inputs outside the domain where an operation is defined."""


class DivergenceError(ArithmeticError):
    """An integral or supremum that should be finite grows without bound."""

    def __init__(self, message: str, *, factor: str | None = None, witness: Any = None,
                 partial: Sequence[float] | None = None):
        super().__init__(message)
        self.factor = factor
        self.witness = witness
        self.partial = list(partial) if partial is not None else []


class ToleranceError(RuntimeError):
    """Quadrature stopped short of the requested tolerance."""

    def __init__(self, message: str, best: float, error: float):
        super().__init__(message)
        self.best = best
        self.error = error


# ---------------------------------------------------------------- extended reals

def exact(x: Any) -> Number:
    """Parse a number keeping rationals exact; strings like '3/2', '0.25', 'inf' accepted."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity", "oo", "∞"):
            return INF
        return Fraction(s)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.integer):
        return Fraction(int(x))
    raise TypeError(f"cannot interpret {x!r} as a number")


def is_inf(x: Number) -> bool:
    return isinstance(x, float) and math.isinf(x) and x > 0


def reciprocal(x: Number) -> Number:
    """1/x on (0, ∞] with 1/∞ = 0; keeps Fractions exact."""
    if is_inf(x):
        return 0
    if x <= 0:
        raise PreconditionError(f"reciprocal needs a positive exponent, got {x}")
    if isinstance(x, Fraction):
        return 1 / x
    if isinstance(x, int):
        return Fraction(1, x)
    return 1.0 / x


def holder_conjugate(p: Number) -> Number:
    """p' with 1/p + 1/p' = 1; p' = ∞ for p ≤ 1 and p' = 1 for p = ∞."""
    if is_inf(p):
        return 1
    if p <= 0:
        raise PreconditionError(f"Hölder conjugate is defined for p > 0, got {p}")
    if p <= 1:
        return INF
    if isinstance(p, (int, Fraction)):
        p = Fraction(p)
    return p / (p - 1)


# ----------------------------------------------------------------------- weights

_KINDS = ("constant", "power", "two_regime")


@dataclass(frozen=True)
class Weight:
    """Radial piecewise-power weight.

    ``w(x) = scale * (|x - center| / knee) ** alpha`` for ``|x - center| <= knee`` and
    the same with ``beta`` outside.  ``constant`` has alpha = beta = 0 and ``power`` has
    alpha = beta.  ``scale``, ``knee`` and ``center`` default to the plain descriptors and
    exist so that dilates, translates and multiples stay descriptors.
    """

    kind: str
    alpha: Number = 0
    beta: Number = 0
    dim: int = 1
    scale: Number = 1
    knee: Number = 1
    center: tuple | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise PreconditionError(f"unknown weight kind {self.kind!r}")
        if self.dim < 1:
            raise PreconditionError("dimension must be at least 1")
        if not self.scale > 0:
            raise PreconditionError("weight scale must be positive")
        if not self.knee > 0:
            raise PreconditionError("regime boundary must be positive")
        if self.kind == "constant" and (self.alpha != 0 or self.beta != 0):
            raise PreconditionError("constant weights carry no exponents")
        if self.kind == "power" and self.alpha != self.beta:
            raise PreconditionError("power weights use a single exponent")
        if self.center is not None:
            c = tuple(float(v) for v in self.center)
            if len(c) != self.dim:
                raise PreconditionError("weight center does not match dimension")
            object.__setattr__(self, "center", None if not any(c) else c)

    # constructors
    @classmethod
    def constant(cls, c: Number = 1, dim: int = 1) -> "Weight":
        return cls("constant", 0, 0, dim, scale=c)

    @classmethod
    def power(cls, alpha: Number, dim: int = 1) -> "Weight":
        return cls("power", alpha, alpha, dim)

    @classmethod
    def two_regime(cls, alpha: Number, beta: Number, dim: int = 1) -> "Weight":
        return cls("two_regime", alpha, beta, dim)

    # structure
    @property
    def origin(self) -> np.ndarray:
        return np.zeros(self.dim) if self.center is None else np.asarray(self.center, float)

    @property
    def is_constant(self) -> bool:
        return self.alpha == 0 and self.beta == 0

    @property
    def exponents(self) -> tuple[float, float]:
        return float(self.alpha), float(self.beta)

    def locally_integrable(self) -> bool:
        return self.alpha > -self.dim

    def in_a_infinity(self) -> bool:
        return self.alpha > -self.dim and self.beta > -self.dim

    def profile(self, r):
        """Radial profile evaluated at distances ``r`` from the weight center."""
        r = np.asarray(r, dtype=float)
        a, b = self.exponents
        k, s = float(self.knee), float(self.scale)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = r / k
            inner = np.where(t > 0, t, 0.0) ** a if a != 0 else np.ones_like(t)
            outer = t ** b if b != 0 else np.ones_like(t)
        return s * np.where(t <= 1, inner, outer)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            r = np.abs(x - self.origin[0])
        else:
            r = np.linalg.norm(x - self.origin, axis=-1)
        return self.profile(r)

    def profile_range(self, rmin: float, rmax: float) -> tuple[float, float]:
        """(essinf, esssup) of the profile over distances in [rmin, rmax]."""
        candidates = [rmin, rmax]
        if rmin < float(self.knee) < rmax:
            candidates.append(float(self.knee))
        vals = self.profile(np.array(candidates))
        lo, hi = float(np.min(vals)), float(np.max(vals))
        a = float(self.alpha)
        if rmin == 0.0:
            if a < 0:
                hi = INF
            elif a > 0:
                lo = 0.0
        return lo, hi

    # transformations that stay descriptors
    def dilate(self, lam: float) -> "Weight":
        """x ↦ w(lam·x)."""
        if self.kind == "power":
            return replace(self, scale=float(self.scale) * float(lam) ** float(self.alpha),
                           center=None if self.center is None else tuple(np.asarray(self.center) / lam))
        return replace(self, knee=float(self.knee) / lam,
                       center=None if self.center is None else tuple(np.asarray(self.center) / lam))

    def translate(self, shift) -> "Weight":
        """x ↦ w(x - shift)."""
        return replace(self, center=tuple(self.origin + np.broadcast_to(np.asarray(shift, float), (self.dim,))))

    def scaled(self, c: Number) -> "Weight":
        return replace(self, scale=self.scale * c)

    def with_dim(self, dim: int) -> "Weight":
        return replace(self, dim=dim, center=None)

    def reciprocal(self) -> "Weight":
        return weight_pow(self, -1)

    # serialization
    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        if self.kind == "constant":
            out["c"] = _num(self.scale)
        elif self.kind == "power":
            out["alpha"] = _num(self.alpha)
        else:
            out["alpha"] = _num(self.alpha)
            out["beta"] = _num(self.beta)
        out["dim"] = self.dim
        if self.kind != "constant" and self.scale != 1:
            out["scale"] = _num(self.scale)
        if self.kind == "two_regime" and self.knee != 1:
            out["knee"] = _num(self.knee)
        if self.center is not None:
            out["center"] = list(self.center)
        return out

    @classmethod
    def from_json(cls, data: dict | str, dim: int | None = None) -> "Weight":
        if isinstance(data, str):
            data = json.loads(data)
        if "weight" in data and isinstance(data["weight"], dict):
            data = data["weight"]
        kind = data.get("kind")
        n = int(data.get("dim", dim if dim is not None else 1))
        if dim is not None and "dim" not in data:
            n = dim
        center = data.get("center")
        if kind == "constant":
            return cls("constant", 0, 0, n, scale=exact(data.get("c", 1)), center=center)
        if kind == "power":
            a = exact(data["alpha"])
            return cls("power", a, a, n, scale=exact(data.get("scale", 1)), center=center)
        if kind == "two_regime":
            return cls("two_regime", exact(data["alpha"]), exact(data["beta"]), n,
                       scale=exact(data.get("scale", 1)), knee=exact(data.get("knee", 1)), center=center)
        raise PreconditionError(f"unknown weight kind {kind!r}")

    def __str__(self) -> str:
        if self.kind == "constant":
            return f"Constant({_fmt(self.scale)})"
        if self.kind == "power":
            return f"Power({_fmt(self.alpha)})"
        return f"TwoRegime({_fmt(self.alpha)}, {_fmt(self.beta)})"


def _make(alpha: Number, beta: Number, dim: int, scale: Number, knee: Number, center) -> Weight:
    """Descriptor for scale·(r/knee)^(alpha|beta) with the kind read off the exponents."""
    if alpha == 0 and beta == 0:
        return Weight("constant", 0, 0, dim, scale=scale, center=center)
    if alpha == beta:
        if knee != 1:
            scale = scale * float(knee) ** (-float(alpha))
        return Weight("power", alpha, alpha, dim, scale=scale, center=center)
    return Weight("two_regime", alpha, beta, dim, scale=scale, knee=knee, center=center)


def weight_pow(w: Weight, s: Number) -> Weight:
    """Pointwise s-th power, again a descriptor."""
    scale = w.scale ** s
    if isinstance(scale, complex) or not scale > 0:
        raise PreconditionError("weight scale must stay positive")
    return _make(w.alpha * s, w.beta * s, w.dim, scale, w.knee, w.center)


def weight_product(w1: Weight, w2: Weight) -> Weight:
    """Pointwise product when both factors share center and regime boundary."""
    if w1.dim != w2.dim:
        raise PreconditionError("weights live in different dimensions")
    if w1.is_constant:
        return w2.scaled(w1.scale)
    if w2.is_constant:
        return w1.scaled(w2.scale)
    if w1.center != w2.center:
        raise PreconditionError("product of weights with different centers is not a descriptor")
    k1 = w1.knee if w1.kind == "two_regime" else None
    k2 = w2.knee if w2.kind == "two_regime" else None
    if k1 is not None and k2 is not None and k1 != k2:
        raise PreconditionError("product of weights with different regime boundaries is not a descriptor")
    knee = k1 if k1 is not None else (k2 if k2 is not None else 1)
    return _make(w1.alpha + w2.alpha, w1.beta + w2.beta, w1.dim, w1.scale * w2.scale, knee, w1.center)


def _num(x: Number):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    return x


def _fmt(x: Number) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return f"{x:g}"


# ----------------------------------------------------------------------- regions

def _vec(c, dim: int | None = None) -> tuple:
    arr = np.atleast_1d(np.asarray(c, dtype=float))
    if dim is not None and arr.size == 1 and dim > 1:
        arr = np.full(dim, float(arr[0]))
    return tuple(float(v) for v in arr)


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: float

    def __init__(self, center, radius):
        object.__setattr__(self, "center", _vec(center))
        object.__setattr__(self, "radius", float(radius))
        if not self.radius > 0:
            raise PreconditionError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    def volume(self) -> float:
        return unit_ball_volume(self.dim) * self.radius ** self.dim

    def bounding_box(self) -> "Box":
        c = np.asarray(self.center)
        return Box(c - self.radius, c + self.radius)

    def dilated(self, k: float) -> "Ball":
        return Ball(self.center, self.radius * k)

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, float)
        if self.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            return np.abs(x - self.center[0]) <= self.radius
        return np.linalg.norm(x - np.asarray(self.center), axis=-1) <= self.radius

    def distance_range(self, point) -> tuple[float, float]:
        d = float(np.linalg.norm(np.asarray(self.center) - np.asarray(point, float)))
        return max(0.0, d - self.radius), d + self.radius

    def to_json(self) -> dict:
        return {"shape": "ball", "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class Cube:
    """Axis-parallel cube given by its center and half side length."""

    center: tuple
    half_side: float

    def __init__(self, center, half_side):
        object.__setattr__(self, "center", _vec(center))
        object.__setattr__(self, "half_side", float(half_side))
        if not self.half_side > 0:
            raise PreconditionError("cube half side must be positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def radius(self) -> float:
        return self.half_side

    def volume(self) -> float:
        return (2.0 * self.half_side) ** self.dim

    def bounding_box(self) -> "Box":
        c = np.asarray(self.center)
        return Box(c - self.half_side, c + self.half_side)

    def dilated(self, k: float) -> "Cube":
        return Cube(self.center, self.half_side * k)

    def contains(self, x) -> np.ndarray:
        return self.bounding_box().contains(x)

    def distance_range(self, point) -> tuple[float, float]:
        return self.bounding_box().distance_range(point)

    def to_json(self) -> dict:
        return {"shape": "cube", "center": list(self.center), "half_side": self.half_side}


@dataclass(frozen=True)
class Box:
    lo: tuple
    hi: tuple

    def __init__(self, lo, hi):
        lo, hi = _vec(lo), _vec(hi)
        if len(lo) != len(hi) or any(a > b for a, b in zip(lo, hi)):
            raise PreconditionError("box corners are inconsistent")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def center(self) -> tuple:
        return tuple((a + b) / 2 for a, b in zip(self.lo, self.hi))

    def volume(self) -> float:
        return float(np.prod(np.subtract(self.hi, self.lo)))

    def bounding_box(self) -> "Box":
        return self

    def intersect(self, other: "Box") -> "Box | None":
        lo = np.maximum(self.lo, other.lo)
        hi = np.minimum(self.hi, other.hi)
        if np.any(lo >= hi):
            return None
        return Box(lo, hi)

    def scaled(self, k: float) -> "Box":
        lo, hi = np.asarray(self.lo) * k, np.asarray(self.hi) * k
        return Box(np.minimum(lo, hi), np.maximum(lo, hi))

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, float)
        if self.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            return (x >= self.lo[0]) & (x <= self.hi[0])
        return np.all((x >= np.asarray(self.lo)) & (x <= np.asarray(self.hi)), axis=-1)

    def distance_range(self, point) -> tuple[float, float]:
        p = np.asarray(point, float)
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        near = np.clip(p, lo, hi)
        far = np.where(np.abs(lo - p) > np.abs(hi - p), lo, hi)
        return float(np.linalg.norm(near - p)), float(np.linalg.norm(far - p))

    def to_json(self) -> dict:
        return {"shape": "box", "lo": list(self.lo), "hi": list(self.hi)}


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def unit_sphere_area(n: int) -> float:
    """Surface measure of the unit sphere in R^n."""
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


def region_from_json(data: dict, dim: int | None = None):
    shape = data.get("shape", "ball")
    if shape == "ball":
        return Ball(_vec(data["center"], dim), data["radius"])
    if shape == "cube":
        return Cube(_vec(data["center"], dim), data["half_side"])
    if shape == "box":
        return Box(data["lo"], data["hi"])
    raise PreconditionError(f"unknown region shape {shape!r}")


# ------------------------------------------------------------------------ spaces

@dataclass(frozen=True)
class SpaceSpec:
    """Exponents (u, p) and weight of M_{u,p}(w); u = p is L_p(w)."""

    u: Number
    p: Number
    weight: Weight = field(default_factory=Weight.constant)

    def __post_init__(self):
        for name in ("u", "p"):
            v = getattr(self, name)
            if not (is_inf(v) or v > 0):
                raise PreconditionError(f"{name} must lie in (0, ∞]")

    @property
    def trivial(self) -> bool:
        """u < p leaves only the zero function."""
        return self.u < self.p

    @property
    def is_lebesgue(self) -> bool:
        return self.u == self.p

    @property
    def dim(self) -> int:
        return self.weight.dim

    def morrey_exponent(self) -> Number:
        """1/u − 1/p, the power of w(B) in the Morrey expression."""
        return reciprocal(self.u) - reciprocal(self.p)

    def require_nontrivial(self) -> None:
        if self.trivial:
            raise PreconditionError(f"M_{{{self.u},{self.p}}} with u < p is the zero space")

    def to_json(self) -> dict:
        return {"u": _ext_json(self.u), "p": _ext_json(self.p), "weight": self.weight.to_json()}

    @classmethod
    def from_json(cls, data: dict | str, dim: int | None = None) -> "SpaceSpec":
        if isinstance(data, str):
            data = json.loads(data)
        w = data.get("weight")
        weight = Weight.from_json(w, dim) if w is not None else Weight.constant(1, dim or 1)
        return cls(exact(data["u"]), exact(data["p"]), weight)


def _ext_json(x: Number):
    return "inf" if is_inf(x) else _num(x)


# ------------------------------------------------------------------------ config

@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdivisions: int = 200
    singularity_mode: str = "graded"  # "graded" or "radial"
    cutoffs: tuple = tuple(10.0 ** -k for k in range(2, 11))

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise PreconditionError("tolerances must be positive")
        if self.singularity_mode not in ("graded", "radial"):
            raise PreconditionError(f"unknown singularity mode {self.singularity_mode!r}")


DEFAULT_CONFIG = QuadratureConfig()


# ---------------------------------------------------------------------- verdicts

@dataclass(frozen=True)
class SupConditionReport:
    expression_id: str
    sup_estimate: float
    trend: str  # "bounded" | "growing" | "inconclusive"
    witness: dict | None = None
    trace: tuple = ()

    def to_json(self) -> dict:
        return {"expression_id": self.expression_id, "sup_estimate": self.sup_estimate,
                "trend": self.trend, "witness": self.witness, "trace": list(self.trace)}


@dataclass(frozen=True)
class EmbeddingVerdict:
    verdict: str  # "embeds" | "not_embeds" | "inconclusive"
    certificate: dict | None = None
    witness: dict | None = None
    failed_conditions: tuple = ()
    boundary: bool = False
    reports: tuple = ()

    def __post_init__(self):
        if self.verdict not in ("embeds", "not_embeds", "inconclusive"):
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def embeds(self) -> bool:
        return self.verdict == "embeds"

    def to_json(self) -> dict:
        out: dict[str, Any] = {"verdict": self.verdict}
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.witness is not None:
            out["witness"] = self.witness
        if self.verdict == "inconclusive":
            out["failed_conditions"] = list(self.failed_conditions)
        if self.boundary:
            out["boundary"] = True
        if self.reports:
            out["reports"] = [r.to_json() for r in self.reports]
        return out


def as_points(points: Iterable, dim: int) -> np.ndarray:
    """Normalize a point set to shape (m, dim)."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if dim == 1 else arr.reshape(1, dim)
    if arr.shape[-1] != dim:
        raise PreconditionError(f"points have dimension {arr.shape[-1]}, expected {dim}")
    return arr
