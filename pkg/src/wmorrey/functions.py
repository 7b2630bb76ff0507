"""Test functions built from indicator-times-power pieces, with a black-box escape hatch."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import INF, Ball, Box, Cube, PreconditionError, as_points, region_from_json

__all__ = [
    "Term",
    "TestFunction",
    "IndicatorPower",
    "Dilate",
    "Scale",
    "Sum",
    "AbsPower",
    "Product",
    "BlackBox",
    "indicator",
    "spike",
    "zero",
    "power_terms",
    "function_from_json",
]


def _normalize_region(region, dim: int):
    if region is None:
        return None
    if isinstance(region, Cube):
        return region.bounding_box()
    if isinstance(region, Ball) and dim == 1:
        return region.bounding_box()
    if region.dim != dim:
        raise PreconditionError("region dimension does not match the function")
    return region


def _scale_region(region, k: float):
    """Image of a region under x ↦ k·x (k > 0)."""
    if region is None:
        return None
    if isinstance(region, Box):
        return region.scaled(k)
    return Ball(np.asarray(region.center) * k, region.radius * k)


def _intersect(r1, r2):
    """Intersection of two regions, or False when it is not representable."""
    if r1 is None:
        return r2
    if r2 is None:
        return r1
    if isinstance(r1, Box) and isinstance(r2, Box):
        return r1.intersect(r2)
    if r1 == r2:
        return r1
    b1, b2 = r1.bounding_box(), r2.bounding_box()
    if b1.intersect(b2) is None:
        return None
    return False


def _disjoint(r1, r2) -> bool:
    if r1 is None or r2 is None:
        return False
    if isinstance(r1, Ball) and isinstance(r2, Ball):
        gap = np.linalg.norm(np.subtract(r1.center, r2.center))
        return gap >= r1.radius + r2.radius
    return r1.bounding_box().intersect(r2.bounding_box()) is None


def _contains(region, x: np.ndarray) -> np.ndarray:
    if region is None:
        return np.ones(x.shape[0], dtype=bool)
    return region.contains(x)


@dataclass(frozen=True)
class Term:
    """coef · χ_region(x) · |x|^gamma; region None means all of R^n."""

    coef: float
    gamma: float
    region: object = None

    def __call__(self, x: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(x, axis=-1)
        inside = _contains(self.region, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = r ** self.gamma if self.gamma != 0 else np.ones_like(r)
        return np.where(inside, self.coef * val, 0.0)

    def touches_origin(self) -> bool:
        if self.region is None:
            return True
        lo, _ = self.region.distance_range(np.zeros(len(self.region.center)))
        return lo == 0.0


class TestFunction:
    """Base class; subclasses describe x ↦ f(x) on R^dim."""

    __test__ = False  # keep pytest from collecting the class
    dim: int = 1

    def terms(self) -> list[Term] | None:
        return None

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x) -> np.ndarray:
        pts = as_points(x, self.dim)
        return self.evaluate(pts)

    def support_radius(self) -> float:
        """Radius of a ball around the origin containing the support (∞ if unbounded)."""
        t = self.terms()
        if t is None:
            raise NotImplementedError
        if not t:
            return 0.0
        return max(_region_extent(term.region) for term in t)

    def singular_exponent(self, point: np.ndarray, probe: np.ndarray) -> float | None:
        """Exponent e with |f(x)| ≈ |x - point|^e near ``point`` on the side of ``probe``.

        Returns +∞ where f vanishes near the probe and None when unknown.
        """
        t = self.terms()
        if t is None:
            return None
        active = [term for term in t if term.coef != 0 and bool(_contains(term.region, probe[None, :])[0])]
        if not active:
            return INF
        if np.any(point != 0):
            return 0.0
        return min(term.gamma for term in active)

    def breakpoints(self) -> list[np.ndarray]:
        """Points where the function is singular or jumps (1D: interval ends and origin)."""
        t = self.terms()
        if t is None:
            return []
        pts = []
        for term in t:
            if term.gamma != 0:
                pts.append(np.zeros(self.dim))
            if isinstance(term.region, Box):
                if self.dim == 1:
                    pts.append(np.array(term.region.lo))
                    pts.append(np.array(term.region.hi))
                else:
                    pts.append(np.array(term.region.center))
            elif isinstance(term.region, Ball):
                pts.append(np.array(term.region.center))
        uniq: dict[tuple, np.ndarray] = {}
        for p in pts:
            uniq.setdefault(tuple(np.round(p, 14)), p)
        return list(uniq.values())

    def sup_abs(self) -> float:
        t = self.terms()
        if t is None:
            raise NotImplementedError
        best = 0.0
        for term in t:
            if term.coef == 0:
                continue
            lo, hi = _region_distance(term.region, self.dim)
            if term.gamma < 0:
                val = INF if lo == 0 else abs(term.coef) * lo ** term.gamma
            elif term.gamma > 0:
                val = abs(term.coef) * hi ** term.gamma
            else:
                val = abs(term.coef)
            best = max(best, val)
        if not self.disjoint_terms():
            return float("nan")
        return best

    def disjoint_terms(self) -> bool:
        t = self.terms()
        if t is None:
            return False
        t = [term for term in t if term.coef != 0]
        return all(_disjoint(a.region, b.region) for i, a in enumerate(t) for b in t[i + 1:])

    def to_json(self) -> dict:
        raise NotImplementedError

    # operator sugar
    def __add__(self, other: "TestFunction") -> "TestFunction":
        return Sum([self, other])

    def __mul__(self, c: float) -> "TestFunction":
        return Scale(self, c)

    __rmul__ = __mul__


def _region_extent(region) -> float:
    if region is None:
        return INF
    return region.distance_range(np.zeros(len(region.center)))[1]


def _region_distance(region, dim: int) -> tuple[float, float]:
    if region is None:
        return 0.0, INF
    return region.distance_range(np.zeros(dim))


class _TermFunction(TestFunction):
    def evaluate(self, x):
        t = self.terms()
        out = np.zeros(x.shape[0])
        for term in t:
            out = out + term(x)
        return out


class IndicatorPower(_TermFunction):
    """x ↦ coef · χ_region(x) · |x|^gamma."""

    def __init__(self, region=None, gamma: float = 0.0, coef: float = 1.0, dim: int | None = None):
        if dim is None:
            dim = 1 if region is None else region.dim
        self.dim = dim
        self.region = _normalize_region(region, dim)
        self.gamma = float(gamma)
        self.coef = float(coef)

    def terms(self):
        if self.region is not None and isinstance(self.region, Box) and self.region.volume() == 0:
            return []
        return [Term(self.coef, self.gamma, self.region)]

    def to_json(self):
        out = {"kind": "indicator_power", "gamma": self.gamma, "coef": self.coef, "dim": self.dim}
        if self.region is not None:
            out["region"] = self.region.to_json()
        return out

    def __repr__(self):
        return f"IndicatorPower({self.region!r}, gamma={self.gamma:g}, coef={self.coef:g})"


class Dilate(_TermFunction):
    """x ↦ base(lam · x)."""

    def __init__(self, base: TestFunction, lam: float):
        if not lam > 0:
            raise PreconditionError("dilation factor must be positive")
        self.base, self.lam, self.dim = base, float(lam), base.dim

    def terms(self):
        t = self.base.terms()
        if t is None:
            return None
        return [Term(term.coef * self.lam ** term.gamma, term.gamma, _scale_region(term.region, 1 / self.lam))
                for term in t]

    def evaluate(self, x):
        if self.terms() is None:
            return self.base.evaluate(self.lam * x)
        return super().evaluate(x)

    def support_radius(self):
        return self.base.support_radius() / self.lam

    def singular_exponent(self, point, probe):
        if self.terms() is None:
            return self.base.singular_exponent(point * self.lam, probe * self.lam)
        return super().singular_exponent(point, probe)

    def breakpoints(self):
        if self.terms() is None:
            return [p / self.lam for p in self.base.breakpoints()]
        return super().breakpoints()

    def to_json(self):
        return {"kind": "dilate", "lambda": self.lam, "base": self.base.to_json()}


class Scale(_TermFunction):
    """x ↦ c · base(x)."""

    def __init__(self, base: TestFunction, c: float):
        self.base, self.c, self.dim = base, float(c), base.dim

    def terms(self):
        t = self.base.terms()
        if t is None:
            return None
        return [Term(term.coef * self.c, term.gamma, term.region) for term in t]

    def evaluate(self, x):
        return self.c * self.base.evaluate(x)

    def support_radius(self):
        return 0.0 if self.c == 0 else self.base.support_radius()

    def singular_exponent(self, point, probe):
        if self.c == 0:
            return INF
        return self.base.singular_exponent(point, probe)

    def breakpoints(self):
        return self.base.breakpoints()

    def to_json(self):
        return {"kind": "scale", "c": self.c, "base": self.base.to_json()}


class Sum(_TermFunction):
    def __init__(self, parts: Sequence[TestFunction]):
        parts = list(parts)
        if not parts:
            raise PreconditionError("empty sum; use zero() for the zero function")
        if len({p.dim for p in parts}) != 1:
            raise PreconditionError("summands live in different dimensions")
        self.parts, self.dim = parts, parts[0].dim

    def terms(self):
        out = []
        for part in self.parts:
            t = part.terms()
            if t is None:
                return None
            out.extend(t)
        return out

    def evaluate(self, x):
        return sum(part.evaluate(x) for part in self.parts)

    def support_radius(self):
        return max(part.support_radius() for part in self.parts)

    def singular_exponent(self, point, probe):
        if self.terms() is not None:
            return super().singular_exponent(point, probe)
        exps = [part.singular_exponent(point, probe) for part in self.parts]
        if any(e is None for e in exps):
            return None
        return min(exps)

    def breakpoints(self):
        if self.terms() is not None:
            return super().breakpoints()
        return [p for part in self.parts for p in part.breakpoints()]

    def to_json(self):
        return {"kind": "sum", "parts": [p.to_json() for p in self.parts]}


class AbsPower(_TermFunction):
    """x ↦ |base(x)|^r."""

    def __init__(self, base: TestFunction, r: float):
        if not r > 0:
            raise PreconditionError("power must be positive")
        self.base, self.r, self.dim = base, float(r), base.dim

    def terms(self):
        return power_terms(self.base, self.r)

    def evaluate(self, x):
        return np.abs(self.base.evaluate(x)) ** self.r

    def support_radius(self):
        return self.base.support_radius()

    def singular_exponent(self, point, probe):
        e = self.base.singular_exponent(point, probe)
        return None if e is None else e * self.r

    def breakpoints(self):
        return self.base.breakpoints()

    def sup_abs(self):
        return self.base.sup_abs() ** self.r

    def to_json(self):
        return {"kind": "abs_power", "r": self.r, "base": self.base.to_json()}


class Product(_TermFunction):
    def __init__(self, factors: Sequence[TestFunction]):
        factors = list(factors)
        if not factors:
            raise PreconditionError("empty product")
        self.factors, self.dim = factors, factors[0].dim

    def terms(self):
        acc = [Term(1.0, 0.0, None)]
        for f in self.factors:
            t = f.terms()
            if t is None:
                return None
            nxt = []
            for a in acc:
                for b in t:
                    region = _intersect(a.region, b.region)
                    if region is False:
                        return None
                    if region is None and (a.region is not None or b.region is not None):
                        continue
                    nxt.append(Term(a.coef * b.coef, a.gamma + b.gamma, region))
            acc = nxt
        return acc

    def evaluate(self, x):
        out = np.ones(x.shape[0])
        for f in self.factors:
            out = out * f.evaluate(x)
        return out

    def support_radius(self):
        return min(f.support_radius() for f in self.factors)

    def singular_exponent(self, point, probe):
        if self.terms() is not None:
            return super().singular_exponent(point, probe)
        exps = [f.singular_exponent(point, probe) for f in self.factors]
        if any(e is None for e in exps):
            return None
        return sum(exps)

    def breakpoints(self):
        return [p for f in self.factors for p in f.breakpoints()]

    def to_json(self):
        return {"kind": "product", "factors": [f.to_json() for f in self.factors]}


class BlackBox(TestFunction):
    """Pointwise evaluator with a declared support radius and optional singular points."""

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], dim: int = 1, support_radius: float = INF,
                 singular_points: Sequence = (), breakpoints: Sequence = (), label: str = "black_box"):
        self.fn, self.dim = fn, dim
        self._support = float(support_radius)
        self._singular = [np.atleast_1d(np.asarray(p, float)) for p in singular_points]
        self._breaks = [np.atleast_1d(np.asarray(p, float)) for p in breakpoints]
        self.label = label

    def evaluate(self, x):
        vals = np.asarray(self.fn(x[:, 0] if self.dim == 1 else x), dtype=float)
        return np.broadcast_to(vals, (x.shape[0],)).copy()

    def support_radius(self):
        return self._support

    def singular_points(self) -> list[np.ndarray]:
        return list(self._singular)

    def singular_exponent(self, point, probe):
        return None

    def breakpoints(self):
        return self._singular + self._breaks

    def sup_abs(self):
        return float("nan")

    def to_json(self):
        return {"kind": "black_box", "label": self.label, "support_radius": self._support}


# ------------------------------------------------------------------ helpers

def indicator(lo: float, hi: float, coef: float = 1.0) -> IndicatorPower:
    """coef · χ_[lo, hi] on the line."""
    return IndicatorPower(Box([lo], [hi]), 0.0, coef)


def spike(lo: float, hi: float, gamma: float, coef: float = 1.0) -> IndicatorPower:
    """coef · χ_[lo, hi](x) · |x|^gamma on the line."""
    return IndicatorPower(Box([lo], [hi]), gamma, coef)


def zero(dim: int = 1) -> IndicatorPower:
    return IndicatorPower(None, 0.0, 0.0, dim=dim)


def power_terms(f: TestFunction, p: float) -> list[Term] | None:
    """Terms of |f|^p when f splits into pieces with disjoint supports."""
    t = f.terms()
    if t is None:
        return None
    t = [term for term in t if term.coef != 0]
    if p == 1 and (all(term.coef > 0 for term in t) or all(term.coef < 0 for term in t)):
        # one sign throughout: |Σ terms| is the sum of the absolute terms even where they overlap
        return [Term(abs(term.coef), term.gamma, term.region) for term in t]
    if len(t) > 1 and not all(_disjoint(a.region, b.region) for i, a in enumerate(t) for b in t[i + 1:]):
        merged = _merge_same_support(t)
        if merged is None:
            return None
        t = merged
    return [Term(abs(term.coef) ** p, term.gamma * p, term.region) for term in t]


def pairwise_disjoint(terms: list[Term]) -> bool:
    return all(_disjoint(a.region, b.region) for i, a in enumerate(terms) for b in terms[i + 1:])


def _merge_same_support(terms: list[Term]) -> list[Term] | None:
    """Collapse terms sharing region and exponent; None if overlaps remain."""
    groups: dict[tuple, float] = {}
    keys: dict[tuple, Term] = {}
    for term in terms:
        key = (repr(term.region), term.gamma)
        groups[key] = groups.get(key, 0.0) + term.coef
        keys[key] = term
    out = [Term(c, keys[k].gamma, keys[k].region) for k, c in groups.items() if c != 0]
    if all(_disjoint(a.region, b.region) for i, a in enumerate(out) for b in out[i + 1:]):
        return out
    return None


def function_from_json(data: dict | str, dim: int | None = None) -> TestFunction:
    if isinstance(data, str):
        data = json.loads(data)
    kind = data.get("kind", "indicator_power")
    n = int(data.get("dim", dim or 1))
    if kind in ("indicator_power", "indicator", "spike"):
        region = None
        if "region" in data:
            region = region_from_json(data["region"], n)
        elif "interval" in data:
            lo, hi = data["interval"]
            region = Box([float(lo)], [float(hi)])
        return IndicatorPower(region, float(data.get("gamma", 0.0)), float(data.get("coef", 1.0)), dim=n)
    if kind == "dilate":
        return Dilate(function_from_json(data["base"], n), float(data["lambda"]))
    if kind == "scale":
        return Scale(function_from_json(data["base"], n), float(data["c"]))
    if kind == "sum":
        return Sum([function_from_json(p, n) for p in data["parts"]])
    if kind == "abs_power":
        return AbsPower(function_from_json(data["base"], n), float(data["r"]))
    if kind == "product":
        return Product([function_from_json(p, n) for p in data["factors"]])
    raise PreconditionError(f"unknown test function kind {kind!r}")


def radial_terms(terms: list[Term], dim: int) -> bool:
    """True when every term is a radial profile about the origin."""
    for term in terms:
        r = term.region
        if r is None:
            continue
        if isinstance(r, Ball) and not any(r.center):
            continue
        if isinstance(r, Box) and dim == 1 and r.lo[0] == -r.hi[0]:
            continue
        return False
    return True


def term_radial_range(term: Term) -> tuple[float, float]:
    r = term.region
    if r is None:
        return 0.0, math.inf
    if isinstance(r, Ball):
        return 0.0, r.radius
    return 0.0, r.hi[0]
