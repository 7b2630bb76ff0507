"""Finite ball families standing in for "all balls", and supremum search over them."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

import numpy as np

from .core import INF, PreconditionError, Weight

__all__ = ["BallFamily", "SearchResult", "TrendResult", "sup_search", "classify_trend", "default_family"]

# evaluate(centers (m, n), radii (m,)) -> values (m,)
Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]

DECADE_DENSITY = 64 / 6  # radii per decade of the default family

# anchored balls sit at these multiples of their radius from the anchor, along each axis;
# scale-relative placement reaches the extremal balls of power-type weights at every scale
ANCHOR_OFFSETS = (0.25, 0.5, 0.75, 1.0, 1.5, 2.0)


@dataclass(frozen=True)
class BallFamily:
    """Centers on a uniform grid times log-spaced radii, plus anchored balls.

    Anchored balls have a given point at their center, on their boundary, or at a fixed
    multiple of the radius away along a coordinate axis; anchoring at singular points and
    jumps lets coarse grids hit the extremal balls of piecewise-power integrands exactly.
    """

    dim: int = 1
    center_range: tuple = (-2.0, 2.0)
    n_centers: int = 33
    radius_range: tuple = (1e-3, 1e3)
    n_radii: int = 64
    refinement_levels: int = 3
    zoom: float = 8.0
    anchors: tuple = ()
    explicit_centers: tuple | None = None
    explicit_radii: tuple | None = None
    inner_ranges: tuple = ()

    def __post_init__(self):
        lo, hi = self.radius_range
        if not (0 < lo <= hi):
            raise PreconditionError("radii must be positive")
        if self.n_centers < 1 or self.n_radii < 1:
            raise PreconditionError("ball family is empty")
        if self.refinement_levels < 0:
            raise PreconditionError("refinement levels must be non-negative")
        object.__setattr__(self, "anchors", tuple(tuple(float(v) for v in np.atleast_1d(a)) for a in self.anchors))

    # grids
    def center_grid(self) -> np.ndarray:
        if self.explicit_centers is not None:
            return np.asarray(self.explicit_centers, float).reshape(-1, self.dim)
        grids = []
        for lo, hi in (self.center_range,) + tuple(self.inner_ranges):
            axis = np.linspace(lo, hi, self.n_centers) if self.n_centers > 1 else np.array([(lo + hi) / 2])
            mesh = np.meshgrid(*([axis] * self.dim), indexing="ij")
            grids.append(np.stack(mesh, axis=-1).reshape(-1, self.dim))
        return np.unique(np.concatenate(grids), axis=0)

    def radius_grid(self) -> np.ndarray:
        if self.explicit_radii is not None:
            return np.asarray(self.explicit_radii, float)
        lo, hi = self.radius_range
        return np.geomspace(lo, hi, self.n_radii) if self.n_radii > 1 else np.array([math.sqrt(lo * hi)])

    def pairs(self, centers: np.ndarray | None = None, radii: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
        centers = self.center_grid() if centers is None else centers
        radii = self.radius_grid() if radii is None else radii
        c = np.repeat(centers, radii.size, axis=0)
        r = np.tile(radii, centers.shape[0])
        ac, ar = self._anchored(radii)
        bc, br = self._spanning()
        return np.concatenate([c, ac, bc]), np.concatenate([r, ar, br])

    def _spanning(self) -> tuple[np.ndarray, np.ndarray]:
        """Balls having two anchors as antipodal boundary points."""
        pts = [np.asarray(a) for a in self.anchors]
        cs, rs = [], []
        for i, a in enumerate(pts):
            for b in pts[i + 1:]:
                r = 0.5 * float(np.linalg.norm(a - b))
                if r > 0:
                    cs.append(0.5 * (a + b))
                    rs.append(r)
        if not cs:
            return np.empty((0, self.dim)), np.empty(0)
        return np.array(cs), np.array(rs)

    def _anchored(self, radii: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if not self.anchors:
            return np.empty((0, self.dim)), np.empty(0)
        offsets = [np.zeros(self.dim)]
        for i in range(self.dim):
            e = np.zeros(self.dim)
            e[i] = 1.0
            offsets += [t * e for t in ANCHOR_OFFSETS] + [-t * e for t in ANCHOR_OFFSETS]
        offsets = np.array(offsets)
        cs, rs = [], []
        for a in self.anchors:
            a = np.asarray(a)
            for r in radii:
                cs.append(a[None, :] + r * offsets)
                rs.append(np.full(len(offsets), r))
        return np.concatenate(cs), np.concatenate(rs)

    # refinement / extension
    def refined_pairs(self, center: np.ndarray, radius: float, level: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.center_range
        half_span = 0.5 * (hi - lo) / self.zoom ** level
        log_half = 0.5 * math.log(self.radius_range[1] / self.radius_range[0]) / self.zoom ** level
        n_c = self.n_centers if self.dim == 1 else min(self.n_centers, 9)
        axis = np.linspace(-half_span, half_span, n_c)
        mesh = np.stack(np.meshgrid(*([axis] * self.dim), indexing="ij"), axis=-1).reshape(-1, self.dim)
        centers = center[None, :] + mesh
        n_r = self.n_radii if self.dim == 1 else min(self.n_radii, 17)
        radii = radius * np.exp(np.linspace(-log_half, log_half, n_r))
        return self.pairs(centers, radii)

    def extended(self, k: int) -> "BallFamily":
        """Radius range ×10^k at both ends, center range ×4^k."""
        if k == 0:
            return self
        lo, hi = self.radius_range
        c_lo, c_hi = self.center_range
        mid, half = (c_lo + c_hi) / 2, (c_hi - c_lo) / 2 * 4 ** k
        return replace(self, radius_range=(lo / 10 ** k, hi * 10 ** k), center_range=(mid - half, mid + half),
                       n_radii=self.n_radii + int(round(2 * k * DECADE_DENSITY)), explicit_centers=None,
                       explicit_radii=None, inner_ranges=tuple(self.inner_ranges) + (tuple(self.center_range),))

    # serialization
    def to_json(self) -> dict:
        out = {"dim": self.dim, "center_range": list(self.center_range), "n_centers": self.n_centers,
               "radius_range": list(self.radius_range), "n_radii": self.n_radii,
               "refinement_levels": self.refinement_levels, "zoom": self.zoom,
               "anchors": [list(a) for a in self.anchors]}
        if self.explicit_centers is not None:
            out["centers"] = [list(c) for c in np.asarray(self.explicit_centers).reshape(-1, self.dim)]
        if self.explicit_radii is not None:
            out["radii"] = list(self.explicit_radii)
        return out

    @classmethod
    def from_json(cls, data: dict | str, dim: int | None = None) -> "BallFamily":
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data.get("dim", dim or 1))
        kw = dict(dim=n)
        if "center_range" in data:
            kw["center_range"] = tuple(float(v) for v in data["center_range"])
        if "radius_range" in data:
            kw["radius_range"] = tuple(float(v) for v in data["radius_range"])
        for key in ("n_centers", "n_radii", "refinement_levels"):
            if key in data:
                kw[key] = int(data[key])
        if "zoom" in data:
            kw["zoom"] = float(data["zoom"])
        if "anchors" in data:
            kw["anchors"] = tuple(tuple(a) if isinstance(a, (list, tuple)) else (a,) for a in data["anchors"])
        if "centers" in data:
            kw["explicit_centers"] = tuple(tuple(np.atleast_1d(c)) for c in data["centers"])
        if "radii" in data:
            radii = sorted(float(r) for r in data["radii"])
            kw["radius_range"] = (radii[0], radii[-1])
            kw["n_radii"] = len(radii)
            kw["explicit_radii"] = tuple(radii)
        return cls(**kw)


def default_family(dim: int = 1, scales: Iterable[float] = (), anchors: Iterable = (), reach: float = 1.0,
                   refinement_levels: int = 3) -> BallFamily:
    """Family covering [-L, L]^n with radii from 10^-3 of the smallest to 10^3 of the largest scale."""
    scales = [float(s) for s in scales if np.isfinite(s) and s > 0] or [1.0]
    small, large = min(scales + [1.0]), max(scales + [1.0])
    L = 2.0 * max(reach, 1.0)
    lo, hi = 1e-3 * small, 1e3 * large
    n_radii = max(64, int(round(math.log10(hi / lo) * DECADE_DENSITY)) + 1)
    return BallFamily(dim=dim, center_range=(-L, L), n_centers=33 if dim == 1 else (9 if dim == 2 else 5),
                      radius_range=(lo, hi), n_radii=n_radii if dim == 1 else 24,
                      refinement_levels=refinement_levels, anchors=tuple(anchors))


# ------------------------------------------------------------------ searches

@dataclass
class SearchResult:
    value: float
    center: np.ndarray | None
    radius: float | None
    trace: list = field(default_factory=list)
    divergent: bool = False

    @property
    def last_change(self) -> float:
        if len(self.trace) < 2 or not np.isfinite(self.value):
            return 0.0 if np.isfinite(self.value) else INF
        prev, last = self.trace[-2], self.trace[-1]
        return abs(last - prev) / max(abs(last), 1e-300)

    def stable(self, rel_tol: float) -> bool:
        return np.isfinite(self.value) and self.last_change < rel_tol

    def witness(self) -> dict | None:
        if self.center is None:
            return None
        return {"center": [float(v) for v in np.atleast_1d(self.center)], "radius": float(self.radius)}


def _best(values: np.ndarray) -> int | None:
    vals = np.where(np.isnan(values), -INF, values)
    if vals.size == 0 or np.all(vals == -INF):
        return None
    return int(np.argmax(vals))


def sup_search(evaluate: Evaluator, family: BallFamily) -> SearchResult:
    """Grid maximum, then refinement_levels zooms around the running argmax."""
    centers, radii = family.pairs()
    vals = np.asarray(evaluate(centers, radii), dtype=float)
    i = _best(vals)
    if i is None:
        return SearchResult(0.0, None, None, [0.0])
    best, c, r = float(vals[i]), centers[i], float(radii[i])
    if not np.isfinite(best):
        return SearchResult(INF, c, r, [INF], divergent=True)
    trace = [best]
    for level in range(1, family.refinement_levels + 1):
        cs, rs = family.refined_pairs(c, r, level)
        vals = np.asarray(evaluate(cs, rs), dtype=float)
        j = _best(vals)
        if j is not None and vals[j] > best:
            best, c, r = float(vals[j]), cs[j], float(rs[j])
            if not np.isfinite(best):
                trace.append(INF)
                return SearchResult(INF, c, r, trace, divergent=True)
        trace.append(best)
    return SearchResult(best, c, r, trace)


@dataclass
class TrendResult:
    estimate: float
    trend: str  # "bounded" | "growing" | "inconclusive"
    trace: list
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"estimate": self.estimate, "trend": self.trend, "trace": self.trace, "witness": self.witness}


def classify_trend(evaluate: Evaluator, family: BallFamily, extensions: int = 3,
                   grow_factor: float = 2.0, bounded_change: float = 0.05) -> TrendResult:
    """Growing if the supremum at least doubles over the extensions, Bounded if the last one moved it < 5%."""
    sups, witness = [], None
    for k in range(extensions + 1):
        res = sup_search(evaluate, family.extended(k))
        if res.divergent:
            return TrendResult(INF, "growing", sups + [INF], res.witness())
        # nested families: the supremum can only grow
        if not sups or res.value >= sups[-1]:
            witness = res.witness()
            sups.append(res.value)
        else:
            sups.append(sups[-1])
    first, prev, last = sups[0], sups[-2], sups[-1]
    if first > 0 and last / first >= grow_factor:
        trend = "growing"
    elif last == 0 or abs(last / prev - 1) < bounded_change:
        trend = "bounded"
    else:
        trend = "inconclusive"
    return TrendResult(last, trend, sups, witness)


def weight_scales(w: Weight) -> tuple[list[float], list[tuple]]:
    """Length scales and anchor points contributed by a weight."""
    origin = tuple(w.origin)
    scales = [float(w.knee)] if w.kind == "two_regime" else []
    if w.center is not None:
        scales.append(float(np.linalg.norm(w.origin)))
    anchors = [origin]
    if w.kind == "two_regime" and w.dim == 1:
        anchors += [(origin[0] - float(w.knee),), (origin[0] + float(w.knee),)]
    return scales, anchors


def function_scales(f) -> tuple[list[float], list[tuple], float]:
    """(length scales, anchor points, reach) of a test function."""
    scales, anchors = [], []
    reach = 0.0
    terms = f.terms()
    if terms is not None:
        for t in terms:
            if t.coef == 0:
                continue
            region = t.region
            if region is None:
                continue
            box = region.bounding_box()
            scales += [h - l for l, h in zip(box.lo, box.hi) if h > l]
            far = region.distance_range(np.zeros(f.dim))[1]
            reach = max(reach, far)
    else:
        sr = f.support_radius()
        if np.isfinite(sr):
            reach = sr
            scales.append(sr)
    for bp in f.breakpoints():
        bp = np.atleast_1d(bp)
        anchors.append(tuple(float(v) for v in bp))
        d = float(np.linalg.norm(bp))
        if d > 0:
            scales.append(d)
    if reach > 0:
        scales.append(reach)
    return scales, anchors, reach


def family_for(f=None, w: Weight | None = None, dim: int | None = None, refinement_levels: int = 3,
               others: Iterable[Weight] = ()) -> BallFamily:
    """Default family adapted to the scales and jump points of f and of every weight given."""
    scales, anchors, reach = [], [], 1.0
    if f is not None:
        s, a, r = function_scales(f)
        scales += s
        anchors += a
        reach = max(reach, r) if np.isfinite(r) else reach
        dim = f.dim
    for w in ([w] if w is not None else []) + list(others):
        s, a = weight_scales(w)
        scales += s
        anchors += a
        reach = max(reach, float(np.linalg.norm(w.origin)) + float(w.knee))
        dim = w.dim
    uniq = list(dict.fromkeys(tuple(round(v, 14) for v in a) for a in anchors))
    return default_family(dim or 1, scales, uniq, reach, refinement_levels)
