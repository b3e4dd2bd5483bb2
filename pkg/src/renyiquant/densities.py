"""One-dimensional source densities on compact intervals.

Two families are supported: piecewise-constant densities, for which every
integral used by the library has a closed form, and smooth densities backed
by adaptive quadrature.  Both expose the same small surface: ``pdf``,
``cdf``, ``quantile`` (the generalized inverse of the cdf), power and
log-moment integrals, essential bounds, and similarity transforms.

Densities are immutable after construction; all caches are built eagerly in
``__init__`` so instances can be shared across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from ._quadrature import bisect_increasing, golden_extremum, integrate

__all__ = [
    "Interval",
    "PiecewiseConstantDensity",
    "SmoothDensity",
    "Density",
    "uniform",
    "truncated_gauss",
    "truncated_laplace",
    "merged_segments",
    "require_nested_supports",
    "density_from_spec",
    "density_to_spec",
]

MASS_TOL = 1e-12
ESS_SCAN_POINTS = 4096


@dataclass(frozen=True, order=True)
class Interval:
    """Closed bounded interval [lo, hi] with lo < hi."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError("interval endpoints must be finite")
        if not lo < hi:
            raise ValueError(f"interval must satisfy lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol


class PiecewiseConstantDensity:
    """Density that is constant on finitely many abutting segments.

    Segment i covers (breakpoints[i-1], breakpoints[i]]; the first segment is
    closed on the left.  All heights are strictly positive and the total mass
    must equal 1 within a strict tolerance.
    """

    def __init__(self, breakpoints: Sequence[float], heights: Sequence[float]):
        b = np.ascontiguousarray(breakpoints, dtype=float)
        h = np.ascontiguousarray(heights, dtype=float)
        if b.ndim != 1 or h.ndim != 1 or len(b) != len(h) + 1 or len(h) < 1:
            raise ValueError("need m+1 breakpoints for m >= 1 heights")
        if not np.all(np.isfinite(b)) or not np.all(np.isfinite(h)):
            raise ValueError("breakpoints and heights must be finite")
        if np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if np.any(h <= 0):
            raise ValueError("heights must be strictly positive")
        lens = np.diff(b)
        total = float(np.dot(h, lens))
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"total mass must be 1 within {MASS_TOL}, got {total!r}")
        b.flags.writeable = False
        h.flags.writeable = False
        self.breakpoints = b
        self.heights = h
        self._lens = lens
        cum = np.concatenate(([0.0], np.cumsum(h * lens)))
        cum[-1] = 1.0
        self._cum = cum

    @property
    def support(self) -> Interval:
        return Interval(float(self.breakpoints[0]), float(self.breakpoints[-1]))

    def interior_breakpoints(self):
        return [float(x) for x in self.breakpoints[1:-1]]

    def _segment_index(self, x: float) -> int:
        # segment i owns (b[i], b[i+1]]; x == b[0] belongs to segment 0
        idx = int(np.searchsorted(self.breakpoints, x, side="left")) - 1
        return min(max(idx, 0), len(self.heights) - 1)

    def pdf(self, x: float) -> float:
        x = float(x)
        if x < self.breakpoints[0] or x > self.breakpoints[-1]:
            return 0.0
        return float(self.heights[self._segment_index(x)])

    def cdf(self, x: float) -> float:
        x = float(x)
        b = self.breakpoints
        if x <= b[0]:
            return 0.0
        if x >= b[-1]:
            return 1.0
        j = int(np.searchsorted(b, x, side="right")) - 1
        if b[j] == x:
            return float(self._cum[j])
        return float(self._cum[j] + self.heights[j] * (x - b[j]))

    def quantile(self, u: float) -> float:
        """Largest x with cdf(x) <= u; exact segment inversion."""
        u = float(u)
        if not 0.0 <= u <= 1.0:
            raise ValueError(f"quantile argument must lie in [0, 1], got {u!r}")
        if u >= 1.0:
            return float(self.breakpoints[-1])
        j = int(np.searchsorted(self._cum, u, side="right")) - 1
        if self._cum[j] == u:
            return float(self.breakpoints[j])
        return float(self.breakpoints[j] + (u - self._cum[j]) / self.heights[j])

    def power_integral(self, p: float) -> float:
        """Integral of pdf**p over the support."""
        return float(np.dot(self.heights ** float(p), self._lens))

    def log_integral(self) -> float:
        """Integral of pdf * log(pdf) over the support."""
        return float(np.dot(self.heights * np.log(self.heights), self._lens))

    def ess_bounds(self):
        return float(self.heights.min()), float(self.heights.max())

    def similarity_transform(self, c: float, t: float, reflect: bool = False):
        """Density of c*X + t (or c*(-X) + t when reflect is set)."""
        c = float(c)
        if not c > 0:
            raise ValueError(f"scale must be positive, got {c!r}")
        if reflect:
            b = (t - c * self.breakpoints)[::-1]
            h = self.heights[::-1] / c
        else:
            b = t + c * self.breakpoints
            h = self.heights / c
        return PiecewiseConstantDensity(b, h)

    def __repr__(self):
        return (
            f"PiecewiseConstantDensity({list(map(float, self.breakpoints))!r}, "
            f"{list(map(float, self.heights))!r})"
        )


class SmoothDensity:
    """Quadrature-backed density given by a pdf callable on [lo, hi].

    The constructor integrates the pdf cell by cell to build a monotone cdf
    table; individual cdf evaluations then only integrate within one cell.
    ``breakpoints`` lists interior kink locations respected by every
    quadrature call.  ``weakly_unimodal`` is a caller-asserted hint (not
    verified) recording that the density has no interior local minima worse
    than its endpoint values; essential bounds use a dense scan refined by a
    golden-section pass either way.
    """

    def __init__(
        self,
        pdf: Callable[[float], float],
        lo: float,
        hi: float,
        *,
        breakpoints: Sequence[float] = (),
        rel_tol: float = 1e-10,
        max_depth: int = 40,
        ess_inf: float | None = None,
        ess_sup: float | None = None,
        weakly_unimodal: bool = True,
        table_cells: int = 1024,
    ):
        support = Interval(lo, hi)
        self._pdf = pdf
        self._support = support
        self._breaks = sorted(float(x) for x in breakpoints if support.lo < x < support.hi)
        self._rel_tol = float(rel_tol)
        self._max_depth = int(max_depth)
        self.weakly_unimodal = bool(weakly_unimodal)

        pieces = [support.lo] + self._breaks + [support.hi]
        edges = []
        for a, b in zip(pieces[:-1], pieces[1:]):
            n = max(8, int(round(table_cells * (b - a) / support.width)))
            edges.extend(np.linspace(a, b, n + 1)[:-1])
        edges.append(support.hi)
        edges = np.asarray(edges, dtype=float)
        masses = np.array(
            [integrate(pdf, a, b, self._rel_tol, self._max_depth) for a, b in zip(edges[:-1], edges[1:])]
        )
        total = float(masses.sum())
        if abs(total - 1.0) > 1e-8:
            raise ValueError(f"pdf must integrate to 1 within quadrature tolerance, got {total!r}")
        self._total = total
        cum = np.concatenate(([0.0], np.cumsum(masses / total)))
        cum[-1] = 1.0
        self._edges = edges
        self._cum = cum

        if ess_inf is not None and ess_sup is not None:
            self._ess = (float(ess_inf), float(ess_sup))
        else:
            self._ess = self._scan_bounds(ess_inf, ess_sup)

    def _scan_bounds(self, inf_override, sup_override):
        xs = np.linspace(self._support.lo, self._support.hi, ESS_SCAN_POINTS)
        vals = np.array([self._pdf(float(x)) for x in xs])
        results = []
        for maximize, override in ((False, inf_override), (True, sup_override)):
            if override is not None:
                results.append(float(override))
                continue
            i = int(vals.argmax() if maximize else vals.argmin())
            a = xs[max(i - 1, 0)]
            b = xs[min(i + 1, len(xs) - 1)]
            if b > a:
                _, v = golden_extremum(self._pdf, float(a), float(b), maximize)
                v = max(v, float(vals[i])) if maximize else min(v, float(vals[i]))
            else:
                v = float(vals[i])
            results.append(float(v))
        return results[0], results[1]

    @property
    def support(self) -> Interval:
        return self._support

    def interior_breakpoints(self):
        return list(self._breaks)

    def pdf(self, x: float) -> float:
        x = float(x)
        if x < self._support.lo or x > self._support.hi:
            return 0.0
        return float(self._pdf(x))

    def cdf(self, x: float) -> float:
        x = float(x)
        if x <= self._support.lo:
            return 0.0
        if x >= self._support.hi:
            return 1.0
        j = int(np.searchsorted(self._edges, x, side="right")) - 1
        if self._edges[j] == x:
            return float(self._cum[j])
        part = integrate(self._pdf, float(self._edges[j]), x, self._rel_tol, self._max_depth)
        return min(float(self._cum[j] + part / self._total), 1.0)

    def quantile(self, u: float) -> float:
        u = float(u)
        if not 0.0 <= u <= 1.0:
            raise ValueError(f"quantile argument must lie in [0, 1], got {u!r}")
        if u <= 0.0:
            return self._support.lo
        if u >= 1.0:
            return self._support.hi
        j = int(np.searchsorted(self._cum, u, side="right")) - 1
        j = min(j, len(self._edges) - 2)
        lo, hi = float(self._edges[j]), float(self._edges[j + 1])
        return bisect_increasing(self.cdf, lo, hi, target=u, tol=1e-13 * self._support.width)

    def power_integral(self, p: float) -> float:
        p = float(p)
        if p < 0 and self.ess_bounds()[0] <= 0.0:
            raise ValueError("negative power integral requires a density bounded away from zero")
        return integrate(
            lambda x: self._pdf(x) ** p,
            self._support.lo,
            self._support.hi,
            self._rel_tol,
            self._max_depth,
            breakpoints=self._breaks,
        )

    def log_integral(self) -> float:
        def f(x):
            v = self._pdf(x)
            return v * math.log(v) if v > 0.0 else 0.0

        return integrate(
            f, self._support.lo, self._support.hi, self._rel_tol, self._max_depth, breakpoints=self._breaks
        )

    def ess_bounds(self):
        return self._ess

    def similarity_transform(self, c: float, t: float, reflect: bool = False):
        c = float(c)
        if not c > 0:
            raise ValueError(f"scale must be positive, got {c!r}")
        base = self._pdf
        if reflect:
            new_pdf = lambda y: base((t - y) / c) / c
            lo, hi = t - c * self._support.hi, t - c * self._support.lo
            breaks = [t - c * x for x in self._breaks]
        else:
            new_pdf = lambda y: base((y - t) / c) / c
            lo, hi = t + c * self._support.lo, t + c * self._support.hi
            breaks = [t + c * x for x in self._breaks]
        i, s = self._ess
        return SmoothDensity(
            new_pdf,
            lo,
            hi,
            breakpoints=breaks,
            rel_tol=self._rel_tol,
            max_depth=self._max_depth,
            ess_inf=i / c,
            ess_sup=s / c,
            weakly_unimodal=self.weakly_unimodal,
        )

    def __repr__(self):
        return f"SmoothDensity([{self._support.lo}, {self._support.hi}])"


Density = Union[PiecewiseConstantDensity, SmoothDensity]


def uniform(lo: float, hi: float) -> PiecewiseConstantDensity:
    """Uniform density on [lo, hi]."""
    width = float(hi) - float(lo)
    return PiecewiseConstantDensity([lo, hi], [1.0 / width])


def truncated_gauss(mean: float, sigma: float, lo: float, hi: float) -> SmoothDensity:
    """Gaussian restricted to [lo, hi] and renormalized."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    rt2 = math.sqrt(2.0)
    mass = 0.5 * (math.erf((hi - mean) / (sigma * rt2)) - math.erf((lo - mean) / (sigma * rt2)))
    if mass <= 0:
        raise ValueError("truncation interval carries no mass")
    norm = 1.0 / (mass * sigma * math.sqrt(2.0 * math.pi))

    def pdf(x, _m=mean, _s=sigma, _n=norm):
        return _n * math.exp(-0.5 * ((x - _m) / _s) ** 2)

    d = SmoothDensity(pdf, lo, hi)
    d.spec = {"kind": "truncated_gauss", "mean": float(mean),
              "sigma": float(sigma), "lo": float(lo), "hi": float(hi)}
    return d


def truncated_laplace(center: float, scale: float, lo: float, hi: float) -> SmoothDensity:
    """Two-sided exponential restricted to [lo, hi] and renormalized."""
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale!r}")

    def raw_cdf(x):
        z = (x - center) / scale
        return 0.5 * math.exp(z) if z < 0 else 1.0 - 0.5 * math.exp(-z)

    mass = raw_cdf(hi) - raw_cdf(lo)
    if mass <= 0:
        raise ValueError("truncation interval carries no mass")
    norm = 1.0 / (2.0 * scale * mass)

    def pdf(x, _c=center, _s=scale, _n=norm):
        return _n * math.exp(-abs(x - _c) / _s)

    # the kink at the center matters for quadrature when it is interior
    breaks = [center] if lo < center < hi else []
    d = SmoothDensity(pdf, lo, hi, breakpoints=breaks)
    d.spec = {"kind": "truncated_laplace", "center": float(center),
              "scale": float(scale), "lo": float(lo), "hi": float(hi)}
    return d


def require_nested_supports(f: Density, g: Density):
    """Raise unless the support of f lies inside the support of g."""
    sf, sg = f.support, g.support
    tol = 1e-12 * max(sg.width, 1.0)
    if sf.lo < sg.lo - tol or sf.hi > sg.hi + tol:
        raise ValueError(
            f"first support [{sf.lo}, {sf.hi}] must lie inside second [{sg.lo}, {sg.hi}]"
        )


def merged_segments(f: PiecewiseConstantDensity, g: PiecewiseConstantDensity, lo: float, hi: float):
    """Common refinement of two piecewise grids restricted to [lo, hi].

    Yields (a, b, f_height, g_height) with heights taken as the pdf value on
    the open interior of each refined segment (0 outside a support).
    """
    cuts = np.unique(
        np.concatenate(
            (
                np.asarray([lo, hi], dtype=float),
                f.breakpoints[(f.breakpoints > lo) & (f.breakpoints < hi)],
                g.breakpoints[(g.breakpoints > lo) & (g.breakpoints < hi)],
            )
        )
    )
    out = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (a + b)
        out.append((float(a), float(b), f.pdf(mid), g.pdf(mid)))
    return out


def density_from_spec(spec: dict) -> Density:
    """Build a density from its JSON description.

    Recognized kinds: ``uniform`` (lo, hi), ``piecewise`` (breakpoints,
    heights), ``truncated_gauss`` (mean, sigma, lo, hi), and
    ``truncated_laplace`` (center, scale, lo, hi).
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("density spec must be an object with a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "uniform":
            return uniform(spec["lo"], spec["hi"])
        if kind == "piecewise":
            return PiecewiseConstantDensity(spec["breakpoints"], spec["heights"])
        if kind == "truncated_gauss":
            return truncated_gauss(spec["mean"], spec["sigma"], spec["lo"], spec["hi"])
        if kind == "truncated_laplace":
            return truncated_laplace(spec["center"], spec["scale"], spec["lo"], spec["hi"])
    except KeyError as exc:
        raise ValueError(f"density spec of kind {kind!r} is missing field {exc}") from None
    raise ValueError(f"unknown density kind {kind!r}")


def density_to_spec(d: Density) -> dict:
    """Inverse of density_from_spec."""
    if isinstance(d, PiecewiseConstantDensity):
        return {
            "kind": "piecewise",
            "breakpoints": [float(x) for x in d.breakpoints],
            "heights": [float(x) for x in d.heights],
        }
    spec = getattr(d, "spec", None)
    if spec is not None:
        return dict(spec)
    raise ValueError("density does not carry a serializable description")
