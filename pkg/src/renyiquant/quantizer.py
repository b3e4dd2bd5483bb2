"""Finite interval quantizers and their exact figures of merit.

A quantizer is a strictly increasing boundary vector plus one codepoint per
cell.  Cell i covers (boundaries[i], boundaries[i+1]]; the first cell is
closed on the left.  Distortion and cell masses are evaluated in closed form
against piecewise-constant densities and by adaptive quadrature otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._quadrature import bisect_increasing, integrate
from .densities import Density, Interval, PiecewiseConstantDensity
from .entropy import renyi_entropy

__all__ = [
    "IntervalQuantizer",
    "cell_masses",
    "quantizer_entropy",
    "distortion",
    "cell_distortion",
    "optimal_codepoint",
    "improve_codepoints",
    "uniform_quantizer",
    "transform_quantizer",
]

CODEPOINT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class IntervalQuantizer:
    boundaries: np.ndarray
    codepoints: np.ndarray

    def __post_init__(self):
        b = np.ascontiguousarray(self.boundaries, dtype=float)
        c = np.ascontiguousarray(self.codepoints, dtype=float)
        if b.ndim != 1 or c.ndim != 1 or len(b) != len(c) + 1 or len(c) < 1:
            raise ValueError("need n+1 boundaries for n >= 1 codepoints")
        if not np.all(np.isfinite(b)) or not np.all(np.isfinite(c)):
            raise ValueError("boundaries and codepoints must be finite")
        if np.any(np.diff(b) <= 0):
            raise ValueError("boundaries must be strictly increasing")
        tol = CODEPOINT_TOL * (b[-1] - b[0])
        if np.any(c < b[:-1] - tol) or np.any(c > b[1:] + tol):
            raise ValueError("each codepoint must lie in the closure of its cell")
        # snap float dust back into the closed cell so the invariant is exact
        c = np.minimum(np.maximum(c, b[:-1]), b[1:])
        b.flags.writeable = False
        c.flags.writeable = False
        object.__setattr__(self, "boundaries", b)
        object.__setattr__(self, "codepoints", c)

    @property
    def levels(self) -> int:
        return len(self.codepoints)

    @property
    def span(self) -> Interval:
        return Interval(float(self.boundaries[0]), float(self.boundaries[-1]))

    def quantize(self, x: float) -> int:
        """Cell index of x; the first cell is closed on the left."""
        x = float(x)
        b = self.boundaries
        if x < b[0] or x > b[-1]:
            raise ValueError(f"{x!r} is outside the quantizer span [{b[0]}, {b[-1]}]")
        idx = int(np.searchsorted(b, x, side="left")) - 1
        return min(max(idx, 0), self.levels - 1)

    def to_json(self) -> dict:
        return {
            "boundaries": [float(x) for x in self.boundaries],
            "codepoints": [float(x) for x in self.codepoints],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "IntervalQuantizer":
        try:
            return cls(obj["boundaries"], obj["codepoints"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed quantizer object: {exc}") from None

    def __repr__(self):
        return f"IntervalQuantizer(levels={self.levels}, span=[{self.span.lo}, {self.span.hi}])"


def _check_covers(q: IntervalQuantizer, d: Density):
    span, supp = q.span, d.support
    tol = 1e-12 * max(span.width, 1.0)
    if supp.lo < span.lo - tol or supp.hi > span.hi + tol:
        raise ValueError(
            f"density support [{supp.lo}, {supp.hi}] is not covered by the "
            f"quantizer span [{span.lo}, {span.hi}]"
        )


def cell_masses(q: IntervalQuantizer, d: Density) -> np.ndarray:
    """Probability carried by each cell; exact zeros stay exact."""
    _check_covers(q, d)
    bounds = np.asarray(q.boundaries)
    if isinstance(d, PiecewiseConstantDensity):
        # accumulate each cell from segment overlaps: no cancellation, so
        # even tiny masses keep full relative accuracy
        x = np.asarray(d.breakpoints)
        h = np.asarray(d.heights)
        lo = np.maximum(bounds[:-1, None], x[None, :-1])
        hi = np.minimum(bounds[1:, None], x[None, 1:])
        masses = np.clip(hi - lo, 0.0, None) @ h
    else:
        cdf_vals = np.array([d.cdf(float(x)) for x in bounds])
        masses = np.diff(cdf_vals)
        masses[masses < 0.0] = 0.0
    total = float(masses.sum())
    if total <= 0.0:
        raise ValueError("density mass inside the quantizer span is zero")
    return masses / total


def quantizer_entropy(q: IntervalQuantizer, d: Density, alpha) -> float:
    """Entropy of order alpha of the quantizer output distribution."""
    return renyi_entropy(cell_masses(q, d), alpha)


def _psi(y: float, rp1: float) -> float:
    # antiderivative of |x|**r evaluated at y, with rp1 = r + 1
    return math.copysign(abs(y) ** rp1, y) / rp1


def distortion(q: IntervalQuantizer, d: Density, r: float) -> float:
    """Expected r-th power error of the quantizer against the density."""
    from .core import validate_exponent

    r = validate_exponent(r)
    _check_covers(q, d)
    if isinstance(d, PiecewiseConstantDensity):
        edges = np.unique(np.concatenate((q.boundaries, d.breakpoints)))
        edges = edges[(edges >= q.boundaries[0]) & (edges <= q.boundaries[-1])]
        rp1 = r + 1.0
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            mid = 0.5 * (a + b)
            h = d.pdf(mid)
            if h == 0.0:
                continue
            c = float(q.codepoints[q.quantize(mid)])
            total += h * (_psi(b - c, rp1) - _psi(a - c, rp1))
        return float(total)

    total = 0.0
    breaks = d.interior_breakpoints()
    for i in range(q.levels):
        a, b = float(q.boundaries[i]), float(q.boundaries[i + 1])
        c = float(q.codepoints[i])
        inner = [x for x in breaks if a < x < b] + ([c] if a < c < b else [])
        total += integrate(lambda x: abs(x - c) ** r * d.pdf(x), a, b, breakpoints=inner)
    return float(total)


def cell_distortion(d: Density, lo: float, hi: float, c: float, r: float) -> float:
    """Integral of |x - c|**r against the density over a single cell."""
    from .core import validate_exponent

    r = validate_exponent(r)
    if hi <= lo:
        return 0.0
    if isinstance(d, PiecewiseConstantDensity):
        edges = np.unique(
            np.concatenate(
                (np.asarray([lo, hi]), d.breakpoints[(d.breakpoints > lo) & (d.breakpoints < hi)])
            )
        )
        rp1 = r + 1.0
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            h = d.pdf(0.5 * (a + b))
            if h > 0.0:
                total += h * (_psi(b - c, rp1) - _psi(a - c, rp1))
        return float(total)
    inner = [x for x in d.interior_breakpoints() if lo < x < hi] + ([c] if lo < c < hi else [])
    return integrate(lambda x: abs(x - c) ** r * d.pdf(x), lo, hi, breakpoints=inner)


def _one_sided_moment(d: Density, lo: float, hi: float, a: float, r: float, left: bool) -> float:
    """Integral of |x - a|**(r-1) dmu over [lo, a] (left) or [a, hi] (right)."""
    if isinstance(d, PiecewiseConstantDensity):
        s_arr, t_arr = (lo, a) if left else (a, hi)
        if t_arr <= s_arr:
            return 0.0
        edges = np.unique(
            np.concatenate(
                (np.asarray([s_arr, t_arr]), d.breakpoints[(d.breakpoints > s_arr) & (d.breakpoints < t_arr)])
            )
        )
        total = 0.0
        for s, t in zip(edges[:-1], edges[1:]):
            h = d.pdf(0.5 * (s + t))
            if h == 0.0:
                continue
            if left:
                total += h * ((a - s) ** r - (a - t) ** r) / r
            else:
                total += h * ((t - a) ** r - (s - a) ** r) / r
        return total
    s, t = (lo, a) if left else (a, hi)
    if t <= s:
        return 0.0
    return integrate(lambda x: abs(x - a) ** (r - 1.0) * d.pdf(x), s, t)


def optimal_codepoint(cell: Interval, d: Density, r: float) -> float:
    """Codepoint balancing the one-sided (r-1)-moments of the cell.

    The balance function is nondecreasing in the candidate point, so plain
    bisection brackets the stationary point; for r = 2 this is the
    conditional mean, for r = 1 the conditional median.
    """
    from .core import validate_exponent

    r = validate_exponent(r)
    lo, hi = cell.lo, cell.hi
    mass = d.cdf(hi) - d.cdf(lo)
    if mass <= 0.0:
        raise ValueError(f"cell [{lo}, {hi}] carries no mass")

    def balance(a):
        return _one_sided_moment(d, lo, hi, a, r, left=True) - _one_sided_moment(
            d, lo, hi, a, r, left=False
        )

    return bisect_increasing(balance, lo, hi, target=0.0, tol=1e-13 * (hi - lo))


def improve_codepoints(q: IntervalQuantizer, d: Density, r: float) -> IntervalQuantizer:
    """Replace each codepoint by the cell optimum; zero-mass cells keep theirs."""
    new_points = []
    for i in range(q.levels):
        cell = Interval(float(q.boundaries[i]), float(q.boundaries[i + 1]))
        if d.cdf(cell.hi) - d.cdf(cell.lo) > 0.0:
            new_points.append(optimal_codepoint(cell, d, r))
        else:
            new_points.append(float(q.codepoints[i]))
    return IntervalQuantizer(q.boundaries, np.asarray(new_points))


def uniform_quantizer(interval: Interval, n: int) -> IntervalQuantizer:
    """n equal cells with midpoint codepoints."""
    n = int(n)
    if n < 1:
        raise ValueError(f"need at least one cell, got {n}")
    b = interval.lo + (interval.width / n) * np.arange(n + 1)
    b[-1] = interval.hi
    mids = 0.5 * (b[:-1] + b[1:])
    return IntervalQuantizer(b, mids)


def transform_quantizer(q: IntervalQuantizer, c: float, t: float) -> IntervalQuantizer:
    """Image of the quantizer under x -> c*x + t with c > 0."""
    c = float(c)
    if not c > 0:
        raise ValueError(f"scale must be positive, got {c!r}")
    return IntervalQuantizer(c * q.boundaries + t, c * q.codepoints + t)
