"""Companding quantizers driven by a point density.

A compander is described by a probability density g on a compact interval.
Its compressor G is the cdf of g and the expander is the generalized inverse
of G.  The N-level companding quantizer places boundaries at expander(i/N)
and codepoints at expander((2i-1)/(2N)); a midpoint variant keeps the same
boundaries but uses cell midpoints.
"""

from __future__ import annotations

import numpy as np

from ._quadrature import golden_extremum, integrate
from .core import distortion_constant, validate_exponent
from .densities import (
    Density,
    PiecewiseConstantDensity,
    SmoothDensity,
    merged_segments,
    require_nested_supports,
)
from .entropy import relative_entropy
from .quantizer import IntervalQuantizer

__all__ = [
    "Compander",
    "bennett_functional",
    "entropy_offset",
    "compressed_density",
]

INVERSE_CHECK_POINTS = 65
INVERSE_TOL = 1e-10


class Compander:
    """Point-density view of a companding quantizer family.

    The point density must be bounded away from zero on its support;
    construction verifies that the expander inverts the compressor on a grid.
    """

    def __init__(self, point_density: Density):
        if point_density.ess_bounds()[0] <= 0.0:
            raise ValueError("point density must be bounded away from zero on its support")
        self.point_density = point_density
        supp = point_density.support
        xs = np.linspace(supp.lo, supp.hi, INVERSE_CHECK_POINTS)
        worst = max(abs(self.expand(self.compress(float(x))) - float(x)) for x in xs)
        if worst > INVERSE_TOL * supp.width:
            raise ValueError(f"expander fails to invert the compressor (err {worst!r})")

    @property
    def support(self):
        return self.point_density.support

    def compress(self, x: float) -> float:
        return self.point_density.cdf(x)

    def expand(self, u: float) -> float:
        return self.point_density.quantile(u)

    def build(self, n: int) -> IntervalQuantizer:
        """N-level companding quantizer with expanded-midpoint codepoints."""
        n = int(n)
        if n < 1:
            raise ValueError(f"need at least one level, got {n}")
        bounds = np.array([self.expand(i / n) for i in range(n + 1)])
        if np.any(np.diff(bounds) <= 0):
            raise ValueError(f"companding boundaries collapse at {n} levels")
        points = np.array([self.expand((2 * i - 1) / (2 * n)) for i in range(1, n + 1)])
        return IntervalQuantizer(bounds, points)

    def midpoint_variant(self, n: int) -> IntervalQuantizer:
        """Same boundaries as build(n) but with cell-midpoint codepoints."""
        q = self.build(n)
        mids = 0.5 * (q.boundaries[:-1] + q.boundaries[1:])
        return IntervalQuantizer(q.boundaries, mids)

    def __repr__(self):
        return f"Compander({self.point_density!r})"


def bennett_functional(f: Density, g: Density, r: float) -> float:
    """Predicted scaled distortion limit: C(r) times the integral of f/g**r.

    Integration runs over the support of f, which must sit inside the
    support of g; the point density g must be bounded away from zero there.
    """
    r = validate_exponent(r)
    require_nested_supports(f, g)
    if g.ess_bounds()[0] <= 0.0:
        raise ValueError("point density must be bounded away from zero")
    lo, hi = f.support.lo, f.support.hi
    if isinstance(f, PiecewiseConstantDensity) and isinstance(g, PiecewiseConstantDensity):
        integral = sum((b - a) * hf / hg**r for a, b, hf, hg in merged_segments(f, g, lo, hi))
    else:
        breaks = sorted(set(f.interior_breakpoints()) | set(g.interior_breakpoints()))
        integral = integrate(
            lambda x: f.pdf(x) / g.pdf(x) ** r, lo, hi, breakpoints=breaks
        )
    return distortion_constant(r) * float(integral)


def entropy_offset(f: Density, g: Density, alpha) -> float:
    """Limit of (output entropy - log N) for companding quantizers.

    Equals minus the order-alpha divergence of the source f from the point
    density g.
    """
    return -relative_entropy(f, g, alpha)


def compressed_density(f: Density, g: Density, *, table_cells: int = 256) -> Density:
    """Distribution of the compressed variable G(X) with X drawn from f.

    For piecewise inputs the result is piecewise-constant with heights f/g
    mapped through the compressor; otherwise a quadrature-backed density on
    [G(lo_f), G(hi_f)] is returned.
    """
    require_nested_supports(f, g)
    if g.ess_bounds()[0] <= 0.0:
        raise ValueError("point density must be bounded away from zero")
    lo, hi = f.support.lo, f.support.hi
    if isinstance(f, PiecewiseConstantDensity) and isinstance(g, PiecewiseConstantDensity):
        heights = []
        widths = []
        for a, b, hf, hg in merged_segments(f, g, lo, hi):
            heights.append(hf / hg)
            widths.append((b - a) * hg)
        edges = np.concatenate(([g.cdf(lo)], g.cdf(lo) + np.cumsum(widths)))
        return PiecewiseConstantDensity(edges, heights)

    y_lo, y_hi = g.cdf(lo), g.cdf(hi)

    def pdf(y):
        x = g.quantile(y)
        return f.pdf(x) / g.pdf(x)

    # essential bounds of f/g are cheap to locate in x-space
    xs = np.linspace(lo, hi, 2048)
    vals = np.array([f.pdf(float(x)) / g.pdf(float(x)) for x in xs])
    ratio = lambda x: f.pdf(x) / g.pdf(x)
    i_min, i_max = int(vals.argmin()), int(vals.argmax())
    _, r_min = golden_extremum(ratio, float(xs[max(i_min - 1, 0)]), float(xs[min(i_min + 1, len(xs) - 1)]), False)
    _, r_max = golden_extremum(ratio, float(xs[max(i_max - 1, 0)]), float(xs[min(i_max + 1, len(xs) - 1)]), True)
    breaks = sorted(
        g.cdf(x)
        for x in set(f.interior_breakpoints()) | set(g.interior_breakpoints())
        if lo < x < hi
    )
    return SmoothDensity(
        pdf,
        y_lo,
        y_hi,
        breakpoints=breaks,
        rel_tol=1e-9,
        ess_inf=min(r_min, float(vals.min())),
        ess_sup=max(r_max, float(vals.max())),
        table_cells=table_cells,
    )
