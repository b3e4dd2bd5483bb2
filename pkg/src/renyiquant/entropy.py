"""Entropy of discrete mass vectors and of densities.

All logarithms are natural.  Zero masses never contribute: the conventions
0 * log 0 = 0 and 0**0 = 0 are applied throughout, so the order-0 value is
the log of the number of positive entries.
"""

from __future__ import annotations

import math

import numpy as np

from ._quadrature import golden_extremum, integrate
from .core import as_order, branch_of
from .densities import (
    Density,
    PiecewiseConstantDensity,
    merged_segments,
    require_nested_supports,
)

__all__ = ["renyi_entropy", "differential_entropy", "relative_entropy"]

WEIGHT_TOL = 1e-9


def _clean_weights(weights) -> np.ndarray:
    w = np.ascontiguousarray(weights, dtype=float)
    if w.ndim != 1 or len(w) == 0:
        raise ValueError("weights must be a nonempty 1-d vector")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    if np.any(w < -WEIGHT_TOL):
        raise ValueError("weights must be nonnegative")
    total = float(w.sum())
    if abs(total - 1.0) > WEIGHT_TOL:
        raise ValueError(f"weights must sum to 1, got {total!r}")
    pos = w[w > 0.0]
    if len(pos) == 0:
        raise ValueError("weights must contain a positive entry")
    return pos


def renyi_entropy(weights, alpha) -> float:
    """Entropy of order alpha of a probability vector.

    Branches: finite alpha != 1 uses log(sum p_i**alpha) / (1 - alpha);
    alpha = 1 is the Shannon value; alpha = +inf is -log(max p_i); and
    alpha = -inf is -log(min positive p_i).  Orders within the exclusion
    window around 1 (other than exactly 1) are rejected.
    """
    pos = _clean_weights(weights)
    a = as_order(alpha)
    branch = branch_of(a)
    if branch == "pos_inf":
        return -math.log(float(pos.max()))
    if branch == "neg_inf":
        return -math.log(float(pos.min()))
    if branch == "shannon":
        return float(-(pos * np.log(pos)).sum())
    v = a.value
    return math.log(float((pos**v).sum())) / (1.0 - v)


def differential_entropy(d: Density, alpha) -> float:
    """Differential entropy of order alpha of a density.

    Finite alpha != 1: log(integral of pdf**alpha) / (1 - alpha).
    alpha = 1: minus the log-moment integral.  alpha = +inf / -inf: minus the
    log of the essential supremum / infimum over the support.
    """
    a = as_order(alpha)
    branch = branch_of(a)
    if branch == "pos_inf":
        return -math.log(d.ess_bounds()[1])
    if branch == "neg_inf":
        lo = d.ess_bounds()[0]
        if lo <= 0.0:
            raise ValueError("order -inf requires a density bounded away from zero")
        return -math.log(lo)
    if branch == "shannon":
        return -d.log_integral()
    v = a.value
    integral = d.power_integral(v)
    if not math.isfinite(integral) or integral <= 0.0:
        raise ValueError(f"power integral of order {v} is not positive and finite")
    return math.log(integral) / (1.0 - v)


def _ratio_extremum(f: Density, g: Density, maximize: bool) -> float:
    lo, hi = f.support.lo, f.support.hi
    if isinstance(f, PiecewiseConstantDensity) and isinstance(g, PiecewiseConstantDensity):
        ratios = [hf / hg for _, _, hf, hg in merged_segments(f, g, lo, hi)]
        return max(ratios) if maximize else min(ratios)
    xs = np.linspace(lo, hi, 4096)
    ratio = lambda x: f.pdf(x) / g.pdf(x)
    vals = np.array([ratio(float(x)) for x in xs])
    i = int(vals.argmax() if maximize else vals.argmin())
    a, b = float(xs[max(i - 1, 0)]), float(xs[min(i + 1, len(xs) - 1)])
    _, v = golden_extremum(ratio, a, b, maximize)
    return max(v, float(vals[i])) if maximize else min(v, float(vals[i]))


def relative_entropy(f: Density, g: Density, alpha) -> float:
    """Divergence of order alpha of f from g.

    Finite alpha != 1: log(integral of f**alpha * g**(1-alpha)) / (alpha - 1),
    over the support of f.  alpha = 1 is the usual log-ratio integral;
    alpha = +inf / -inf take the essential sup / inf of f/g.  The support of
    f must be contained in the support of g.
    """
    require_nested_supports(f, g)
    a = as_order(alpha)
    branch = branch_of(a)
    if branch == "pos_inf":
        return math.log(_ratio_extremum(f, g, maximize=True))
    if branch == "neg_inf":
        return math.log(_ratio_extremum(f, g, maximize=False))

    lo, hi = f.support.lo, f.support.hi
    exact = isinstance(f, PiecewiseConstantDensity) and isinstance(g, PiecewiseConstantDensity)
    if branch == "shannon":
        if exact:
            val = sum(
                (b - s) * hf * math.log(hf / hg) for s, b, hf, hg in merged_segments(f, g, lo, hi)
            )
        else:
            def integrand(x):
                vf = f.pdf(x)
                return vf * math.log(vf / g.pdf(x)) if vf > 0.0 else 0.0

            breaks = sorted(set(f.interior_breakpoints()) | set(g.interior_breakpoints()))
            val = integrate(integrand, lo, hi, breakpoints=breaks)
        return float(val)

    v = a.value
    if exact:
        integral = sum(
            (b - s) * hf**v * hg ** (1.0 - v) for s, b, hf, hg in merged_segments(f, g, lo, hi)
        )
    else:
        def integrand(x):
            vf = f.pdf(x)
            return vf**v * g.pdf(x) ** (1.0 - v) if vf > 0.0 else 0.0

        breaks = sorted(set(f.interior_breakpoints()) | set(g.interior_breakpoints()))
        integral = integrate(integrand, lo, hi, breakpoints=breaks)
    if not math.isfinite(integral) or integral <= 0.0:
        raise ValueError(f"divergence integral of order {v} diverges or vanishes")
    return math.log(integral) / (v - 1.0)
