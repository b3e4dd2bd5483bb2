"""Exhaustive small-instance optimum over grid-aligned quantizers.

The search space is every partition of a fixed candidate boundary grid into
at most ``max_cells`` contiguous cells, each cell carrying its exactly
optimal codepoint.  Instances are deliberately tiny (grid of at most 32
points, at most 8 cells) so the enumeration stays exact and fast; per-cell
masses and distortions are cached and shared across entropy orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .core import RenyiOrder, as_order, branch_of, validate_exponent
from .densities import Interval, PiecewiseConstantDensity, density_from_spec, density_to_spec
from .quantizer import IntervalQuantizer, cell_distortion, optimal_codepoint

__all__ = [
    "GridInstance",
    "OracleResult",
    "MonotonicityError",
    "brute_force_optimal",
    "alpha_profile",
    "empirical_limit_probe",
    "instance_from_spec",
    "instance_to_spec",
]

MAX_GRID_POINTS = 32
MAX_CELLS = 8
FEASIBILITY_SLACK = 1e-12


class MonotonicityError(RuntimeError):
    """A profile that is provably monotone came out non-monotone."""


@dataclass(frozen=True)
class OracleResult:
    value: float
    argmin: IntervalQuantizer
    feasible_count: int


class GridInstance:
    """A piecewise density with a candidate boundary grid.

    The grid must span the support exactly and contain every density
    breakpoint, so each grid segment has constant height and all cell masses
    are exact.
    """

    def __init__(self, density: PiecewiseConstantDensity, grid: Sequence[float], max_cells: int):
        if not isinstance(density, PiecewiseConstantDensity):
            raise ValueError("the exhaustive search needs a piecewise-constant density")
        g = np.ascontiguousarray(grid, dtype=float)
        if g.ndim != 1 or len(g) < 2:
            raise ValueError("grid must hold at least two points")
        if len(g) > MAX_GRID_POINTS:
            raise ValueError(f"grid may hold at most {MAX_GRID_POINTS} points, got {len(g)}")
        if np.any(np.diff(g) <= 0):
            raise ValueError("grid must be strictly increasing")
        supp = density.support
        tol = 1e-12 * max(supp.width, 1.0)
        if abs(g[0] - supp.lo) > tol or abs(g[-1] - supp.hi) > tol:
            raise ValueError("grid must span the density support exactly")
        for x in density.interior_breakpoints():
            if np.abs(g - x).min() > tol:
                raise ValueError(f"density breakpoint {x!r} is missing from the grid")
        max_cells = int(max_cells)
        if not 1 <= max_cells <= MAX_CELLS:
            raise ValueError(f"max_cells must lie in [1, {MAX_CELLS}], got {max_cells}")
        if max_cells > len(g) - 1:
            raise ValueError("max_cells exceeds the number of grid segments")
        g.flags.writeable = False
        self.density = density
        self.grid = g
        self.max_cells = max_cells
        self._mass_prefix = np.array([density.cdf(float(x)) for x in g])
        self._partitions = None
        self._mass_matrix = None
        self._per_r = {}

    def partitions(self):
        """All boundary-index tuples, fewest cells first, cuts lexicographic."""
        if self._partitions is None:
            last = len(self.grid) - 1
            out = []
            for k in range(1, self.max_cells + 1):
                for cuts in combinations(range(1, last), k - 1):
                    out.append((0, *cuts, last))
            self._partitions = out
        return self._partitions

    def mass_matrix(self) -> np.ndarray:
        """Cell masses per partition, zero-padded to max_cells columns."""
        if self._mass_matrix is None:
            parts = self.partitions()
            m = np.zeros((len(parts), self.max_cells))
            pref = self._mass_prefix
            for row, idx in enumerate(parts):
                ix = np.asarray(idx)
                m[row, : len(idx) - 1] = pref[ix[1:]] - pref[ix[:-1]]
            m.flags.writeable = False
            self._mass_matrix = m
        return self._mass_matrix

    def cell_table(self, r: float):
        """Optimal codepoint and distortion for every contiguous cell."""
        r = validate_exponent(r)
        if r not in self._per_r:
            pts = {}
            dists = {}
            g = self.grid
            for i in range(len(g) - 1):
                for j in range(i + 1, len(g)):
                    c = optimal_codepoint(Interval(float(g[i]), float(g[j])), self.density, r)
                    pts[(i, j)] = c
                    dists[(i, j)] = cell_distortion(self.density, float(g[i]), float(g[j]), c, r)
            parts = self.partitions()
            vec = np.empty(len(parts))
            for row, idx in enumerate(parts):
                vec[row] = sum(dists[(a, b)] for a, b in zip(idx[:-1], idx[1:]))
            vec.flags.writeable = False
            self._per_r[r] = (pts, vec)
        return self._per_r[r]


def _entropies(masses: np.ndarray, alpha: RenyiOrder) -> np.ndarray:
    branch = branch_of(alpha)
    if branch == "pos_inf":
        return -np.log(masses.max(axis=1))
    if branch == "neg_inf":
        return -np.log(np.where(masses > 0.0, masses, np.inf).min(axis=1))
    if branch == "shannon":
        safe = np.where(masses > 0.0, masses, 1.0)
        return -(safe * np.log(safe)).sum(axis=1)
    v = alpha.value
    if v == 0.0:
        return np.log((masses > 0.0).sum(axis=1))
    powered = np.zeros_like(masses)
    np.power(masses, v, out=powered, where=masses > 0.0)
    return np.log(powered.sum(axis=1)) / (1.0 - v)


def brute_force_optimal(inst: GridInstance, alpha, rate: float, r: float) -> OracleResult:
    """Exact minimum distortion over the instance's partition class.

    Feasibility is entropy <= rate + a strict slack; ties resolve to the
    partition with the fewest cells and then the lexicographically smallest
    cut vector, which is the enumeration order.
    """
    a = as_order(alpha)
    rate = float(rate)
    if rate < 0.0:
        raise ValueError(f"the feasible set is empty for negative rate {rate!r}")
    ent = _entropies(inst.mass_matrix(), a)
    feasible = ent <= rate + FEASIBILITY_SLACK
    count = int(feasible.sum())
    if count == 0:
        raise ValueError("no partition satisfies the entropy budget")
    pts, dist = inst.cell_table(r)
    best_value = float(dist[feasible].min())
    idx = int(np.flatnonzero(feasible & (dist == best_value))[0])
    part = inst.partitions()[idx]
    bounds = inst.grid[list(part)]
    points = [pts[(i, j)] for i, j in zip(part[:-1], part[1:])]
    return OracleResult(best_value, IntervalQuantizer(bounds, np.asarray(points)), count)


def alpha_profile(inst: GridInstance, alphas, rate: float, r: float):
    """Oracle values across a nondecreasing grid of orders.

    The feasible sets grow with the order, so the values must come out
    nonincreasing; any increase is an implementation fault and raises.
    """
    orders = [as_order(a) for a in alphas]
    if any(b < a for a, b in zip(orders[:-1], orders[1:])):
        raise ValueError("orders must be nondecreasing")
    results = [brute_force_optimal(inst, a, rate, r) for a in orders]
    values = [res.value for res in results]
    for (a0, v0), (a1, v1) in zip(zip(orders[:-1], values[:-1]), zip(orders[1:], values[1:])):
        if v1 > v0:
            raise MonotonicityError(
                f"oracle value rose from {v0!r} at order {a0.value} to {v1!r} at order {a1.value}"
            )
    return results


def empirical_limit_probe(inst: GridInstance, alpha, r: float, rates) -> list:
    """Scaled oracle values e**(r * rate) * value along a rate schedule."""
    r = validate_exponent(r)
    return [math.exp(r * float(R)) * brute_force_optimal(inst, alpha, R, r).value for R in rates]


def instance_from_spec(spec: dict) -> GridInstance:
    """Build an instance from JSON: density spec, grid, max_cells."""
    if not isinstance(spec, dict):
        raise ValueError("instance spec must be an object")
    try:
        density = density_from_spec(spec["density"])
        grid = spec["grid"]
        max_cells = spec["max_cells"]
    except KeyError as exc:
        raise ValueError(f"instance spec is missing field {exc}") from None
    if not isinstance(density, PiecewiseConstantDensity):
        raise ValueError("instance density must be uniform or piecewise")
    return GridInstance(density, grid, max_cells)


def instance_to_spec(inst: GridInstance) -> dict:
    return {
        "density": density_to_spec(inst.density),
        "grid": [float(x) for x in inst.grid],
        "max_cells": inst.max_cells,
    }
