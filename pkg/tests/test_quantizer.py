import math

import numpy as np
import pytest

from renyiquant import (
    Interval,
    IntervalQuantizer,
    NEG_INF,
    POS_INF,
    RenyiOrder,
    SmoothDensity,
    cell_distortion,
    cell_masses,
    distortion,
    improve_codepoints,
    optimal_codepoint,
    quantizer_entropy,
    transform_quantizer,
    uniform,
    uniform_quantizer,
)


def test_quantizer_validation():
    with pytest.raises(ValueError):
        IntervalQuantizer([0.0, 0.5, 0.5, 1.0], [0.25, 0.5, 0.75])
    with pytest.raises(ValueError):
        IntervalQuantizer([0.0, 0.5, 1.0], [0.25, 0.4])  # codepoint outside cell
    q = IntervalQuantizer([0.0, 0.5, 1.0], [0.25, 0.5 - 1e-10])
    assert q.codepoints[1] == 0.5  # snapped onto the cell


def test_quantize_maps_to_cell_indices():
    q = uniform_quantizer(Interval(0.0, 1.0), 4)
    assert q.quantize(0.0) == 0          # first cell is closed on the left
    assert q.quantize(0.25) == 0         # boundaries belong to the lower cell
    assert q.quantize(0.26) == 1
    assert q.quantize(1.0) == 3
    with pytest.raises(ValueError):
        q.quantize(1.5)


def test_uniform_quantizer_figures():
    q = uniform_quantizer(Interval(0.0, 1.0), 4)
    u = uniform(0.0, 1.0)
    assert np.allclose(cell_masses(q, u), 0.25)
    assert quantizer_entropy(q, u, RenyiOrder(0.5)) == pytest.approx(
        math.log(4.0), abs=1e-14)
    assert distortion(q, u, 2.0) == pytest.approx(0.005208333333333333, rel=1e-14)


def test_cell_masses_keep_exact_zeros():
    q = uniform_quantizer(Interval(0.0, 1.0), 4)
    narrow = uniform(0.0, 0.5)
    masses = cell_masses(q, narrow)
    assert masses[2] == 0.0 and masses[3] == 0.0
    assert masses[0] == pytest.approx(0.5, abs=1e-15)


def test_distortion_closed_form_matches_quadrature(two_mass):
    q = IntervalQuantizer([0.0, 0.3, 0.8, 1.0], [0.2, 0.6, 0.9])
    smooth = SmoothDensity(two_mass.pdf, 0.0, 1.0, breakpoints=[0.5])
    for r in (1.0, 2.0, 3.0):
        assert distortion(q, two_mass, r) == pytest.approx(
            distortion(q, smooth, r), rel=1e-9)


def test_cell_distortions_sum_to_total(two_mass):
    q = IntervalQuantizer([0.0, 0.3, 0.8, 1.0], [0.2, 0.6, 0.9])
    total = sum(
        cell_distortion(two_mass, lo, hi, c, 2.0)
        for lo, hi, c in zip(q.boundaries, q.boundaries[1:], q.codepoints))
    assert distortion(q, two_mass, 2.0) == pytest.approx(total, rel=1e-14)


def test_optimal_codepoint_is_conditional_mean(two_mass):
    assert optimal_codepoint(Interval(0.0, 1.0), two_mass, 2.0) == pytest.approx(
        0.625, abs=1e-12)
    assert optimal_codepoint(Interval(0.2, 0.4), uniform(0.0, 1.0), 2.0) == (
        pytest.approx(0.3, abs=1e-12))


def test_optimal_codepoint_is_median_for_r_one(two_mass):
    assert optimal_codepoint(Interval(0.0, 1.0), two_mass, 1.0) == pytest.approx(
        2.0 / 3.0, abs=1e-12)


def test_optimal_codepoint_rejects_empty_cell():
    with pytest.raises(ValueError):
        optimal_codepoint(Interval(0.6, 0.9), uniform(0.0, 0.5), 2.0)


def test_improve_codepoints_never_hurts():
    rng = np.random.default_rng(3)
    for _ in range(100):
        k = int(rng.integers(1, 5))
        widths = rng.uniform(0.1, 1.0, size=k)
        bps = np.concatenate(([0.0], np.cumsum(widths)))
        masses = rng.dirichlet(np.ones(k))
        from renyiquant import PiecewiseConstantDensity

        d = PiecewiseConstantDensity(bps, masses / widths)
        cuts = np.sort(rng.uniform(bps[0], bps[-1], size=int(rng.integers(1, 5))))
        bounds = np.concatenate(([bps[0]], cuts, [bps[-1]]))
        q = IntervalQuantizer(bounds, (bounds[:-1] + bounds[1:]) / 2.0)
        r = float(rng.choice([1.0, 2.0, 3.0]))
        better = improve_codepoints(q, d, r)
        assert distortion(better, d, r) <= distortion(q, d, r) + 1e-15


def test_improve_codepoints_keeps_empty_cells():
    q = uniform_quantizer(Interval(0.0, 1.0), 4)
    better = improve_codepoints(q, uniform(0.0, 0.5), 2.0)
    assert better.codepoints[3] == q.codepoints[3]
    assert better.codepoints[0] == pytest.approx(0.125, abs=1e-12)


def test_transform_quantizer(two_mass):
    q = uniform_quantizer(Interval(0.0, 1.0), 3)
    moved = transform_quantizer(q, 0.5, -1.0)
    assert np.allclose(moved.boundaries, 0.5 * np.asarray(q.boundaries) - 1.0)
    with pytest.raises(ValueError):
        transform_quantizer(q, -1.0, 0.0)
    ft = two_mass.similarity_transform(0.5, -1.0)
    assert distortion(moved, ft, 2.0) == pytest.approx(
        0.25 * distortion(q, two_mass, 2.0), rel=1e-12)
    for alpha in (NEG_INF, RenyiOrder(0.5), POS_INF):
        assert quantizer_entropy(moved, ft, alpha) == pytest.approx(
            quantizer_entropy(q, two_mass, alpha), abs=1e-13)


def test_quantizer_json_round_trip():
    q = IntervalQuantizer([0.0, 0.3, 1.0], [0.1, 0.7])
    copy = IntervalQuantizer.from_json(q.to_json())
    assert np.array_equal(copy.boundaries, q.boundaries)
    assert np.array_equal(copy.codepoints, q.codepoints)


def test_quantizer_must_cover_the_support():
    q = uniform_quantizer(Interval(0.0, 0.5), 2)
    with pytest.raises(ValueError):
        cell_masses(q, uniform(0.0, 1.0))
