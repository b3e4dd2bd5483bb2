import math

import numpy as np
import pytest

from renyiquant import (
    GridInstance,
    NEG_INF,
    POS_INF,
    PiecewiseConstantDensity,
    RenyiOrder,
    alpha_profile,
    brute_force_optimal,
    empirical_limit_probe,
    instance_from_spec,
    instance_to_spec,
    quantizer_entropy,
    uniform,
)

PROFILE_ORDERS = (NEG_INF, RenyiOrder(-2.0), RenyiOrder(-1.0), RenyiOrder(0.0),
                  RenyiOrder(0.5), RenyiOrder(1.0), RenyiOrder(2.0), POS_INF)

# First-run regression baselines for the two fixed 24-point instances and the
# 17-point two-mass instance; any drift beyond rounding noise is a bug.
INSTANCE_ONE_BASELINE = [
    (0.0092114325068870517, 19),
    (0.0079021559788453322, 64),
    (0.0079021559788453322, 110),
    (0.0048796331079388935, 1562),
    (0.0048796331079388935, 4228),
    (0.0045492558405781543, 12045),
    (0.0033853887159672295, 20218),
    (0.0022852491860756319, 27639),
]
INSTANCE_TWO_BASELINE = [
    (0.0092592592592592605, 19),
    (0.0092592592592592605, 70),
    (0.0092592592592592605, 109),
    (0.0049202439596528263, 1351),
    (0.0049202439596528263, 2454),
    (0.0049202439596528263, 7183),
    (0.0044257469069499131, 13751),
    (0.0024565381708238844, 21172),
]
GRID17_ORDERS = (NEG_INF, RenyiOrder(-2.0), RenyiOrder(0.0), RenyiOrder(0.5),
                 RenyiOrder(2.0))
GRID17_BASELINE = [
    (0.02109966856060606, 5),
    (0.020833333333333332, 8),
    (0.0080682663690476199, 121),
    (0.0080682663690476199, 204),
    (0.0055257161458333332, 1015),
]


def instance_one(two_mass):
    grid = np.unique(np.concatenate((np.linspace(0.0, 1.0, 23), [0.5])))
    return GridInstance(two_mass, grid, 6)


def instance_two():
    f = PiecewiseConstantDensity([0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0], [0.8, 1.4, 0.8])
    grid = np.unique(np.concatenate((np.linspace(0.0, 1.0, 22),
                                     [1.0 / 3.0, 2.0 / 3.0])))
    return GridInstance(f, grid, 6)


def test_instance_validation(two_mass):
    with pytest.raises(ValueError):
        GridInstance(two_mass, np.linspace(0.0, 1.0, 33), 4)   # grid too large
    with pytest.raises(ValueError):
        GridInstance(two_mass, np.linspace(0.0, 1.0, 9), 9)    # too many cells
    with pytest.raises(ValueError):
        GridInstance(two_mass, np.linspace(0.0, 0.9, 9), 4)    # misses support
    with pytest.raises(ValueError):
        GridInstance(two_mass, np.linspace(0.0, 1.0, 8), 4)    # misses 0.5


def test_uniform_two_cell_optimum():
    inst = GridInstance(uniform(0.0, 1.0), np.linspace(0.0, 1.0, 9), 4)
    res = brute_force_optimal(inst, RenyiOrder(0.0), math.log(2.0), 2.0)
    assert res.value == pytest.approx(1.0 / 48.0, rel=1e-14)
    assert np.allclose(res.argmin.boundaries, [0.0, 0.5, 1.0])
    same = brute_force_optimal(inst, RenyiOrder(-2.0), math.log(2.0), 2.0)
    assert same.value == pytest.approx(res.value, rel=1e-14)


def test_zero_rate_gives_one_cell():
    inst = GridInstance(uniform(0.0, 1.0), np.linspace(0.0, 1.0, 9), 4)
    res = brute_force_optimal(inst, RenyiOrder(0.5), 0.0, 2.0)
    assert len(res.argmin.codepoints) == 1
    assert res.value == pytest.approx(1.0 / 12.0, rel=1e-14)


def test_negative_rate_is_rejected():
    inst = GridInstance(uniform(0.0, 1.0), np.linspace(0.0, 1.0, 9), 4)
    with pytest.raises(ValueError, match="empty"):
        brute_force_optimal(inst, RenyiOrder(0.5), -0.5, 2.0)


def test_argmin_is_feasible(two_mass):
    inst = instance_one(two_mass)
    for alpha in (RenyiOrder(0.5), RenyiOrder(2.0), NEG_INF):
        res = brute_force_optimal(inst, alpha, math.log(3.0), 2.0)
        h = quantizer_entropy(res.argmin, two_mass, alpha)
        assert h <= math.log(3.0) + 1e-12


def test_values_nonincreasing_in_rate(two_mass):
    inst = instance_one(two_mass)
    rates = [0.0, math.log(2.0), math.log(3.0), math.log(4.0)]
    vals = [brute_force_optimal(inst, RenyiOrder(0.5), R, 2.0).value
            for R in rates]
    assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))


def test_profile_regression_instance_one(two_mass):
    results = alpha_profile(instance_one(two_mass), PROFILE_ORDERS,
                            math.log(4.0), 2.0)
    for res, (value, count) in zip(results, INSTANCE_ONE_BASELINE):
        assert res.value == pytest.approx(value, rel=1e-12)
        assert res.feasible_count == count


def test_profile_regression_instance_two():
    results = alpha_profile(instance_two(), PROFILE_ORDERS, math.log(4.0), 2.0)
    for res, (value, count) in zip(results, INSTANCE_TWO_BASELINE):
        assert res.value == pytest.approx(value, rel=1e-12)
        assert res.feasible_count == count


def test_profile_regression_grid17(two_mass):
    inst = GridInstance(two_mass, np.linspace(0.0, 1.0, 17), 5)
    results = alpha_profile(inst, GRID17_ORDERS, math.log(3.0), 2.0)
    for res, (value, count) in zip(results, GRID17_BASELINE):
        assert res.value == pytest.approx(value, rel=1e-12)
        assert res.feasible_count == count
    assert np.allclose(results[2].argmin.boundaries, [0.0, 0.375, 0.75, 1.0])


def test_top_order_never_beats_order_two(two_mass):
    inst = instance_one(two_mass)
    v2 = brute_force_optimal(inst, RenyiOrder(2.0), math.log(4.0), 2.0).value
    vtop = brute_force_optimal(inst, POS_INF, math.log(4.0), 2.0).value
    assert vtop <= v2 + 1e-15


def test_profile_requires_sorted_orders(two_mass):
    inst = GridInstance(two_mass, np.linspace(0.0, 1.0, 17), 4)
    with pytest.raises(ValueError):
        alpha_profile(inst, (RenyiOrder(2.0), RenyiOrder(0.0)), math.log(2.0), 2.0)


def test_grid_refinement_never_hurts(two_mass):
    coarse = GridInstance(two_mass, np.linspace(0.0, 1.0, 13), 4)
    fine = GridInstance(two_mass, np.linspace(0.0, 1.0, 25), 4)
    for alpha in (RenyiOrder(0.5), RenyiOrder(0.0)):
        v_coarse = brute_force_optimal(coarse, alpha, math.log(3.0), 2.0).value
        v_fine = brute_force_optimal(fine, alpha, math.log(3.0), 2.0).value
        assert v_fine <= v_coarse + 1e-15


def test_probe_is_constant_on_uniform_sources():
    inst = GridInstance(uniform(0.0, 1.0), np.linspace(0.0, 1.0, 13), 4)
    rates = [math.log(n) for n in (1, 2, 3, 4)]
    probe = empirical_limit_probe(inst, RenyiOrder(0.0), 2.0, rates)
    assert np.allclose(probe, 1.0 / 12.0, rtol=1e-12)


def test_probe_stays_near_the_prediction(two_mass):
    from renyiquant import predicted_limit

    inst = instance_one(two_mass)
    pred = predicted_limit(two_mass, RenyiOrder(0.5), 2.0).value
    probe = empirical_limit_probe(inst, RenyiOrder(0.5), 2.0, [math.log(4.0)])[0]
    assert 0.5 * pred <= probe <= 2.0 * pred


def test_instance_spec_round_trip(two_mass):
    inst = instance_one(two_mass)
    copy = instance_from_spec(instance_to_spec(inst))
    assert copy.max_cells == inst.max_cells
    assert np.allclose(copy.grid, inst.grid)
    a = brute_force_optimal(inst, RenyiOrder(0.5), math.log(2.0), 2.0)
    b = brute_force_optimal(copy, RenyiOrder(0.5), math.log(2.0), 2.0)
    assert a.value == b.value
