"""Cost-model unit tests: unit energy cost, helper utility, payment windows."""

import dataclasses

import pytest

from coopshare.economics import (
    EconParams,
    breakdown_for_split,
    helper_utility,
    payment_window,
    unit_energy_cost,
)

ECON = EconParams(
    battery_capacity=100.0,
    max_unit_cost=1.0,
    reservation_utility=0.2,
    mode_threshold=1.0,
)


def test_unit_cost_full_battery():
    assert unit_energy_cost(100.0, ECON) == 0.0


def test_unit_cost_empty_battery():
    assert unit_energy_cost(0.0, ECON) == 1.0


def test_unit_cost_direct_evaluation():
    assert unit_energy_cost(10.0, ECON) == pytest.approx(0.9)


def test_unit_cost_rejects_out_of_range_battery():
    with pytest.raises(ValueError):
        unit_energy_cost(-1.0, ECON)
    with pytest.raises(ValueError):
        unit_energy_cost(100.0001, ECON)


def test_unit_cost_affine_identity():
    # zeta(b1) + zeta(b2) == 2 * zeta((b1 + b2) / 2), exactly.
    for b1, b2 in ((0.0, 100.0), (10.0, 30.0), (42.5, 87.5)):
        lhs = unit_energy_cost(b1, ECON) + unit_energy_cost(b2, ECON)
        rhs = 2.0 * unit_energy_cost((b1 + b2) / 2.0, ECON)
        assert lhs == rhs


def test_unit_cost_strictly_decreasing():
    costs = [unit_energy_cost(b, ECON) for b in (0.0, 25.0, 50.0, 75.0, 100.0)]
    assert all(a > b for a, b in zip(costs, costs[1:]))


def test_helper_utility_boundary_accepts():
    # Binary-exact arithmetic so the boundary case is a true equality.
    r = helper_utility(0.5 * 2.0 + 0.25, 0.5, 2.0, 0.25)
    assert r.accept
    assert r.utility == pytest.approx(0.25)


def test_helper_utility_rejection_is_zero():
    r = helper_utility(0.0, 1.0, 1.0, 0.2)
    assert not r.accept
    assert r.utility == 0.0


def test_helper_utility_direct_evaluation():
    r = helper_utility(1.5, 0.5, 2.0, 0.2)
    assert r.accept
    assert r.utility == pytest.approx(0.5)


def test_helper_utility_never_lands_inside_the_gap():
    # Utility is either 0 (reject) or >= the reservation level, never between.
    eps = 0.2
    payments = [k * 0.01 for k in range(0, 200)]
    for payment in payments:
        r = helper_utility(payment, 0.7, 1.3, eps)
        assert r.utility == 0.0 or r.utility >= eps


def test_payment_window_direct_evaluation():
    cb = breakdown_for_split(1.0, 10.0, 4.0, 2.0, 0.2)
    # Pin the weighted energies of the example directly: zi*E_ds = 10, zi*E_cs = 2.
    cb = dataclasses.replace(cb, direct_energy=10.0, share_energy=2.0)
    window = payment_window(cb)
    assert window.low == pytest.approx(0.2)
    assert window.high == pytest.approx(8.0)
    assert window.feasible


def test_payment_window_infeasible_when_direct_cost_below_reservation():
    cb = breakdown_for_split(1.0, 0.1, 4.0, 4.0, 0.2)
    assert not payment_window(cb).feasible


def test_payment_window_degenerate_point():
    cb = breakdown_for_split(1.0, 5.0, 4.0, 4.0, 0.0)
    cb = dataclasses.replace(cb, share_energy=5.0)
    window = payment_window(cb)
    assert window.low == 0.0
    assert window.high == 0.0
    assert window.feasible
    assert window.width == 0.0


def test_breakdown_resplit_keeps_direct_leg():
    cb = breakdown_for_split(0.9, 19.9596, 6.0, 6.0, 0.2)
    moved = cb.resplit(3.0)
    assert moved.direct_energy == cb.direct_energy
    assert moved.relay_rate == 3.0
    assert moved.share_energy < cb.direct_energy


def test_breakdown_validates_rates():
    with pytest.raises(ValueError):
        breakdown_for_split(0.9, 10.0, 4.0, 5.0, 0.2)
    with pytest.raises(ValueError):
        breakdown_for_split(0.9, 10.0, 4.0, -0.1, 0.2)
