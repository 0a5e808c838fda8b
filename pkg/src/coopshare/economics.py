"""Battery-driven energy valuation, helper utility, and the cooperation payment window.

Payments are pure currency: they compensate helpers for spent energy but
never recharge a battery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

__all__ = [
    "Mode",
    "EconParams",
    "HelperResponse",
    "CostBreakdown",
    "PaymentWindow",
    "unit_energy_cost",
    "helper_utility",
    "breakdown_for_split",
    "payment_window",
]


class Mode(str, Enum):
    """Transmission mode of a source terminal in one slot."""

    DT = "DT"
    CT = "CT"


@dataclass(frozen=True)
class EconParams:
    """Economic constants shared by every terminal in a scenario.

    battery_capacity
        Full battery level in joules.
    max_unit_cost
        Cost per joule at an empty battery; the valuation falls linearly
        to zero at a full battery.
    reservation_utility
        Minimum surplus a helper demands before relaying.
    mode_threshold
        Minimum cost reduction a source demands before cooperating.
    """

    battery_capacity: float
    max_unit_cost: float
    reservation_utility: float
    mode_threshold: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.battery_capacity) and self.battery_capacity > 0):
            raise ValueError(f"battery_capacity must be finite and > 0, got {self.battery_capacity!r}")
        if not (math.isfinite(self.max_unit_cost) and self.max_unit_cost > 0):
            raise ValueError(f"max_unit_cost must be finite and > 0, got {self.max_unit_cost!r}")
        if not (math.isfinite(self.reservation_utility) and self.reservation_utility >= 0):
            raise ValueError(f"reservation_utility must be finite and >= 0, got {self.reservation_utility!r}")
        if not (math.isfinite(self.mode_threshold) and self.mode_threshold >= 0):
            raise ValueError(f"mode_threshold must be finite and >= 0, got {self.mode_threshold!r}")


def unit_energy_cost(battery: float, params: EconParams) -> float:
    """Per-joule valuation of stored energy; max at empty, zero at full."""
    if not (0 <= battery <= params.battery_capacity):
        raise ValueError(
            f"battery must lie in [0, {params.battery_capacity}], got {battery!r}"
        )
    return params.max_unit_cost * (1.0 - battery / params.battery_capacity)


@dataclass(frozen=True)
class HelperResponse:
    """A helper's utility and participation decision for one offer."""

    utility: float
    accept: bool


def helper_utility(payment: float, unit_cost: float, relay_energy: float,
                   reservation: float) -> HelperResponse:
    """Evaluate one relay offer from the helper's side.

    The helper relays only when the payment covers its energy cost plus the
    reservation utility; a declined offer yields exactly zero.
    """
    surplus = payment - unit_cost * relay_energy
    if surplus >= reservation:
        return HelperResponse(surplus, True)
    return HelperResponse(0.0, False)


@dataclass(frozen=True)
class CostBreakdown:
    """Cost structure of one source terminal for a given rate split.

    ``direct_energy`` is the energy of sending the whole rate directly;
    ``share_energy`` is the energy of the source's own share once a relay
    carries ``relay_rate`` of the total.  Both are in joules and scale with
    the same noise-over-gain factor, so a breakdown can be re-split without
    touching the radio layer.
    """

    unit_cost: float
    direct_energy: float
    total_rate: float
    relay_rate: float
    share_energy: float
    reservation: float

    @property
    def direct_cost(self) -> float:
        return self.unit_cost * self.direct_energy

    @property
    def share_cost(self) -> float:
        return self.unit_cost * self.share_energy

    @property
    def window_low(self) -> float:
        return self.reservation

    @property
    def window_high(self) -> float:
        return self.unit_cost * (self.direct_energy - self.share_energy)

    @property
    def feasible(self) -> bool:
        return self.window_high >= self.window_low

    def resplit(self, relay_rate: float) -> "CostBreakdown":
        """Same source, different relay share."""
        return replace(
            self,
            relay_rate=relay_rate,
            share_energy=_share_energy(self.direct_energy, self.total_rate, relay_rate),
        )


def _share_energy(direct_energy: float, total_rate: float, relay_rate: float) -> float:
    if not 0 <= relay_rate <= total_rate:
        raise ValueError(f"relay_rate must lie in [0, {total_rate}], got {relay_rate!r}")
    if total_rate == 0:
        return 0.0
    source_rate = total_rate - relay_rate
    return direct_energy * (2.0 ** source_rate - 1.0) / (2.0 ** total_rate - 1.0)


def breakdown_for_split(unit_cost: float, direct_energy: float, total_rate: float,
                        relay_rate: float, reservation: float) -> CostBreakdown:
    """Build a CostBreakdown from the direct-transmission energy.

    The share energy for any split follows from the direct energy alone
    because both invert the same rate law over the same link.
    """
    if unit_cost < 0:
        raise ValueError(f"unit_cost must be >= 0, got {unit_cost!r}")
    if direct_energy < 0 or not math.isfinite(direct_energy):
        raise ValueError(f"direct_energy must be finite and >= 0, got {direct_energy!r}")
    if total_rate < 0:
        raise ValueError(f"total_rate must be >= 0, got {total_rate!r}")
    if reservation < 0:
        raise ValueError(f"reservation must be >= 0, got {reservation!r}")
    return CostBreakdown(
        unit_cost=unit_cost,
        direct_energy=direct_energy,
        total_rate=total_rate,
        relay_rate=relay_rate,
        share_energy=_share_energy(direct_energy, total_rate, relay_rate),
        reservation=reservation,
    )


@dataclass(frozen=True)
class PaymentWindow:
    """Admissible payment interval for one split; empty when high < low."""

    low: float
    high: float

    @property
    def feasible(self) -> bool:
        return self.high >= self.low

    @property
    def width(self) -> float:
        return max(0.0, self.high - self.low)


def payment_window(cb: CostBreakdown, reservation: float | None = None) -> PaymentWindow:
    """Payment interval where both sides gain from cooperation.

    Low end is the helper's reservation utility, high end is the source's
    direct cost minus the cost of its own remaining share.
    """
    low = cb.reservation if reservation is None else reservation
    return PaymentWindow(low=low, high=cb.window_high)
