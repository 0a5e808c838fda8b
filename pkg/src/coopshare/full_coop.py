"""Complete-information benchmark: closed-form rate split, relay selection, mode choice.

With every unit cost and fading realization known to the source, the best
relay rate for a source/helper pair has a closed form with a threshold
structure: the helper carries nothing when it is far more expensive than the
source, everything in the opposite extreme, and a logarithmic interior split
in between.  The source then picks the cheapest pair and cooperates only if
the saving over direct transmission clears the mode threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .channel import energy_for_rate
from .economics import Mode

__all__ = [
    "Endpoint",
    "SplitDecision",
    "BenchmarkOutcome",
    "optimal_relay_rate",
    "pair_cost",
    "select_relay",
    "choose_mode_complete",
    "benchmark_decision",
]


@dataclass(frozen=True)
class Endpoint:
    """Cost-relevant state of one terminal: energy valuation and fading power."""

    unit_cost: float
    fading: float

    def __post_init__(self) -> None:
        if self.unit_cost < 0:
            raise ValueError(f"unit_cost must be >= 0, got {self.unit_cost!r}")
        if self.fading < 0:
            raise ValueError(f"fading must be >= 0, got {self.fading!r}")

    @property
    def effective_cost(self) -> float:
        """Unit cost weighted by channel quality; infinite on a faded-out link."""
        if self.fading == 0.0:
            return math.inf if self.unit_cost > 0 else 0.0
        return self.unit_cost / self.fading


def optimal_relay_rate(source_cost: float, helper_cost: float, total_rate: float) -> float:
    """Relay rate minimizing the pair's weighted energy cost.

    ``source_cost`` and ``helper_cost`` are the effective (fading-weighted)
    unit costs of the two terminals.  A zero-cost terminal absorbs the whole
    rate; when both are zero-cost any split is optimal and the midpoint is
    returned.
    """
    if total_rate < 0:
        raise ValueError(f"total_rate must be >= 0, got {total_rate!r}")
    if source_cost < 0 or helper_cost < 0:
        raise ValueError("effective costs must be >= 0")
    if source_cost == 0.0 and helper_cost == 0.0:
        return 0.5 * total_rate
    if source_cost == 0.0:
        return 0.0
    if helper_cost == 0.0 or math.isinf(source_cost):
        return total_rate
    if math.isinf(helper_cost):
        return 0.0
    ratio = math.log2(source_cost / helper_cost)
    if ratio < -total_rate:
        return 0.0
    if ratio >= total_rate:
        return total_rate
    return min(total_rate, max(0.0, 0.5 * (total_rate + ratio)))


@dataclass(frozen=True)
class SplitDecision:
    """Outcome of optimizing one source/helper pair."""

    relay_rate: float
    source_rate: float
    source_effective_cost: float
    helper_effective_cost: float
    source_energy: float
    relay_energy: float
    cost: float
    payment: float


def pair_cost(source: Endpoint, helper: Endpoint, total_rate: float, link_gain: float,
              noise_power: float, splittable: bool = True) -> SplitDecision:
    """Minimum cooperation cost of one pair, with or without rate splitting.

    Both terminals see the same large-scale gain toward the base station
    (they are within the short-range radius of each other), so only fading
    separates their links.  The helper is paid exactly its energy cost.
    """
    if source.fading * link_gain <= 0.0 or helper.fading * link_gain <= 0.0:
        raise ValueError("pair_cost requires live links on both legs")
    if splittable:
        relay_rate = optimal_relay_rate(source.effective_cost, helper.effective_cost, total_rate)
    else:
        relay_rate = total_rate
    source_rate = total_rate - relay_rate
    relay_energy = energy_for_rate(relay_rate, helper.fading * link_gain, noise_power) if relay_rate > 0 else 0.0
    source_energy = energy_for_rate(source_rate, source.fading * link_gain, noise_power) if source_rate > 0 else 0.0
    payment = helper.unit_cost * relay_energy
    cost = payment + source.unit_cost * source_energy
    return SplitDecision(
        relay_rate=relay_rate,
        source_rate=source_rate,
        source_effective_cost=source.effective_cost,
        helper_effective_cost=helper.effective_cost,
        source_energy=source_energy,
        relay_energy=relay_energy,
        cost=cost,
        payment=payment,
    )


def select_relay(source: Endpoint, helpers: Sequence[Endpoint], total_rate: float,
                 link_gain: float, noise_power: float,
                 splittable: bool = True) -> tuple[int, SplitDecision] | None:
    """Cheapest helper and its split; ties break to the lowest index.

    Returns None when no helper is available.
    """
    best: tuple[int, SplitDecision] | None = None
    for idx, helper in enumerate(helpers):
        decision = pair_cost(source, helper, total_rate, link_gain, noise_power, splittable)
        if best is None or decision.cost < best[1].cost:
            best = (idx, decision)
    return best


def choose_mode_complete(best_cost: float, direct_cost: float, threshold: float) -> Mode:
    """Cooperate only when the saving over direct transmission clears the threshold."""
    return Mode.CT if direct_cost - best_cost >= threshold else Mode.DT


@dataclass(frozen=True)
class BenchmarkOutcome:
    """Complete-information decision of one source in one slot."""

    helper_index: int | None
    best_cost: float | None
    mode: Mode
    split: SplitDecision | None


def benchmark_decision(source: Endpoint, helpers: Sequence[Endpoint], total_rate: float,
                       link_gain: float, noise_power: float, splittable: bool,
                       direct_cost: float, threshold: float) -> BenchmarkOutcome:
    """Pick the cheapest helper, then decide the mode against the direct cost."""
    selected = select_relay(source, helpers, total_rate, link_gain, noise_power, splittable)
    if selected is None:
        return BenchmarkOutcome(helper_index=None, best_cost=None, mode=Mode.DT, split=None)
    idx, split = selected
    mode = choose_mode_complete(split.cost, direct_cost, threshold)
    if mode is Mode.DT:
        return BenchmarkOutcome(helper_index=None, best_cost=split.cost, mode=Mode.DT, split=None)
    return BenchmarkOutcome(helper_index=idx, best_cost=split.cost, mode=Mode.CT, split=split)
