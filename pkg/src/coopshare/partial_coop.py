"""Pricing under uncertainty: acceptance model, expected cost, and the searches.

The source knows only the distribution of nearby helpers (Poisson count,
uniform battery, unit-mean exponential fading), not their realizations.  It
posts a payment and, when splitting is allowed, a relay rate.  The chance
that one helper accepts reduces to a ratio ``w`` of offered surplus to
relay-energy scale; aggregating over the Poisson count gives a closed-form
association probability and a smooth expected-cost objective that is convex
in each decision variable separately.  Both searches are derivative-free
interval halvings with a small probe offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .economics import CostBreakdown, Mode

__all__ = [
    "InfeasibleWindow",
    "UncertaintyModel",
    "AlgorithmConfig",
    "PriceSearchResult",
    "PricingDecision",
    "surplus_ratio",
    "acceptance_probability",
    "association_probability",
    "expected_cost",
    "dichotomous_min",
    "optimize_price",
    "optimize_joint",
    "choose_mode_incomplete",
]

# Relative slack when validating payments against window edges, to absorb
# floating-point drift of probe points computed from the edges themselves.
_EDGE_SLACK = 1e-9


class InfeasibleWindow(ValueError):
    """No payment can satisfy both sides; the caller falls back to DT."""


@dataclass(frozen=True)
class UncertaintyModel:
    """What the source knows about its potential helpers.

    mean_helpers
        Poisson mean of the number of idle terminals in short range.
    max_unit_cost
        Upper end of the helpers' uniform unit-cost distribution.
    link_gain
        Large-scale gain toward the base station, shared by source and
        nearby helpers.
    noise_power
        Receiver noise power (same scale as the energies in play).
    reservation
        Helpers' reservation utility.
    """

    mean_helpers: float
    max_unit_cost: float
    link_gain: float
    noise_power: float
    reservation: float

    def __post_init__(self) -> None:
        if self.mean_helpers < 0:
            raise ValueError(f"mean_helpers must be >= 0, got {self.mean_helpers!r}")
        if self.max_unit_cost <= 0:
            raise ValueError(f"max_unit_cost must be > 0, got {self.max_unit_cost!r}")
        if self.link_gain <= 0:
            raise ValueError(f"link_gain must be > 0, got {self.link_gain!r}")
        if self.noise_power <= 0:
            raise ValueError(f"noise_power must be > 0, got {self.noise_power!r}")
        if self.reservation < 0:
            raise ValueError(f"reservation must be >= 0, got {self.reservation!r}")


@dataclass(frozen=True)
class AlgorithmConfig:
    """Tolerances for the searches, all relative to the instance scale.

    price_tol, rate_tol
        Interval-width stops as fractions of the payment window width and
        of the total rate.
    cost_tol
        Outer-loop stop on the expected-cost change, as a fraction of the
        direct cost.
    probe_offset
        Probe distance from the interval midpoint as a fraction of the
        current width; must be below one half.
    max_outer
        Hard cap on alternating outer iterations.
    poisson_tail
        Truncation tail mass for series evaluations of the Poisson
        aggregate (the production path uses the closed form; this bounds
        diagnostic series).
    """

    price_tol: float = 1e-4
    rate_tol: float = 1e-4
    cost_tol: float = 1e-6
    probe_offset: float = 0.01
    max_outer: int = 50
    poisson_tail: float = 1e-12

    def __post_init__(self) -> None:
        for name in ("price_tol", "rate_tol", "cost_tol", "poisson_tail"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        if not 0 < self.probe_offset < 0.5:
            raise ValueError(f"probe_offset must be in (0, 0.5), got {self.probe_offset!r}")
        if self.max_outer < 1:
            raise ValueError(f"max_outer must be >= 1, got {self.max_outer!r}")


def surplus_ratio(link_gain: float, payment: float, reservation: float,
                  noise_power: float, relay_rate: float) -> float:
    """Offered surplus divided by the relay-energy scale of the posted rate.

    A helper with unit cost zeta and fading eta accepts exactly when
    zeta/eta is at most this ratio, so it is the one number the acceptance
    probability depends on.  Undefined at a zero relay rate.
    """
    if relay_rate <= 0:
        raise ValueError("surplus_ratio is undefined at relay_rate <= 0")
    surplus = payment - reservation
    if surplus < 0:
        raise ValueError(f"payment {payment!r} below reservation {reservation!r}")
    return link_gain * surplus / (noise_power * (2.0 ** relay_rate - 1.0))


def acceptance_probability(ratio: float, max_unit_cost: float) -> float:
    """Chance that one random helper accepts, given the surplus ratio.

    Averages the exponential fading tail over the uniform unit cost;
    increasing in the ratio, approaching one from below.
    """
    if ratio < 0:
        raise ValueError(f"ratio must be >= 0, got {ratio!r}")
    if ratio == 0.0:
        return 0.0
    x = max_unit_cost / ratio
    return -math.expm1(-x) / x


def association_probability(mean_helpers: float, accept_prob: float) -> float:
    """Chance that at least one of a Poisson number of helpers accepts."""
    if mean_helpers < 0:
        raise ValueError(f"mean_helpers must be >= 0, got {mean_helpers!r}")
    if not 0 <= accept_prob <= 1:
        raise ValueError(f"accept_prob must be in [0, 1], got {accept_prob!r}")
    return -math.expm1(-mean_helpers * accept_prob)


def expected_cost(payment: float, relay_rate: float, cb: CostBreakdown,
                  model: UncertaintyModel) -> float:
    """Expected cost of posting (payment, relay_rate), falling back to DT on silence.

    The payment must lie in the window of the given split; the breakdown is
    re-split internally so the window always matches ``relay_rate``.
    """
    if relay_rate <= 0:
        raise ValueError("expected_cost needs a positive relay rate; rate zero is plain DT")
    if cb.reservation != model.reservation:
        raise ValueError(
            f"breakdown and model disagree on the reservation utility: "
            f"{cb.reservation!r} vs {model.reservation!r}"
        )
    split = cb if cb.relay_rate == relay_rate else cb.resplit(relay_rate)
    low, high = split.window_low, split.window_high
    slack = _EDGE_SLACK * max(1.0, abs(high))
    if payment < low - slack or payment > high + slack:
        raise ValueError(
            f"payment {payment!r} outside window [{low!r}, {high!r}] at relay_rate {relay_rate!r}"
        )
    ratio = surplus_ratio(model.link_gain, max(payment, low), model.reservation,
                          model.noise_power, relay_rate)
    accept = acceptance_probability(ratio, model.max_unit_cost)
    assoc = association_probability(model.mean_helpers, accept)
    direct = split.direct_cost
    return assoc * (payment + split.share_cost - direct) + direct


def dichotomous_min(f: Callable[[float], float], low: float, high: float,
                    tol: float, offset: float) -> tuple[float, float, int]:
    """Interval minimization by paired probes around the midpoint.

    Evaluates the objective at midpoint -/+ offset*width; keeps the side
    that must contain the minimizer of a convex function, and shrinks both
    ends to the probes on an exact tie.  Returns (argmin, value, iterations).
    """
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol!r}")
    if not 0 < offset < 0.5:
        raise ValueError(f"offset must be in (0, 0.5), got {offset!r}")
    if high < low:
        raise ValueError(f"empty interval [{low!r}, {high!r}]")
    iterations = 0
    while high - low > tol:
        width = high - low
        mid = 0.5 * (low + high)
        probe_low = mid - offset * width
        probe_high = mid + offset * width
        f_low = f(probe_low)
        f_high = f(probe_high)
        if f_low < f_high:
            high = probe_high
        elif f_low > f_high:
            low = probe_low
        else:
            low, high = probe_low, probe_high
        iterations += 1
    x = 0.5 * (low + high)
    return x, f(x), iterations


@dataclass(frozen=True)
class PriceSearchResult:
    """Result of the one-dimensional price search at a fixed relay rate."""

    payment: float
    cost: float
    iterations: int


def optimize_price(cb: CostBreakdown, model: UncertaintyModel,
                   config: AlgorithmConfig) -> PriceSearchResult:
    """Best payment for the split carried by ``cb``.

    The search interval is the full payment window of that split.  Raises
    InfeasibleWindow when the window is empty.
    """
    low, high = cb.window_low, cb.window_high
    if high < low:
        raise InfeasibleWindow(f"payment window [{low!r}, {high!r}] is empty")
    relay_rate = cb.relay_rate
    if relay_rate <= 0:
        raise ValueError("optimize_price needs a positive relay rate in the breakdown")
    if high == low:
        return PriceSearchResult(low, expected_cost(low, relay_rate, cb, model), 0)

    def objective(payment: float) -> float:
        return expected_cost(payment, relay_rate, cb, model)

    tol = config.price_tol * (high - low)
    payment, cost, iterations = dichotomous_min(objective, low, high, tol, config.probe_offset)
    # The window's upper edge always attains exactly the direct cost, so the
    # reported optimum is never allowed to exceed it.
    if cost > cb.direct_cost:
        payment, cost = high, cb.direct_cost
    return PriceSearchResult(payment, cost, iterations)


@dataclass(frozen=True)
class PricingDecision:
    """Posted contract of a source under uncertainty, with diagnostics.

    ``trace`` holds the expected cost after each inner search, starting from
    the direct cost; it is non-increasing by construction.
    """

    payment: float
    relay_rate: float
    ratio: float
    expected: float
    mode: Mode
    trace: tuple[float, ...]
    outer_iterations: int


def _feasible_rate_floor(payment: float, cb: CostBreakdown) -> float:
    """Least relay rate whose payment window still reaches ``payment``.

    The window's high end grows with the relay rate; solving
    window_high(rate) >= payment for the rate gives the floor.
    """
    direct = cb.direct_cost
    if payment <= cb.reservation or direct <= 0:
        return 0.0
    budget = 1.0 - payment / direct
    if budget <= 0:
        return cb.total_rate
    max_source_rate = math.log2(1.0 + (2.0 ** cb.total_rate - 1.0) * budget)
    return max(0.0, cb.total_rate - max_source_rate)


def optimize_joint(cb: CostBreakdown, model: UncertaintyModel, config: AlgorithmConfig,
                   total_rate: float, threshold: float = 0.0) -> PricingDecision:
    """Alternate price and rate-share searches until the cost settles.

    Starts from the whole rate on the relay at the window's upper edge
    (expected cost equal to the direct cost) and stops when one outer round
    improves the cost by less than the configured fraction of the direct
    cost.  Either line search is only accepted when it improves the
    incumbent, which keeps the trace monotone.
    """
    if total_rate <= 0:
        raise ValueError(f"total_rate must be > 0, got {total_rate!r}")
    base = cb if cb.relay_rate == total_rate else cb.resplit(total_rate)
    direct = base.direct_cost
    reservation = base.reservation

    def decide(payment: float, relay_rate: float, cost: float,
               trace: list[float], outer: int) -> PricingDecision:
        mode = choose_mode_incomplete(direct, cost, threshold, reservation)
        ratio = 0.0
        if relay_rate > 0 and payment > reservation:
            ratio = surplus_ratio(model.link_gain, payment, reservation,
                                  model.noise_power, relay_rate)
        return PricingDecision(payment=payment, relay_rate=relay_rate, ratio=ratio,
                               expected=cost, mode=mode, trace=tuple(trace),
                               outer_iterations=outer)

    trace = [direct]
    if not base.feasible:
        # Even the widest window is empty: no admissible payment exists.
        return decide(0.0, 0.0, direct, trace, 0)

    rate_floor = config.rate_tol * total_rate
    payment_cur = base.window_high
    rate_cur = total_rate
    cost_cur = direct

    for outer in range(1, config.max_outer + 1):
        previous = cost_cur

        # Price search at the current split.
        split = base.resplit(rate_cur)
        window = split.window_high - split.window_low
        if window > 0:
            tol = config.price_tol * window
            x, fx, _ = dichotomous_min(
                lambda p: expected_cost(p, rate_cur, split, model),
                split.window_low, split.window_high, tol, config.probe_offset,
            )
            if fx < cost_cur:
                payment_cur, cost_cur = x, fx
        trace.append(cost_cur)

        # Rate-share search at the current payment, over splits whose
        # window still admits that payment.
        low_rate = max(rate_floor, _feasible_rate_floor(payment_cur, base))
        if total_rate - low_rate > 0:
            tol = config.rate_tol * total_rate
            x, fx, _ = dichotomous_min(
                lambda r: expected_cost(payment_cur, r, base, model),
                low_rate, total_rate, tol, config.probe_offset,
            )
            if fx < cost_cur:
                rate_cur, cost_cur = x, fx
        trace.append(cost_cur)

        if previous - cost_cur <= config.cost_tol * max(direct, 1e-300):
            return decide(payment_cur, rate_cur, cost_cur, trace, outer)

    return decide(payment_cur, rate_cur, cost_cur, trace, config.max_outer)


def choose_mode_incomplete(direct_cost: float, optimized_cost: float, threshold: float,
                           reservation: float) -> Mode:
    """Cooperate when the direct cost exceeds both the threshold-adjusted
    expected cost and the reservation utility."""
    return Mode.CT if direct_cost >= max(threshold + optimized_cost, reservation) else Mode.DT
