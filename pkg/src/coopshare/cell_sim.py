"""Slot-by-slot uplink simulator with battery accounting under five schemes.

Each slot: every terminal is re-placed uniformly in the cell, turns source
with the traffic probability, and gets a fresh fading draw.  Idle terminals
within short range of exactly one source form that source's helper set;
when helper sets collide the source positions are re-drawn a bounded number
of times, after which the slot proceeds and a warning is counted.  Sources
then decide their mode under the configured scheme and transmit.

Failure rules, applied per package in this order:
* any leg needing more than the per-transmission energy cap is a
  communications outage; the package is discarded and nobody spends;
* otherwise any leg needing more than its terminal's remaining battery is
  still attempted: that terminal drains to exactly zero, declares a battery
  outage, and ceases all activity for the rest of the run; the package is
  skipped and the partner leg never transmits;
* otherwise both legs spend, the helper is paid, and the package counts as
  delivered.

Payments are a separate ledger and never recharge batteries.  A terminal
whose battery reaches exactly zero after a successful send also declares a
battery outage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .channel import DEAD_LINK_GAIN, ChannelParams, path_gain
from .economics import EconParams, Mode, breakdown_for_split, helper_utility, unit_energy_cost
from .full_coop import Endpoint, benchmark_decision
from .partial_coop import (
    AlgorithmConfig,
    UncertaintyModel,
    choose_mode_incomplete,
    optimize_joint,
    optimize_price,
)
from .stochastic import CellGeometry, RngSeed, Stream, helper_count_mean, sample_cell

__all__ = [
    "Scheme",
    "Outcome",
    "SimConfig",
    "SlotEvent",
    "SimState",
    "SimMetrics",
    "step_slot",
    "run_simulation",
    "metrics_summary",
]


class Scheme(str, Enum):
    """Decision rule a source applies each slot."""

    DT = "DT"
    FULL_NSD = "FullNSD"
    FULL_SD = "FullSD"
    PART_NSD = "PartNSD"
    PART_SD = "PartSD"

    @property
    def splittable(self) -> bool:
        return self in (Scheme.FULL_SD, Scheme.PART_SD)

    @property
    def informed(self) -> bool:
        return self in (Scheme.FULL_NSD, Scheme.FULL_SD)


class Outcome(str, Enum):
    DELIVERED = "delivered"
    COMM_OUTAGE = "comm_outage"
    SKIPPED = "skipped_battery_outage"


@dataclass(frozen=True)
class SimConfig:
    """Everything one simulation run depends on."""

    slots: int
    scheme: Scheme
    mt_count: int
    peak_energy: float
    rate: float
    overlap_retries: int
    geometry: CellGeometry
    econ: EconParams
    channel: ChannelParams
    alg: AlgorithmConfig
    seed: RngSeed

    def __post_init__(self) -> None:
        if self.slots < 1:
            raise ValueError(f"slots must be >= 1, got {self.slots!r}")
        if self.mt_count < 1:
            raise ValueError(f"mt_count must be >= 1, got {self.mt_count!r}")
        if not (math.isfinite(self.peak_energy) and self.peak_energy > 0):
            raise ValueError(f"peak_energy must be finite and > 0, got {self.peak_energy!r}")
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise ValueError(f"rate must be finite and > 0, got {self.rate!r}")
        if self.overlap_retries < 1:
            raise ValueError(f"overlap_retries must be >= 1, got {self.overlap_retries!r}")


@dataclass(frozen=True)
class SlotEvent:
    """One source's transmission attempt in one slot.

    Energies are what was actually spent (zero on any failure).  ``mode`` is
    the mode the source chose; a CT choice with no helper means nobody
    accepted and the source fell back to direct transmission in the same
    slot.  ``died`` lists terminals that declared a battery outage during
    this attempt.
    """

    slot: int
    source: int
    mode: Mode
    helper: int | None
    source_energy: float
    helper_energy: float
    payment: float
    outcome: Outcome
    died: tuple[int, ...] = ()

    def to_record(self) -> dict:
        return {
            "slot": self.slot,
            "source": self.source,
            "mode": self.mode.value,
            "helper": self.helper,
            "source_energy": self.source_energy,
            "helper_energy": self.helper_energy,
            "payment": self.payment,
            "outcome": self.outcome.value,
            "died": list(self.died),
        }


@dataclass
class SimState:
    """Mutable run state: persistent batteries plus counters and streams."""

    batteries: list[float]
    alive: list[bool]
    env: Stream
    dec: Stream
    mean_helpers: float
    slot: int = 0
    comm_outages: int = 0
    battery_outages: int = 0
    delivered: int = 0
    source_slots: int = 0
    payments_total: float = 0.0
    overlap_warnings: int = 0
    trace: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class SimMetrics:
    """Aggregates of one finished run."""

    scheme: Scheme
    slots: int
    mt_count: int
    comm_outages: int
    battery_outages: int
    delivered: int
    source_slots: int
    payments_total: float
    overlap_warnings: int
    avg_battery_trace: tuple[float, ...]
    battery_histogram: tuple[int, ...]


def _leg_energy(rate: float, gain: float, noise_power: float) -> float:
    """Required transmit energy, infinite on an unusable link."""
    if rate <= 0:
        return 0.0
    if gain <= DEAD_LINK_GAIN:
        return math.inf
    return noise_power / gain * (2.0 ** rate - 1.0)


def _has_overlap(helper_sets: dict[int, list[int]]) -> bool:
    seen: set[int] = set()
    for members in helper_sets.values():
        for j in members:
            if j in seen:
                return True
            seen.add(j)
    return False


def _execute(state: SimState, cfg: SimConfig, legs: list[tuple[int, float]]):
    """Apply the outage rules to one package; returns (outcome, died, spent)."""
    if any(energy > cfg.peak_energy for _, energy in legs):
        state.comm_outages += 1
        return Outcome.COMM_OUTAGE, (), {}
    shortfall = [mt for mt, energy in legs if energy > state.batteries[mt]]
    if shortfall:
        # Attempted and capped: the short MT drains to exactly zero, the
        # package is lost, and the other leg never transmits.
        died = []
        spent = {}
        for mt in shortfall:
            spent[mt] = state.batteries[mt]
            state.batteries[mt] = 0.0
            state.alive[mt] = False
            state.battery_outages += 1
            died.append(mt)
        return Outcome.SKIPPED, tuple(died), spent
    spent = {}
    died = []
    for mt, energy in legs:
        state.batteries[mt] -= energy
        spent[mt] = energy
        if state.batteries[mt] <= 0.0:
            state.batteries[mt] = 0.0
            state.alive[mt] = False
            state.battery_outages += 1
            died.append(mt)
    state.delivered += 1
    return Outcome.DELIVERED, tuple(died), spent


def step_slot(state: SimState, cfg: SimConfig) -> list[SlotEvent]:
    """Advance the simulation by one slot, mutating state.

    Environment draws come in fixed blocks from the env stream: x positions,
    y positions, role uniforms, fading; overlap retries then re-draw the
    source positions (x block, y block).  The decision stream is touched
    only to break ties among multiple accepting helpers.
    """
    geom, ch, econ, alg = cfg.geometry, cfg.channel, cfg.econ, cfg.alg
    count = cfg.mt_count
    noise = ch.noise_power
    rate = cfg.rate
    env = state.env

    xs = env.uniforms(count) * geom.width
    ys = env.uniforms(count) * geom.height
    role_draws = env.uniforms(count)
    fading = env.exponentials(count)

    sources = [k for k in range(count)
               if state.alive[k] and role_draws[k] < geom.traffic_prob]
    idle = [k for k in range(count)
            if state.alive[k] and not role_draws[k] < geom.traffic_prob]

    range_sq = geom.src_range ** 2

    def build_helper_sets() -> dict[int, list[int]]:
        return {
            i: [j for j in idle
                if (xs[i] - xs[j]) ** 2 + (ys[i] - ys[j]) ** 2 <= range_sq]
            for i in sources
        }

    helper_sets = build_helper_sets()
    retries = 0
    while _has_overlap(helper_sets) and retries < cfg.overlap_retries:
        redraw = env.uniforms(2 * len(sources))
        for pos, i in enumerate(sources):
            xs[i] = redraw[pos] * geom.width
            ys[i] = redraw[len(sources) + pos] * geom.height
        helper_sets = build_helper_sets()
        retries += 1
    if _has_overlap(helper_sets):
        state.overlap_warnings += 1

    events: list[SlotEvent] = []
    for i in sources:
        if not state.alive[i]:
            continue
        state.source_slots += 1
        distance = math.hypot(xs[i] - geom.bs_x, ys[i] - geom.bs_y)
        link_gain = path_gain(ch, distance)
        own_gain = fading[i] * link_gain
        zeta_i = unit_energy_cost(state.batteries[i], econ)
        direct_energy = _leg_energy(rate, own_gain, noise)
        candidates = [j for j in helper_sets[i]
                      if state.alive[j] and fading[j] * link_gain > DEAD_LINK_GAIN]

        mode = Mode.DT
        helper: int | None = None
        legs: list[tuple[int, float]] = [(i, direct_energy)]
        payment = 0.0

        if cfg.scheme is not Scheme.DT and math.isfinite(direct_energy):
            direct_cost = zeta_i * direct_energy
            if cfg.scheme.informed:
                outcome = benchmark_decision(
                    Endpoint(zeta_i, fading[i]),
                    [Endpoint(unit_energy_cost(state.batteries[j], econ), fading[j])
                     for j in candidates],
                    rate, link_gain, noise, cfg.scheme.splittable,
                    direct_cost, econ.mode_threshold,
                )
                if outcome.mode is Mode.CT:
                    mode = Mode.CT
                    helper = candidates[outcome.helper_index]
                    legs = [(i, outcome.split.source_energy), (helper, outcome.split.relay_energy)]
                    payment = outcome.split.payment
            else:
                cb = breakdown_for_split(zeta_i, direct_energy, rate, rate,
                                         econ.reservation_utility)
                model = UncertaintyModel(state.mean_helpers, econ.max_unit_cost,
                                         link_gain, noise, econ.reservation_utility)
                posted = None
                if cfg.scheme.splittable:
                    decision = optimize_joint(cb, model, alg, rate, econ.mode_threshold)
                    if decision.mode is Mode.CT:
                        posted = (decision.payment, decision.relay_rate)
                elif cb.feasible:
                    result = optimize_price(cb, model, alg)
                    if choose_mode_incomplete(cb.direct_cost, result.cost,
                                              econ.mode_threshold,
                                              econ.reservation_utility) is Mode.CT:
                        posted = (result.payment, rate)
                if posted is not None:
                    mode = Mode.CT
                    offer, relay_rate = posted
                    acceptors = []
                    for j in candidates:
                        relay_energy = _leg_energy(relay_rate, fading[j] * link_gain, noise)
                        if not math.isfinite(relay_energy):
                            continue
                        zeta_j = unit_energy_cost(state.batteries[j], econ)
                        if helper_utility(offer, zeta_j, relay_energy,
                                          econ.reservation_utility).accept:
                            acceptors.append((j, relay_energy))
                    if acceptors:
                        pick = state.dec.pick_index(len(acceptors)) if len(acceptors) > 1 else 0
                        helper, relay_energy = acceptors[pick]
                        share = _leg_energy(rate - relay_rate, own_gain, noise)
                        legs = [(i, share), (helper, relay_energy)]
                        payment = offer
                    # nobody accepted: same-slot fallback to the direct legs

        result_outcome, died, spent = _execute(state, cfg, legs)
        if result_outcome is not Outcome.DELIVERED:
            payment = 0.0
        else:
            state.payments_total += payment
        events.append(SlotEvent(
            slot=state.slot,
            source=i,
            mode=mode,
            helper=helper,
            source_energy=spent.get(i, 0.0),
            helper_energy=spent.get(helper, 0.0) if helper is not None else 0.0,
            payment=payment,
            outcome=result_outcome,
            died=died,
        ))
    return events


def _initial_state(cfg: SimConfig) -> SimState:
    env = cfg.seed.stream(0)
    dec = cfg.seed.stream(1)
    initial = sample_cell(cfg.geometry, cfg.econ.battery_capacity, env, count=cfg.mt_count)
    batteries = [mt.battery for mt in initial]
    state = SimState(
        batteries=batteries,
        alive=[True] * cfg.mt_count,
        env=env,
        dec=dec,
        mean_helpers=helper_count_mean(cfg.geometry),
    )
    state.trace.append(sum(batteries) / cfg.mt_count)
    return state


def run_simulation(cfg: SimConfig) -> tuple[SimMetrics, list[SlotEvent]]:
    """Run all slots and aggregate; events are in slot, then source order."""
    state = _initial_state(cfg)
    events: list[SlotEvent] = []
    for slot in range(cfg.slots):
        state.slot = slot
        events.extend(step_slot(state, cfg))
        state.trace.append(sum(state.batteries) / cfg.mt_count)
    cap = cfg.econ.battery_capacity
    edges = [0.0, 0.2 * cap, 0.4 * cap, 0.6 * cap, 0.8 * cap, cap]
    histogram, _ = np.histogram(state.batteries, bins=edges)
    metrics = SimMetrics(
        scheme=cfg.scheme,
        slots=cfg.slots,
        mt_count=cfg.mt_count,
        comm_outages=state.comm_outages,
        battery_outages=state.battery_outages,
        delivered=state.delivered,
        source_slots=state.source_slots,
        payments_total=state.payments_total,
        overlap_warnings=state.overlap_warnings,
        avg_battery_trace=tuple(state.trace),
        battery_histogram=tuple(int(c) for c in histogram),
    )
    return metrics, events


def metrics_summary(metrics: SimMetrics) -> dict:
    """Flat summary record; rates are per source transmission attempt."""
    attempts = metrics.source_slots
    return {
        "scheme": metrics.scheme.value,
        "slots": metrics.slots,
        "mt_count": metrics.mt_count,
        "comm_outages": metrics.comm_outages,
        "battery_outages": metrics.battery_outages,
        "delivered": metrics.delivered,
        "source_slots": attempts,
        "payments_total": metrics.payments_total,
        "overlap_warnings": metrics.overlap_warnings,
        "comm_outage_rate": metrics.comm_outages / attempts if attempts else 0.0,
        "battery_outage_rate": metrics.battery_outages / attempts if attempts else 0.0,
        "avg_battery_final": metrics.avg_battery_trace[-1] if metrics.avg_battery_trace else 0.0,
    }
