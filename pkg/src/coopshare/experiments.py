"""Experiment runners and their delimited output.

Three experiments ship:

* ``converge``: the alternating price/rate optimization trace for the study
  source, next to the price-only result, both from the scenario's single
  study point.
* ``sweep_battery``: expected cost of all five schemes across battery
  levels 0..B_max.  Direct and posted-price costs are analytic; the two
  informed schemes are Monte Carlo means over shared helper draws, so the
  splittable variant never averages worse than the non-splittable one.
  Costs here are the schemes' raw cost functions; the mode-choice threshold
  plays no role in these curves.
* ``simulate``: full multi-terminal slot simulation per scheme and seed.

All experiments emit sorted ``OutputRow``s rendered to CSV with 9
significant digits, and the simulator additionally yields per-transmission
event records for an NDJSON log.  Everything is deterministic for a fixed
scenario, so repeated runs produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .cell_sim import Scheme, metrics_summary, run_simulation
from .economics import unit_energy_cost
from .full_coop import Endpoint, select_relay
from .partial_coop import InfeasibleWindow, optimize_joint, optimize_price
from .scenario import Scenario
from .stochastic import RngSeed

__all__ = [
    "OutputRow",
    "emit_csv",
    "emit_events",
    "converge_rows",
    "sweep_battery_rows",
    "simulate_rows",
    "SWEEP_SCHEMES",
]

SWEEP_SCHEMES = (Scheme.DT, Scheme.FULL_NSD, Scheme.FULL_SD, Scheme.PART_NSD, Scheme.PART_SD)


@dataclass(frozen=True)
class OutputRow:
    """One measurement; coordinate None marks a per-run aggregate."""

    experiment: str
    scheme: str
    seed: int
    coordinate: float | None
    metric: str
    value: float


def _fmt(value: float) -> str:
    return f"{value:.9g}"


def _sort_key(row: OutputRow):
    return (
        row.experiment,
        row.scheme,
        row.seed,
        0 if row.coordinate is None else 1,
        row.coordinate if row.coordinate is not None else 0.0,
        row.metric,
    )


def emit_csv(rows: list[OutputRow]) -> str:
    """Render rows sorted and formatted; header is always present."""
    lines = ["experiment,scheme,seed,coordinate,metric,value"]
    for row in sorted(rows, key=_sort_key):
        coord = "" if row.coordinate is None else _fmt(row.coordinate)
        lines.append(
            f"{row.experiment},{row.scheme},{row.seed},{coord},{row.metric},{_fmt(row.value)}"
        )
    return "\n".join(lines) + "\n"


def emit_events(records: list[dict]) -> str:
    """NDJSON with sorted keys; one record per line."""
    return "".join(json.dumps(record, sort_keys=True) + "\n" for record in records)


def converge_rows(scenario: Scenario) -> list[OutputRow]:
    """Optimization traces for the study source, both search variants."""
    cb = scenario.source_breakdown()
    model = scenario.source_model()
    alg = scenario.algorithm_config()
    seed = scenario.seed_value
    rows = [OutputRow("converge", Scheme.DT.value, seed, None, "expected_cost", cb.direct_cost)]

    decision = optimize_joint(cb, model, alg, scenario.source_rate_bps_hz,
                              scenario.econ_mode_threshold)
    for index, cost in enumerate(decision.trace):
        rows.append(OutputRow("converge", Scheme.PART_SD.value, seed,
                              float(index), "expected_cost", cost))
    rows.append(OutputRow("converge", Scheme.PART_SD.value, seed, None,
                          "expected_cost", decision.expected))
    rows.append(OutputRow("converge", Scheme.PART_SD.value, seed, None,
                          "payment", decision.payment))
    rows.append(OutputRow("converge", Scheme.PART_SD.value, seed, None,
                          "relay_rate", decision.relay_rate))
    rows.append(OutputRow("converge", Scheme.PART_SD.value, seed, None,
                          "outer_iterations", float(decision.outer_iterations)))

    try:
        priced = optimize_price(cb, model, alg)
        nsd_cost, nsd_payment = priced.cost, priced.payment
        nsd_iters = float(priced.iterations)
    except InfeasibleWindow:
        nsd_cost, nsd_payment, nsd_iters = cb.direct_cost, 0.0, 0.0
    rows.append(OutputRow("converge", Scheme.PART_NSD.value, seed, None,
                          "expected_cost", nsd_cost))
    rows.append(OutputRow("converge", Scheme.PART_NSD.value, seed, None,
                          "payment", nsd_payment))
    rows.append(OutputRow("converge", Scheme.PART_NSD.value, seed, None,
                          "iterations", nsd_iters))
    return rows


def _draw_helper_pool(scenario: Scenario, reps: int, stream) -> list[list[Endpoint]]:
    """Helper realizations for the informed-scheme Monte Carlo runs.

    One pool is shared by every battery level and both variants, so the
    cost curves differ only through the scheme, not through the noise.
    Helper unit costs are drawn directly, not derived from batteries.
    """
    pool = []
    for _ in range(reps):
        count = stream.poisson(scenario.source_mean_helpers)
        pool.append([
            Endpoint(stream.uniform() * scenario.econ_max_unit_cost, stream.exponential())
            for _ in range(count)
        ])
    return pool


def _full_info_costs(scenario: Scenario, battery: float,
                     pool: list[list[Endpoint]]) -> tuple[float, float]:
    """Monte Carlo cost means of both informed schemes at one battery level."""
    econ = scenario.econ_params()
    ch = scenario.channel_params()
    gain = scenario.source_link_gain()
    rate = scenario.source_rate_bps_hz
    zeta_i = unit_energy_cost(battery, econ)
    source = Endpoint(zeta_i, scenario.source_fading)
    direct = zeta_i * ch.noise_power / (scenario.source_fading * gain) * (2.0 ** rate - 1.0)

    total_nsd = 0.0
    total_sd = 0.0
    for helpers in pool:
        for splittable in (False, True):
            best = select_relay(source, helpers, rate, gain, ch.noise_power, splittable)
            cost = direct if best is None else min(direct, best[1].cost)
            if splittable:
                total_sd += cost
            else:
                total_nsd += cost
    return total_nsd / len(pool), total_sd / len(pool)


def sweep_battery_rows(scenario: Scenario, reps: int = 1000) -> list[OutputRow]:
    """Expected cost of each scheme at battery levels 0..B_max, 11 points."""
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps!r}")
    econ = scenario.econ_params()
    alg = scenario.algorithm_config()
    rate = scenario.source_rate_bps_hz
    pool = _draw_helper_pool(scenario, reps, scenario.rng_seed().stream(2))
    seed = scenario.seed_value
    levels = [econ.battery_capacity * k / 10.0 for k in range(11)]

    rows = []
    for level in levels:
        cb = scenario.source_breakdown(battery=level)
        model = scenario.source_model()

        rows.append(OutputRow("sweep_battery", Scheme.DT.value, seed, level,
                              "expected_cost", cb.direct_cost))

        try:
            priced = optimize_price(cb, model, alg)
            nsd_cost = priced.cost
        except InfeasibleWindow:
            nsd_cost = cb.direct_cost
        rows.append(OutputRow("sweep_battery", Scheme.PART_NSD.value, seed, level,
                              "expected_cost", nsd_cost))

        joint = optimize_joint(cb, model, alg, rate)
        rows.append(OutputRow("sweep_battery", Scheme.PART_SD.value, seed, level,
                              "expected_cost", joint.expected))

        full_nsd, full_sd = _full_info_costs(scenario, level, pool)
        rows.append(OutputRow("sweep_battery", Scheme.FULL_NSD.value, seed, level,
                              "expected_cost", full_nsd))
        rows.append(OutputRow("sweep_battery", Scheme.FULL_SD.value, seed, level,
                              "expected_cost", full_sd))
    return rows


def simulate_rows(scenario: Scenario, schemes: list[Scheme], seeds: int = 1,
                  slots: int | None = None,
                  with_events: bool = True) -> tuple[list[OutputRow], list[dict]]:
    """Run the cell simulation per scheme and seed; seeds are consecutive."""
    if seeds < 1:
        raise ValueError(f"seeds must be >= 1, got {seeds!r}")
    rows: list[OutputRow] = []
    records: list[dict] = []
    cap = scenario.econ_battery_capacity_j
    bin_edges = [0.2 * cap * k for k in range(5)]
    for scheme in schemes:
        for offset in range(seeds):
            seed_value = scenario.seed_value + offset
            run_seed = RngSeed(seed_value, scenario.seed_stream)
            cfg = scenario.sim_config(scheme=scheme.value, slots=slots, seed=run_seed)
            metrics, events = run_simulation(cfg)
            summary = metrics_summary(metrics)
            for metric in ("comm_outages", "battery_outages", "delivered",
                           "source_slots", "payments_total", "overlap_warnings",
                           "comm_outage_rate", "battery_outage_rate"):
                rows.append(OutputRow("simulate", scheme.value, seed_value, None,
                                      metric, float(summary[metric])))
            for slot, level in enumerate(metrics.avg_battery_trace):
                rows.append(OutputRow("simulate", scheme.value, seed_value,
                                      float(slot), "avg_battery", level))
            for edge, count in zip(bin_edges, metrics.battery_histogram):
                rows.append(OutputRow("simulate", scheme.value, seed_value,
                                      edge, "battery_count", float(count)))
            if with_events:
                for event in events:
                    record = {"scheme": scheme.value, "seed": seed_value}
                    record.update(event.to_record())
                    records.append(record)
    return rows, records
