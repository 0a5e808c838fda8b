"""Experiment-runner tests: CSV/NDJSON emission and the three experiments."""

import dataclasses
import random

import pytest

from coopshare.cell_sim import Scheme
from coopshare.experiments import (
    OutputRow,
    SWEEP_SCHEMES,
    converge_rows,
    emit_csv,
    emit_events,
    simulate_rows,
    sweep_battery_rows,
)
from coopshare.scenario import Scenario

STUDY = Scenario(channel_energy_scale=5361.0, source_mean_helpers=1.2315)


def test_emit_csv_header_only_when_empty():
    assert emit_csv([]) == "experiment,scheme,seed,coordinate,metric,value\n"


def test_emit_csv_sorted_and_stable_under_shuffle():
    rows = [
        OutputRow("e", "DT", 1, 2.0, "m", 0.5),
        OutputRow("e", "DT", 1, None, "m", 1.0),
        OutputRow("e", "DT", 1, 1.0, "m", 0.25),
        OutputRow("a", "PartSD", 3, None, "z", 7.0),
    ]
    text = emit_csv(rows)
    shuffled = rows[:]
    random.Random(4).shuffle(shuffled)
    assert emit_csv(shuffled) == text
    lines = text.splitlines()
    assert lines[0] == "experiment,scheme,seed,coordinate,metric,value"
    assert lines[1] == "a,PartSD,3,,z,7"
    # aggregates (no coordinate) sort before coordinates
    assert lines[2] == "e,DT,1,,m,1"
    assert lines[3] == "e,DT,1,1,m,0.25"


def test_emit_csv_nine_significant_digits():
    text = emit_csv([OutputRow("e", "DT", 1, None, "m", 0.123456789123)])
    assert text.splitlines()[1].endswith(",0.123456789")


def test_emit_events_ndjson():
    text = emit_events([{"b": 1, "a": 2}, {"x": None}])
    assert text == '{"a": 2, "b": 1}\n{"x": null}\n'
    assert emit_events([]) == ""


def test_converge_no_helpers_is_flat_at_direct():
    sc = dataclasses.replace(STUDY, source_mean_helpers=0.0)
    rows = converge_rows(sc)
    direct = sc.source_breakdown().direct_cost
    costs = {(r.scheme, r.coordinate is None, r.metric): r.value for r in rows}
    assert costs[("DT", True, "expected_cost")] == pytest.approx(direct)
    assert costs[("PartSD", True, "expected_cost")] == pytest.approx(direct)
    assert costs[("PartNSD", True, "expected_cost")] == pytest.approx(direct)
    assert costs[("PartSD", True, "outer_iterations")] == 1.0
    trace = [r.value for r in rows if r.scheme == "PartSD" and r.coordinate is not None]
    assert all(v == pytest.approx(direct) for v in trace)


def test_converge_study_point_improves_and_descends():
    rows = converge_rows(STUDY)
    direct = STUDY.source_breakdown().direct_cost
    trace = sorted((r.coordinate, r.value) for r in rows
                   if r.scheme == "PartSD" and r.coordinate is not None)
    values = [v for _, v in trace]
    assert values[0] <= direct + 1e-12
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
    final = next(r.value for r in rows
                 if r.scheme == "PartSD" and r.coordinate is None
                 and r.metric == "expected_cost")
    assert final == pytest.approx(values[-1])
    assert final < direct
    nsd = next(r.value for r in rows
               if r.scheme == "PartNSD" and r.metric == "expected_cost")
    assert final <= nsd + 1e-9
    assert all(r.seed == STUDY.seed_value for r in rows)


def test_sweep_cardinality_and_orderings():
    sc = dataclasses.replace(STUDY, source_rate_bps_hz=4.0, source_mean_helpers=2.0)
    rows = sweep_battery_rows(sc, reps=60)
    assert len(rows) == 11 * len(SWEEP_SCHEMES)
    assert {r.scheme for r in rows} == {s.value for s in SWEEP_SCHEMES}
    assert all(r.metric == "expected_cost" for r in rows)
    by = {(r.scheme, r.coordinate): r.value for r in rows}
    levels = sorted({r.coordinate for r in rows})
    assert levels == [10.0 * k for k in range(11)]
    for level in levels:
        dt = by[("DT", level)]
        # shared helper pool: splitting can only help the informed scheme
        assert by[("FullSD", level)] <= by[("FullNSD", level)] + 1e-12
        for scheme in ("FullNSD", "FullSD", "PartNSD", "PartSD"):
            assert by[(scheme, level)] <= dt + 1e-12
        assert by[("PartSD", level)] <= by[("PartNSD", level)] + 1e-9
    # direct cost is affine in the battery level, zero when full
    assert by[("DT", 100.0)] == 0.0
    assert by[("DT", 0.0)] == pytest.approx(10.0 * (by[("DT", 90.0)]), rel=1e-9)
    for scheme in ("FullNSD", "FullSD", "PartNSD", "PartSD"):
        assert by[(scheme, 100.0)] == pytest.approx(0.0, abs=1e-15)


def test_sweep_rejects_bad_reps():
    with pytest.raises(ValueError):
        sweep_battery_rows(STUDY, reps=0)


def test_simulate_rows_shape_and_determinism():
    sc = Scenario(channel_energy_scale=100.0, cell_mt_count=30, sim_slots=12)
    rows, records = simulate_rows(sc, [Scheme.DT], seeds=2, slots=12)
    per_run = 8 + 13 + 5  # aggregates + trace + histogram
    assert len(rows) == 2 * per_run
    assert {r.seed for r in rows} == {sc.seed_value, sc.seed_value + 1}
    assert all(rec["seed"] in (1, 2) and rec["scheme"] == "DT" for rec in records)
    again_rows, again_records = simulate_rows(sc, [Scheme.DT], seeds=2, slots=12)
    assert emit_csv(again_rows) == emit_csv(rows)
    assert emit_events(again_records) == emit_events(records)


def test_simulate_rows_can_skip_events():
    sc = Scenario(channel_energy_scale=100.0, cell_mt_count=20, sim_slots=5)
    rows, records = simulate_rows(sc, [Scheme.PART_NSD], with_events=False, slots=5)
    assert records == []
    assert rows


def test_simulate_rows_rejects_bad_seeds():
    with pytest.raises(ValueError):
        simulate_rows(Scenario(), [Scheme.DT], seeds=0)
