"""Command-line tests: file outputs, determinism, figures, error paths."""

import os

import pytest

from coopshare.cli import main

SMALL_SIM = (
    "channel.energy_scale = 100\n"
    "cell.mt_count = 25\n"
    "sim.slots = 8\n"
)

STUDY = (
    "channel.energy_scale = 5361\n"
    "source.mean_helpers = 1.2315\n"
)


def write_scenario(tmp_path, text, name="case.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_simulate_writes_csv_and_events(tmp_path, capsys):
    scenario = write_scenario(tmp_path, SMALL_SIM)
    out = str(tmp_path / "out")
    code = main(["simulate", "--scenario", scenario, "--out", out,
                 "--scheme", "PartNSD", "--no-plot"])
    assert code == 0
    csv_text = open(os.path.join(out, "simulate.csv")).read()
    assert csv_text.startswith("experiment,scheme,seed,coordinate,metric,value\n")
    assert ",PartNSD," in csv_text
    events_text = open(os.path.join(out, "simulate_events.ndjson")).read()
    assert '"scheme": "PartNSD"' in events_text
    printed = capsys.readouterr().out
    assert "simulate.csv" in printed and "simulate_events.ndjson" in printed


def test_simulate_rerun_is_byte_identical(tmp_path):
    scenario = write_scenario(tmp_path, SMALL_SIM)
    out_a, out_b = str(tmp_path / "a"), str(tmp_path / "b")
    for out in (out_a, out_b):
        assert main(["simulate", "--scenario", scenario, "--out", out,
                     "--scheme", "FullSD", "--no-plot"]) == 0
    read = lambda d, n: open(os.path.join(d, n), "rb").read()
    assert read(out_a, "simulate.csv") == read(out_b, "simulate.csv")
    assert read(out_a, "simulate_events.ndjson") == read(out_b, "simulate_events.ndjson")


def test_simulate_no_events_flag(tmp_path):
    scenario = write_scenario(tmp_path, SMALL_SIM)
    out = str(tmp_path / "out")
    assert main(["simulate", "--scenario", scenario, "--out", out,
                 "--scheme", "DT", "--no-plot", "--no-events"]) == 0
    assert os.path.exists(os.path.join(out, "simulate.csv"))
    assert not os.path.exists(os.path.join(out, "simulate_events.ndjson"))


def test_simulate_all_schemes_and_slot_override(tmp_path):
    scenario = write_scenario(tmp_path, SMALL_SIM)
    out = str(tmp_path / "out")
    assert main(["simulate", "--scenario", scenario, "--out", out,
                 "--slots", "3", "--no-plot", "--no-events"]) == 0
    csv_text = open(os.path.join(out, "simulate.csv")).read()
    for scheme in ("DT", "FullNSD", "FullSD", "PartNSD", "PartSD"):
        assert f",{scheme}," in csv_text
    # trace rows stop at the overridden slot count
    assert ",3,avg_battery," in csv_text
    assert ",4,avg_battery," not in csv_text


def test_converge_renders_figure(tmp_path):
    scenario = write_scenario(tmp_path, STUDY)
    out = str(tmp_path / "out")
    assert main(["converge", "--scenario", scenario, "--out", out]) == 0
    assert os.path.getsize(os.path.join(out, "converge.csv")) > 0
    assert os.path.getsize(os.path.join(out, "converge.png")) > 1000


def test_seed_override_lands_in_rows(tmp_path):
    scenario = write_scenario(tmp_path, STUDY)
    out = str(tmp_path / "out")
    assert main(["converge", "--scenario", scenario, "--out", out,
                 "--seed", "123", "--no-plot"]) == 0
    body = open(os.path.join(out, "converge.csv")).read().splitlines()[1:]
    assert body and all(",123," in line for line in body)


def test_sweep_battery_outputs(tmp_path):
    scenario = write_scenario(tmp_path, STUDY)
    out = str(tmp_path / "out")
    assert main(["sweep-battery", "--scenario", scenario, "--out", out,
                 "--reps", "10", "--no-plot"]) == 0
    lines = open(os.path.join(out, "battery_sweep.csv")).read().splitlines()
    assert len(lines) == 1 + 55


def test_simulate_figures(tmp_path):
    scenario = write_scenario(tmp_path, SMALL_SIM)
    out = str(tmp_path / "out")
    assert main(["simulate", "--scenario", scenario, "--out", out,
                 "--scheme", "DT", "--no-events"]) == 0
    for name in ("outage_counts.png", "battery_trace.png", "battery_histogram.png"):
        assert os.path.getsize(os.path.join(out, name)) > 1000


def test_out_dir_env_fallback(tmp_path, monkeypatch):
    scenario = write_scenario(tmp_path, SMALL_SIM)
    env_out = str(tmp_path / "env_out")
    monkeypatch.setenv("COOPSHARE_OUT_DIR", env_out)
    assert main(["simulate", "--scenario", scenario, "--scheme", "DT",
                 "--no-plot", "--no-events", "--slots", "2"]) == 0
    assert os.path.exists(os.path.join(env_out, "simulate.csv"))


def test_missing_scenario_is_reported(tmp_path, capsys):
    code = main(["converge", "--scenario", str(tmp_path / "nope.cfg"), "--no-plot"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_bad_scenario_value_is_reported(tmp_path, capsys):
    scenario = write_scenario(tmp_path, "sim.slots = soon\n")
    code = main(["converge", "--scenario", scenario, "--no-plot"])
    assert code == 2
    assert "sim.slots" in capsys.readouterr().err


def test_unknown_scheme_rejected_by_parser(tmp_path):
    scenario = write_scenario(tmp_path, SMALL_SIM)
    with pytest.raises(SystemExit):
        main(["simulate", "--scenario", scenario, "--scheme", "Hybrid"])
