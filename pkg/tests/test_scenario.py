"""Scenario-file tests: parsing, round trips, builder wiring."""

import math

import pytest

from coopshare.channel import path_gain
from coopshare.scenario import Scenario, load_scenario, parse_scenario, scenario_text


def test_defaults_match_reference_setup():
    sc = Scenario()
    assert sc.channel_path_loss_exponent == 3.6
    assert sc.channel_reference_distance_m == 10.0
    assert sc.channel_reference_gain_db == -70.0
    assert sc.channel_noise_dbm == -110.0
    assert sc.econ_battery_capacity_j == 100.0
    assert sc.econ_reservation_utility == 0.2
    assert sc.econ_mode_threshold == 1.0
    assert sc.cell_traffic_prob == 0.2
    assert sc.cell_src_range_m == 7.0
    assert sc.cell_mt_count == 100
    assert sc.source_distance_m == 50.0
    assert sc.sim_slots == 300
    assert sc.sim_peak_energy_j == 3.0


def test_empty_text_gives_defaults():
    assert parse_scenario("") == Scenario()
    assert parse_scenario("# only comments\n\n   \n") == Scenario()


def test_round_trip_identity():
    sc = Scenario(channel_energy_scale=5361.0, sim_scheme="PartSD",
                  source_mean_helpers=2.0, seed_value=17)
    assert parse_scenario(scenario_text(sc)) == sc


def test_parse_overrides_and_comments():
    sc = parse_scenario(
        "sim.scheme = FullSD   # informed, split\n"
        "channel.energy_scale = 100\n"
        "cell.mt_count = 25\n"
    )
    assert sc.sim_scheme == "FullSD"
    assert sc.channel_energy_scale == 100.0
    assert sc.cell_mt_count == 25
    assert sc.sim_slots == 300


def test_unknown_key_rejected():
    with pytest.raises(ValueError, match="unknown key"):
        parse_scenario("channel.typo = 3\n")


def test_duplicate_key_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        parse_scenario("sim.slots = 10\nsim.slots = 20\n")


def test_missing_separator_rejected():
    with pytest.raises(ValueError, match="key = value"):
        parse_scenario("just some words\n")


def test_bad_value_reports_line_and_key():
    with pytest.raises(ValueError, match="line 2.*sim.slots"):
        parse_scenario("sim.scheme = DT\nsim.slots = many\n")


def test_bad_scheme_lists_options():
    with pytest.raises(ValueError, match="PartNSD"):
        parse_scenario("sim.scheme = Hybrid\n")


def test_load_scenario(tmp_path):
    path = tmp_path / "case.cfg"
    path.write_text("seed.value = 9\nsource.rate_bps_hz = 4\n")
    sc = load_scenario(str(path))
    assert sc.seed_value == 9
    assert sc.source_rate_bps_hz == 4.0


def test_channel_builder_applies_scale():
    sc = Scenario(channel_energy_scale=5361.0)
    ch = sc.channel_params()
    assert ch.reference_gain == pytest.approx(1e-7, rel=1e-12)
    assert ch.noise_power == pytest.approx(5361.0e-14, rel=1e-12)


def test_geometry_density_from_count():
    sc = Scenario(cell_mt_count=50)
    assert sc.geometry().density == pytest.approx(50 / 10_000)


def test_source_breakdown_study_point():
    sc = Scenario(channel_energy_scale=5361.0)
    gain = sc.source_fading * path_gain(sc.channel_params(), 50.0)
    expected = sc.channel_params().noise_power / gain * (2.0 ** 6 - 1)
    cb = sc.source_breakdown()
    assert cb.direct_energy == pytest.approx(expected, rel=1e-12)
    assert cb.unit_cost == pytest.approx(0.9)  # 10 J of 100 J capacity
    assert cb.total_rate == 6.0


def test_source_breakdown_rejects_dead_fading():
    with pytest.raises(ValueError):
        Scenario(source_fading=0.0).source_breakdown()


def test_source_model_fields():
    sc = Scenario(source_mean_helpers=1.2315)
    model = sc.source_model()
    assert model.mean_helpers == 1.2315
    assert model.link_gain == pytest.approx(sc.source_link_gain())
    assert model.reservation == 0.2


def test_sim_config_override_scheme_and_slots():
    cfg = Scenario().sim_config(scheme="PartNSD", slots=7)
    assert cfg.scheme.value == "PartNSD"
    assert cfg.slots == 7
    assert cfg.mt_count == 100


def test_serializer_rejects_non_finite():
    import dataclasses
    sc = dataclasses.replace(Scenario(), source_rate_bps_hz=math.inf)
    with pytest.raises(ValueError):
        scenario_text(sc)
