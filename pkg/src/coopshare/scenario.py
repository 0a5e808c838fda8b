"""Scenario files: flat ``key = value`` text with dotted key names.

A scenario fixes everything an experiment needs: radio constants, the cost
model, cell layout, the single-source study point, simulator settings, the
optimizer knobs and the seed.  Every key has a default, so a file only
states what it changes; unknown or duplicate keys are hard errors so typos
cannot silently fall back to defaults.

``channel.energy_scale`` multiplies the noise power after the dBm
conversion.  Energies scale linearly with noise power, so this one knob
rescales all transmit energies into the joule range where battery levels,
the per-slot cap and the cost constants interact; rates are unaffected
because energy and noise scale together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .cell_sim import Scheme, SimConfig
from .channel import ChannelParams, from_decibels, path_gain
from .economics import CostBreakdown, EconParams, breakdown_for_split, unit_energy_cost
from .partial_coop import AlgorithmConfig, UncertaintyModel
from .stochastic import CellGeometry, RngSeed

__all__ = [
    "Scenario",
    "parse_scenario",
    "load_scenario",
    "scenario_text",
]


def _scheme_name(value: str) -> str:
    try:
        return Scheme(value).value
    except ValueError:
        options = ", ".join(s.value for s in Scheme)
        raise ValueError(f"unknown scheme {value!r}, expected one of: {options}") from None


# key in the file -> (attribute, converter); order here is the file order.
_FIELDS: dict[str, tuple[str, type | object]] = {
    "channel.path_loss_exponent": ("channel_path_loss_exponent", float),
    "channel.reference_distance_m": ("channel_reference_distance_m", float),
    "channel.reference_gain_db": ("channel_reference_gain_db", float),
    "channel.noise_dbm": ("channel_noise_dbm", float),
    "channel.energy_scale": ("channel_energy_scale", float),
    "econ.battery_capacity_j": ("econ_battery_capacity_j", float),
    "econ.max_unit_cost": ("econ_max_unit_cost", float),
    "econ.reservation_utility": ("econ_reservation_utility", float),
    "econ.mode_threshold": ("econ_mode_threshold", float),
    "cell.width_m": ("cell_width_m", float),
    "cell.height_m": ("cell_height_m", float),
    "cell.bs_x_m": ("cell_bs_x_m", float),
    "cell.bs_y_m": ("cell_bs_y_m", float),
    "cell.traffic_prob": ("cell_traffic_prob", float),
    "cell.src_range_m": ("cell_src_range_m", float),
    "cell.mt_count": ("cell_mt_count", int),
    "source.distance_m": ("source_distance_m", float),
    "source.fading": ("source_fading", float),
    "source.battery_j": ("source_battery_j", float),
    "source.rate_bps_hz": ("source_rate_bps_hz", float),
    "source.mean_helpers": ("source_mean_helpers", float),
    "sim.slots": ("sim_slots", int),
    "sim.scheme": ("sim_scheme", _scheme_name),
    "sim.peak_energy_j": ("sim_peak_energy_j", float),
    "sim.rate_bps_hz": ("sim_rate_bps_hz", float),
    "sim.overlap_retries": ("sim_overlap_retries", int),
    "alg.price_tol": ("alg_price_tol", float),
    "alg.rate_tol": ("alg_rate_tol", float),
    "alg.cost_tol": ("alg_cost_tol", float),
    "alg.probe_offset": ("alg_probe_offset", float),
    "alg.max_outer": ("alg_max_outer", int),
    "alg.poisson_tail": ("alg_poisson_tail", float),
    "seed.value": ("seed_value", int),
    "seed.stream": ("seed_stream", int),
}

_ATTR_TO_KEY = {attr: key for key, (attr, _) in _FIELDS.items()}


@dataclass(frozen=True)
class Scenario:
    """One fully resolved scenario; see _FIELDS for the file spelling."""

    channel_path_loss_exponent: float = 3.6
    channel_reference_distance_m: float = 10.0
    channel_reference_gain_db: float = -70.0
    channel_noise_dbm: float = -110.0
    channel_energy_scale: float = 1.0
    econ_battery_capacity_j: float = 100.0
    econ_max_unit_cost: float = 1.0
    econ_reservation_utility: float = 0.2
    econ_mode_threshold: float = 1.0
    cell_width_m: float = 100.0
    cell_height_m: float = 100.0
    cell_bs_x_m: float = 50.0
    cell_bs_y_m: float = 50.0
    cell_traffic_prob: float = 0.2
    cell_src_range_m: float = 7.0
    cell_mt_count: int = 100
    source_distance_m: float = 50.0
    source_fading: float = 0.5
    source_battery_j: float = 10.0
    source_rate_bps_hz: float = 6.0
    source_mean_helpers: float = 1.2
    sim_slots: int = 300
    sim_scheme: str = "DT"
    sim_peak_energy_j: float = 3.0
    sim_rate_bps_hz: float = 6.0
    sim_overlap_retries: int = 20
    alg_price_tol: float = 1e-4
    alg_rate_tol: float = 1e-4
    alg_cost_tol: float = 1e-6
    alg_probe_offset: float = 0.01
    alg_max_outer: int = 50
    alg_poisson_tail: float = 1e-12
    seed_value: int = 1
    seed_stream: int = 0

    # builders for the typed parameter objects

    def channel_params(self) -> ChannelParams:
        return ChannelParams(
            path_loss_exponent=self.channel_path_loss_exponent,
            reference_distance=self.channel_reference_distance_m,
            reference_gain=from_decibels(self.channel_reference_gain_db, "dB"),
            noise_power=from_decibels(self.channel_noise_dbm, "dBm") * self.channel_energy_scale,
        )

    def econ_params(self) -> EconParams:
        return EconParams(
            battery_capacity=self.econ_battery_capacity_j,
            max_unit_cost=self.econ_max_unit_cost,
            reservation_utility=self.econ_reservation_utility,
            mode_threshold=self.econ_mode_threshold,
        )

    def geometry(self) -> CellGeometry:
        area = self.cell_width_m * self.cell_height_m
        return CellGeometry(
            width=self.cell_width_m,
            height=self.cell_height_m,
            bs_x=self.cell_bs_x_m,
            bs_y=self.cell_bs_y_m,
            density=self.cell_mt_count / area,
            traffic_prob=self.cell_traffic_prob,
            src_range=self.cell_src_range_m,
        )

    def algorithm_config(self) -> AlgorithmConfig:
        return AlgorithmConfig(
            price_tol=self.alg_price_tol,
            rate_tol=self.alg_rate_tol,
            cost_tol=self.alg_cost_tol,
            probe_offset=self.alg_probe_offset,
            max_outer=self.alg_max_outer,
            poisson_tail=self.alg_poisson_tail,
        )

    def rng_seed(self, stream: int | None = None) -> RngSeed:
        return RngSeed(self.seed_value, self.seed_stream if stream is None else stream)

    def sim_config(self, scheme: str | None = None, slots: int | None = None,
                   seed: RngSeed | None = None) -> SimConfig:
        return SimConfig(
            slots=self.sim_slots if slots is None else slots,
            scheme=Scheme(self.sim_scheme if scheme is None else scheme),
            mt_count=self.cell_mt_count,
            peak_energy=self.sim_peak_energy_j,
            rate=self.sim_rate_bps_hz,
            overlap_retries=self.sim_overlap_retries,
            geometry=self.geometry(),
            econ=self.econ_params(),
            channel=self.channel_params(),
            alg=self.algorithm_config(),
            seed=self.rng_seed() if seed is None else seed,
        )

    # single-source study point

    def source_link_gain(self) -> float:
        """Large-scale gain of the study source; fading multiplies on top."""
        return path_gain(self.channel_params(), self.source_distance_m)

    def source_breakdown(self, battery: float | None = None) -> CostBreakdown:
        """Direct-transmission breakdown of the study source at full rate."""
        ch = self.channel_params()
        econ = self.econ_params()
        level = self.source_battery_j if battery is None else battery
        zeta = unit_energy_cost(level, econ)
        gain = self.source_fading * self.source_link_gain()
        if gain <= 0:
            raise ValueError("study source has no usable link (fading is zero)")
        rate = self.source_rate_bps_hz
        direct = ch.noise_power / gain * (2.0 ** rate - 1.0)
        return breakdown_for_split(zeta, direct, rate, rate, econ.reservation_utility)

    def source_model(self) -> UncertaintyModel:
        return UncertaintyModel(
            mean_helpers=self.source_mean_helpers,
            max_unit_cost=self.econ_max_unit_cost,
            link_gain=self.source_link_gain(),
            noise_power=self.channel_params().noise_power,
            reservation=self.econ_reservation_utility,
        )


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text; '#' starts a comment, blank lines are skipped."""
    values: dict[str, object] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"line {number}: expected 'key = value', got {raw.strip()!r}")
        key = key.strip()
        value = value.strip()
        if key not in _FIELDS:
            raise ValueError(f"line {number}: unknown key {key!r}")
        attr, convert = _FIELDS[key]
        if attr in values:
            raise ValueError(f"line {number}: duplicate key {key!r}")
        try:
            values[attr] = convert(value)
        except ValueError as exc:
            raise ValueError(f"line {number}: bad value for {key!r}: {exc}") from None
    return Scenario(**values)


def load_scenario(path: str) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def scenario_text(scenario: Scenario) -> str:
    """Serialize with every key stated; parse(scenario_text(s)) == s."""
    lines = []
    for f in fields(scenario):
        key = _ATTR_TO_KEY[f.name]
        value = getattr(scenario, f.name)
        if isinstance(value, float):
            rendered = repr(value)
            if not math.isfinite(value):
                raise ValueError(f"{key} is not finite")
        else:
            rendered = str(value)
        lines.append(f"{key} = {rendered}")
    return "\n".join(lines) + "\n"
