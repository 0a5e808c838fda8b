"""Radio-layer math: decibel conversion, distance path gain, rate/energy closed forms.

Everything internal is linear SI (watts, joules, meters, bps/Hz).  Decibel
values are accepted only at the configuration boundary through
``from_decibels``.  The symbol duration is normalized to one, so transmit
energy per symbol and transmit power coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

__all__ = [
    "DEAD_LINK_GAIN",
    "ChannelParams",
    "LinkGain",
    "from_decibels",
    "path_gain",
    "energy_for_rate",
    "rate_for_energy",
]

# Channel power gains below this are treated as unusable links.
DEAD_LINK_GAIN = 1e-30


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class ChannelParams:
    """Large-scale propagation and noise model for one cell.

    path_loss_exponent
        Decay exponent of the distance law, must exceed 2.
    reference_distance
        Distance in meters below which the gain saturates.
    reference_gain
        Linear power gain at the reference distance, in (0, 1].
    noise_power
        Receiver noise power in watts.
    """

    path_loss_exponent: float
    reference_distance: float
    reference_gain: float
    noise_power: float

    def __post_init__(self) -> None:
        for name in ("path_loss_exponent", "reference_distance", "reference_gain", "noise_power"):
            _require_finite(name, getattr(self, name))
        if self.path_loss_exponent <= 2:
            raise ValueError(f"path_loss_exponent must be > 2, got {self.path_loss_exponent}")
        if self.reference_distance <= 0:
            raise ValueError(f"reference_distance must be > 0, got {self.reference_distance}")
        if not 0 < self.reference_gain <= 1:
            raise ValueError(f"reference_gain must be in (0, 1], got {self.reference_gain}")
        if self.noise_power <= 0:
            raise ValueError(f"noise_power must be > 0, got {self.noise_power}")


@dataclass(frozen=True)
class LinkGain:
    """Instantaneous channel of one link: large-scale gain times fading power."""

    large_scale: float
    fading: float

    def __post_init__(self) -> None:
        if self.large_scale < 0 or self.fading < 0:
            raise ValueError("link gain components must be non-negative")

    @property
    def gain(self) -> float:
        return self.fading * self.large_scale


def from_decibels(value_db: float, reference: Literal["dB", "dBm"] = "dB") -> float:
    """Convert a dB ratio to a linear ratio, or a dBm power to watts."""
    _require_finite("value_db", value_db)
    linear = 10.0 ** (value_db / 10.0)
    if reference == "dB":
        return linear
    if reference == "dBm":
        return linear * 1e-3
    raise ValueError(f"reference must be 'dB' or 'dBm', got {reference!r}")


def path_gain(params: ChannelParams, distance: float) -> float:
    """Distance-law power gain, flat inside the reference distance."""
    if distance < 0 or not math.isfinite(distance):
        raise ValueError(f"distance must be finite and >= 0, got {distance!r}")
    if distance <= params.reference_distance:
        return params.reference_gain
    return params.reference_gain * (distance / params.reference_distance) ** (-params.path_loss_exponent)


def energy_for_rate(rate: float, gain: float, noise_power: float) -> float:
    """Transmit energy per symbol sustaining ``rate`` bps/Hz over a link.

    Inverts the log2(1 + gain * energy / noise) rate law.  Raises on a dead
    link (gain at or below DEAD_LINK_GAIN) because no finite energy closes it.
    """
    if rate < 0:
        raise ValueError(f"rate must be >= 0, got {rate!r}")
    if gain <= DEAD_LINK_GAIN:
        raise ValueError(f"dead link: gain {gain!r} below usable threshold")
    if noise_power <= 0:
        raise ValueError(f"noise_power must be > 0, got {noise_power!r}")
    return noise_power / gain * (2.0 ** rate - 1.0)


def rate_for_energy(energy: float, gain: float, noise_power: float) -> float:
    """Achievable rate in bps/Hz when spending ``energy`` per symbol."""
    if energy < 0:
        raise ValueError(f"energy must be >= 0, got {energy!r}")
    if gain <= DEAD_LINK_GAIN:
        raise ValueError(f"dead link: gain {gain!r} below usable threshold")
    if noise_power <= 0:
        raise ValueError(f"noise_power must be > 0, got {noise_power!r}")
    return math.log2(1.0 + gain * energy / noise_power)
