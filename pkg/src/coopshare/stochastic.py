"""Deterministic randomness and cell sampling.

All randomness flows through ``Stream``, a PCG64 generator (numpy's named,
versioned bit generator) keyed by a seed plus an explicit stream key via
SeedSequence spawn keys.  Distinct keys give statistically independent
streams; the same (seed, key) reproduces the identical sequence on any
platform.  Platform-default generators are never used.

Every distribution is derived from the raw uniform stream by inverse
transforms (exponential via -log1p(-u), Poisson by CDF inversion), so a
sample sequence is pinned entirely by the uniform draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Stream",
    "RngSeed",
    "Role",
    "MtState",
    "CellGeometry",
    "helper_count_mean",
    "sample_poisson",
    "sample_cell",
]


class Stream:
    """Uniform random stream with inverse-transform samplers.

    seed
        Base integer seed shared by all streams of one experiment.
    key
        Tuple of non-negative integers naming this stream; distinct keys
        under the same seed are independent.
    """

    def __init__(self, seed: int, key: tuple[int, ...] = (0,)):
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.key)
        self._gen = np.random.Generator(np.random.PCG64(sequence))

    def uniform(self) -> float:
        """One draw from U[0, 1)."""
        return float(self._gen.random())

    def uniforms(self, count: int) -> np.ndarray:
        """A block of U[0, 1) draws."""
        return self._gen.random(count)

    def uniform_in(self, low: float, high: float) -> float:
        return low + (high - low) * self.uniform()

    def exponential(self) -> float:
        """Unit-mean exponential via the inverse CDF of one uniform."""
        return -math.log1p(-self.uniform())

    def exponentials(self, count: int) -> np.ndarray:
        return -np.log1p(-self.uniforms(count))

    def poisson(self, mean: float) -> int:
        """Poisson draw by CDF inversion of one uniform.

        Walks the probability mass upward from zero; suitable for the
        moderate means used here (hard cap guards against fp saturation).
        """
        if mean < 0 or not math.isfinite(mean):
            raise ValueError(f"mean must be finite and >= 0, got {mean!r}")
        u = self.uniform()
        pmf = math.exp(-mean)
        cdf = pmf
        n = 0
        cap = int(mean + 20.0 * math.sqrt(mean + 1.0) + 200.0)
        while u > cdf and n < cap:
            n += 1
            pmf *= mean / n
            cdf += pmf
        return n

    def pick_index(self, count: int) -> int:
        """Uniform index in [0, count)."""
        if count <= 0:
            raise ValueError(f"count must be > 0, got {count!r}")
        return min(int(self.uniform() * count), count - 1)


@dataclass(frozen=True)
class RngSeed:
    """Seed plus stream id; the unit of reproducibility for one run."""

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed!r}")
        if not 0 <= self.stream_id < 2 ** 64:
            raise ValueError(f"stream_id must fit in 64 bits, got {self.stream_id!r}")

    def stream(self, *subkey: int) -> Stream:
        """Open the stream (stream_id, *subkey) under this seed."""
        return Stream(self.seed, (self.stream_id, *subkey))


class Role(str, Enum):
    SOURCE = "source"
    IDLE = "idle"


@dataclass(frozen=True)
class MtState:
    """One terminal's sampled state: position, channel, battery, role."""

    x: float
    y: float
    distance: float
    fading: float
    battery: float
    role: Role


@dataclass(frozen=True)
class CellGeometry:
    """Rectangular cell with one base station and a homogeneous MT field.

    density
        Terminals per square meter (fixed-count runs derive it from the
        count over the area).
    traffic_prob
        Per-slot probability that a terminal turns source.
    src_range
        Short-range radius within which idle terminals can relay.
    """

    width: float
    height: float
    bs_x: float
    bs_y: float
    density: float
    traffic_prob: float
    src_range: float

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError("cell dimensions must be > 0")
        if not (0 <= self.bs_x <= self.width and 0 <= self.bs_y <= self.height):
            raise ValueError("base station must lie inside the cell")
        if self.density < 0:
            raise ValueError(f"density must be >= 0, got {self.density!r}")
        if not 0 <= self.traffic_prob <= 1:
            raise ValueError(f"traffic_prob must be in [0, 1], got {self.traffic_prob!r}")
        if self.src_range < 0:
            raise ValueError(f"src_range must be >= 0, got {self.src_range!r}")

    @property
    def area(self) -> float:
        return self.width * self.height


def helper_count_mean(geom: CellGeometry) -> float:
    """Mean number of idle terminals inside one source's short range."""
    return (1.0 - geom.traffic_prob) * geom.density * math.pi * geom.src_range ** 2


def sample_poisson(mean: float, stream: Stream) -> int:
    return stream.poisson(mean)


def sample_cell(geom: CellGeometry, battery_capacity: float, stream: Stream,
                count: int | None = None) -> list[MtState]:
    """Sample one slot's worth of terminals.

    Draw order is fixed for reproducibility: positions (x block then y
    block), roles, fading, batteries.  ``count`` pins the population size;
    without it the size is Poisson with the geometry's density over the
    area.
    """
    if battery_capacity <= 0:
        raise ValueError(f"battery_capacity must be > 0, got {battery_capacity!r}")
    if count is None:
        count = stream.poisson(geom.density * geom.area)
    elif count < 0:
        raise ValueError(f"count must be >= 0, got {count!r}")
    xs = stream.uniforms(count) * geom.width
    ys = stream.uniforms(count) * geom.height
    roles = stream.uniforms(count)
    fading = stream.exponentials(count)
    batteries = stream.uniforms(count) * battery_capacity
    terminals = []
    for k in range(count):
        distance = math.hypot(xs[k] - geom.bs_x, ys[k] - geom.bs_y)
        role = Role.SOURCE if roles[k] < geom.traffic_prob else Role.IDLE
        terminals.append(MtState(
            x=float(xs[k]), y=float(ys[k]), distance=distance,
            fading=float(fading[k]), battery=float(batteries[k]), role=role,
        ))
    return terminals
