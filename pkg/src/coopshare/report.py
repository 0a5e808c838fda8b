"""Figure rendering for the experiment outputs.

Every renderer takes the rows an experiment produced and writes one PNG
next to the delimited output.  Rows from several seeds are averaged per
scheme and coordinate before plotting.
"""

from __future__ import annotations

from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .experiments import OutputRow

__all__ = [
    "plot_converge",
    "plot_battery_sweep",
    "plot_outage_counts",
    "plot_battery_trace",
    "plot_battery_histogram",
]

# one stable color per scheme across all figures
_COLORS = {
    "DT": "tab:red",
    "FullNSD": "tab:green",
    "FullSD": "tab:olive",
    "PartNSD": "tab:blue",
    "PartSD": "tab:purple",
}

_ORDER = ("DT", "PartNSD", "PartSD", "FullNSD", "FullSD")


def _series(rows: list[OutputRow], metric: str) -> dict[str, list[tuple[float, float]]]:
    """Seed-averaged (coordinate, value) series per scheme for one metric."""
    acc: dict[tuple[str, float], list[float]] = defaultdict(list)
    for row in rows:
        if row.metric == metric and row.coordinate is not None:
            acc[(row.scheme, row.coordinate)].append(row.value)
    grouped: dict[str, list[tuple[float, float]]] = defaultdict(list)
    for (scheme, coord), values in acc.items():
        grouped[scheme].append((coord, sum(values) / len(values)))
    for scheme in grouped:
        grouped[scheme].sort()
    return grouped


def _aggregate_mean(rows: list[OutputRow], metric: str) -> dict[str, float]:
    acc: dict[str, list[float]] = defaultdict(list)
    for row in rows:
        if row.metric == metric and row.coordinate is None:
            acc[row.scheme].append(row.value)
    return {scheme: sum(v) / len(v) for scheme, v in acc.items()}


def _ordered(schemes) -> list[str]:
    return [s for s in _ORDER if s in schemes] + sorted(set(schemes) - set(_ORDER))


def plot_converge(rows: list[OutputRow], path: str) -> None:
    series = _series(rows, "expected_cost")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    trace = series.get("PartSD", [])
    if trace:
        xs, ys = zip(*trace)
        ax.plot(xs, ys, marker="o", color=_COLORS["PartSD"], label="splittable (joint search)")
    flat = _aggregate_mean(rows, "expected_cost")
    if "PartNSD" in flat and trace:
        ax.axhline(flat["PartNSD"], linestyle="--", color=_COLORS["PartNSD"],
                   label="non-splittable (price only)")
    if "DT" in flat and trace:
        ax.axhline(flat["DT"], linestyle=":", color=_COLORS["DT"], label="direct")
    ax.set_xlabel("sub-routine executions")
    ax.set_ylabel("expected cost")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_battery_sweep(rows: list[OutputRow], path: str) -> None:
    series = _series(rows, "expected_cost")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for scheme in _ordered(series):
        xs, ys = zip(*series[scheme])
        ax.plot(xs, ys, marker="o", color=_COLORS.get(scheme), label=scheme)
    ax.set_xlabel("source battery level (J)")
    ax.set_ylabel("expected cost")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_outage_counts(rows: list[OutputRow], path: str) -> None:
    comm = _aggregate_mean(rows, "comm_outages")
    battery = _aggregate_mean(rows, "battery_outages")
    schemes = _ordered(set(comm) | set(battery))
    xs = range(len(schemes))
    width = 0.38
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.bar([x - width / 2 for x in xs], [comm.get(s, 0.0) for s in schemes],
           width, label="communications", color="tab:orange")
    ax.bar([x + width / 2 for x in xs], [battery.get(s, 0.0) for s in schemes],
           width, label="battery", color="tab:gray")
    ax.set_xticks(list(xs), schemes)
    ax.set_ylabel("outages (seed mean)")
    ax.grid(True, axis="y", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_battery_trace(rows: list[OutputRow], path: str) -> None:
    series = _series(rows, "avg_battery")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for scheme in _ordered(series):
        xs, ys = zip(*series[scheme])
        ax.plot(xs, ys, color=_COLORS.get(scheme), label=scheme)
    ax.set_xlabel("time slot")
    ax.set_ylabel("average battery level (J)")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_battery_histogram(rows: list[OutputRow], path: str) -> None:
    series = _series(rows, "battery_count")
    schemes = _ordered(series)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if schemes:
        edges = [coord for coord, _ in series[schemes[0]]]
        span = (edges[1] - edges[0]) if len(edges) > 1 else 1.0
        width = 0.8 * span / max(len(schemes), 1)
        for slot, scheme in enumerate(schemes):
            xs = [coord + width * (slot + 0.5) + 0.1 * span for coord, _ in series[scheme]]
            ys = [value for _, value in series[scheme]]
            ax.bar(xs, ys, width, color=_COLORS.get(scheme), label=scheme)
    ax.set_xlabel("battery level bin (J, lower edge)")
    ax.set_ylabel("terminals (seed mean)")
    ax.grid(True, axis="y", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
