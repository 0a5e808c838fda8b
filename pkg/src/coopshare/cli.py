"""Command line front end.

Three subcommands, one per experiment; each reads a scenario file, writes
the delimited output (and the simulator's event log) under the output
directory, and renders the matching figures unless --no-plot is given.
The output directory defaults to $COOPSHARE_OUT_DIR, then ./out.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from .cell_sim import Scheme
from .experiments import (
    SWEEP_SCHEMES,
    converge_rows,
    emit_csv,
    emit_events,
    simulate_rows,
    sweep_battery_rows,
)
from .scenario import Scenario, load_scenario

__all__ = ["main"]


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _load(args: argparse.Namespace) -> Scenario:
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed_value=args.seed)
    return scenario


def _out_dir(args: argparse.Namespace) -> str:
    out = args.out or os.environ.get("COOPSHARE_OUT_DIR") or "out"
    os.makedirs(out, exist_ok=True)
    return out


def _cmd_converge(args: argparse.Namespace) -> int:
    scenario = _load(args)
    out = _out_dir(args)
    rows = converge_rows(scenario)
    csv_path = os.path.join(out, "converge.csv")
    _write_text(csv_path, emit_csv(rows))
    print(f"wrote {csv_path}")
    if not args.no_plot:
        from . import report

        png_path = os.path.join(out, "converge.png")
        report.plot_converge(rows, png_path)
        print(f"wrote {png_path}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    scenario = _load(args)
    out = _out_dir(args)
    rows = sweep_battery_rows(scenario, reps=args.reps)
    csv_path = os.path.join(out, "battery_sweep.csv")
    _write_text(csv_path, emit_csv(rows))
    print(f"wrote {csv_path}")
    if not args.no_plot:
        from . import report

        png_path = os.path.join(out, "battery_sweep.png")
        report.plot_battery_sweep(rows, png_path)
        print(f"wrote {png_path}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    scenario = _load(args)
    out = _out_dir(args)
    if args.scheme == "all":
        schemes = list(SWEEP_SCHEMES)
    else:
        schemes = [Scheme(args.scheme)]
    rows, records = simulate_rows(scenario, schemes, seeds=args.seeds,
                                  slots=args.slots, with_events=not args.no_events)
    csv_path = os.path.join(out, "simulate.csv")
    _write_text(csv_path, emit_csv(rows))
    print(f"wrote {csv_path}")
    if not args.no_events:
        events_path = os.path.join(out, "simulate_events.ndjson")
        _write_text(events_path, emit_events(records))
        print(f"wrote {events_path}")
    if not args.no_plot:
        from . import report

        for name, renderer in (
            ("outage_counts.png", report.plot_outage_counts),
            ("battery_trace.png", report.plot_battery_trace),
            ("battery_histogram.png", report.plot_battery_histogram),
        ):
            png_path = os.path.join(out, name)
            renderer(rows, png_path)
            print(f"wrote {png_path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coopshare",
        description="Cooperative uplink cost experiments and cell simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", required=True, help="scenario file to run")
        p.add_argument("--out", default=None,
                       help="output directory (default: $COOPSHARE_OUT_DIR or ./out)")
        p.add_argument("--seed", type=int, default=None,
                       help="override the scenario's seed value")
        p.add_argument("--no-plot", action="store_true", help="skip figure rendering")

    p = sub.add_parser("converge", help="optimization trace for the study source")
    common(p)
    p.set_defaults(fn=_cmd_converge)

    p = sub.add_parser("sweep-battery", help="expected cost of all schemes vs battery level")
    common(p)
    p.add_argument("--reps", type=int, default=1000,
                   help="Monte Carlo repetitions for the informed schemes")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("simulate", help="multi-terminal slot simulation")
    common(p)
    p.add_argument("--scheme", default="all",
                   choices=["all"] + [s.value for s in Scheme],
                   help="scheme to run, or all five")
    p.add_argument("--seeds", type=int, default=1,
                   help="number of consecutive seeds to run")
    p.add_argument("--slots", type=int, default=None,
                   help="override the scenario's slot count")
    p.add_argument("--no-events", action="store_true", help="skip the event log")
    p.set_defaults(fn=_cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
