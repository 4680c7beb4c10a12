"""Command-line entry point."""

from __future__ import annotations

import argparse
import sys

from .exceptions import ChannelCompatibilityError, ConfigError, LimitExceededError
from .experiments import MODES, ExperimentConfig, GridSpec, format_presets_table, presets, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphent",
        description="Entanglement of noisy qubit graph states via boundary reduction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run one experiment and write CSV + JSON reports")
    runp.add_argument("--preset", choices=sorted(presets()), help="start from a named preset")
    runp.add_argument("--graph", help="graph preset (chain:N, ring:N, star:N) or edge-list file")
    runp.add_argument("--partition", help="comma-separated labels or one-vs-rest:K (K may be 'mid')")
    runp.add_argument("--channel", help="channel spec, e.g. depol:p, ad:p, gad:0.5:p")
    runp.add_argument("--mode", choices=MODES)
    runp.add_argument("--p-grid", help="strength grid start:stop:count (default 0:1:51)")
    runp.add_argument("--theta-grid", help="angle grid start:stop:count; endpoints may use pi tokens")
    runp.add_argument("--jobs", type=int, help="parallelism degree (default 1)")
    runp.add_argument("--seed", type=int, help="seed for randomized modes (default 0)")
    runp.add_argument("--out", help="CSV output path (default experiment.csv or the preset's)")
    runp.add_argument("--plot", action="store_true", help="render a PNG figure next to the CSV")

    sub.add_parser("list-presets", help="print the preset table")
    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    if args.preset:
        config = presets()[args.preset]
    else:
        missing = [n for n in ("graph", "partition", "channel", "mode") if getattr(args, n) is None]
        if missing:
            raise ConfigError(f"missing required option(s) without --preset: {', '.join('--' + m for m in missing)}")
        config = ExperimentConfig(graph=args.graph, partition=args.partition, channel=args.channel, mode=args.mode)
    if args.graph:
        config.graph = args.graph
    if args.partition:
        config.partition = args.partition
    if args.channel:
        config.channel = args.channel
    if args.mode:
        config.mode = args.mode
    if args.p_grid:
        config.p_grid = GridSpec.parse(args.p_grid)
    if args.theta_grid:
        config.theta_grid = GridSpec.parse(args.theta_grid)
    if args.jobs is not None:
        config.jobs = args.jobs
    if args.seed is not None:
        config.seed = args.seed
    if args.out:
        config.out = args.out
    if args.plot:
        config.plot = True
    return config


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-presets":
            print(format_presets_table())
            return 0
        result = run(_config_from_args(args))
    except (ConfigError, ChannelCompatibilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LimitExceededError as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {result.csv_path} ({len(result.rows)} rows)")
    print(f"wrote {result.meta_path}")
    if result.plot_path:
        print(f"wrote {result.plot_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
