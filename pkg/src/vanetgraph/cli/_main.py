"""
The `vgs` command-line entry point.
"""

__all__ = ["main"]

import argparse
import logging
import sys
from typing import Optional, Sequence

import jax

from ..errors import ConfigError, VanetGraphError
from ..simulator import COORDINATOR_MODES, PROTOCOLS
from ._commands import cmd_analyze, cmd_convert, cmd_links, cmd_route, cmd_synth
from ._config import ScenarioConfig


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="flat JSON configuration file")
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument("--trace", help="mobility trace file")
    parser.add_argument(
        "--trace-format", dest="trace_format", help="cartesian_csv or gps_csv"
    )
    parser.add_argument("--rsus", help="RSU catalogue file")
    parser.add_argument("--rsu-count", dest="rsu_count", type=int)
    parser.add_argument(
        "--range", dest="transmission_range", type=float, help="radio range in m"
    )
    parser.add_argument(
        "--los-mode", dest="los_mode", choices=("unit_disk", "manhattan_los")
    )
    parser.add_argument(
        "--penetration", help="comma-separated penetration ratios in (0, 1]"
    )
    parser.add_argument("--seed", type=int)
    parser.add_argument("--dt", type=float, help="snapshot tick in seconds")
    parser.add_argument("--window-start", dest="window_start", type=float)
    parser.add_argument("--window-length", dest="window_length", type=float)
    parser.add_argument("--workers", type=int)
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("-q", "--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vgs",
        description="Temporal VANET communication-graph analysis and routing.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="per-tick graph metrics")
    _add_common(analyze)
    analyze.add_argument("--stride", type=int, help="betweenness every K ticks")

    links = commands.add_parser("links", help="link-level statistics")
    _add_common(links)

    route = commands.add_parser("route", help="routing simulation")
    _add_common(route)
    route.add_argument("--protocol", choices=PROTOCOLS)
    route.add_argument("--gpcr-mode", dest="gpcr_mode", choices=COORDINATOR_MODES)
    route.add_argument("--lobby-threshold", dest="lobby_threshold", type=int)
    route.add_argument("--runs", type=int)
    route.add_argument("--senders", type=int)
    route.add_argument("--cbr-rate", dest="cbr_rate", type=float)
    route.add_argument("--ttl", type=float)
    route.add_argument(
        "--compare",
        action="store_const",
        const=True,
        help="run both VADD variants and compare their delays",
    )

    synth = commands.add_parser("synth", help="write a synthetic grid trace")
    _add_common(synth)

    convert = commands.add_parser("convert", help="clip and resample a trace")
    _add_common(convert)
    convert.add_argument("--dump-snapshots", dest="dump_snapshots")
    return parser


_NOT_CONFIG = {"command", "config", "out", "verbose", "quiet", "dump_snapshots"}


def _configure_logging(verbose: bool, quiet: bool):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return EXIT_OK if stop.code == 0 else EXIT_USAGE
    _configure_logging(args.verbose, args.quiet)
    jax.config.update("jax_enable_x64", True)

    overrides = {k: v for k, v in vars(args).items() if k not in _NOT_CONFIG}
    try:
        config = ScenarioConfig.from_sources(args.config, **overrides)
        if args.command == "analyze":
            cmd_analyze(config, args.out)
        elif args.command == "links":
            cmd_links(config, args.out)
        elif args.command == "route":
            cmd_route(config, args.out)
        elif args.command == "synth":
            cmd_synth(config, args.out)
        elif args.command == "convert":
            if config.trace is None:
                raise ConfigError("convert requires a trace", "trace")
            cmd_convert(config, args.out, args.dump_snapshots)
    except ConfigError as err:
        logger.error("Invalid configuration: %s", err)
        return EXIT_USAGE
    except (VanetGraphError, OSError) as err:
        logger.error("%s", err)
        return EXIT_RUNTIME
    return EXIT_OK
