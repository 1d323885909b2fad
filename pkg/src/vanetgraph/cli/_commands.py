"""
The pipelines behind the command-line subcommands.
"""

__all__ = [
    "Scenario",
    "cmd_analyze",
    "cmd_convert",
    "cmd_links",
    "cmd_route",
    "cmd_synth",
]

import logging
import os
from typing import Any, Iterator, Optional, Sequence

import numpy as np

from ..coordinates import Region
from ..errors import DomainError
from ..graph import Snapshot, make_radio_model, snapshot_series, window_ticks
from ..io import (
    format_number,
    read_rsus,
    read_trace,
    write_rsus,
    write_snapshot_dump,
    write_trace,
)
from ..links import (
    LinkTimeline,
    Pair,
    SummaryStats,
    build_link_timelines,
    link_stats,
    merge_link_timelines,
)
from ..metrics import analyze_snapshot
from ..mobility import (
    PenetrationSample,
    RsuSet,
    Trajectory,
    clip_and_resample,
    generate_grid_scenario,
    place_rsus,
    sample_penetration,
)
from ..simulator import (
    average_routing_stats,
    make_routing_protocol,
    routing_comparison,
    run_simulation,
)
from ._config import ScenarioConfig
from ._parallel import ordered_map, resolve_worker_count
from ._report import (
    METRIC_COLUMNS,
    ROUTING_COLUMNS,
    metric_row,
    routing_row,
    summarize_columns,
    summary_dict,
    write_csv,
    write_json,
    write_link_files,
    write_packets,
)


logger = logging.getLogger(__name__)


class Scenario:
    """The resampled mobility, study region and infrastructure of a
    configuration."""

    def __init__(self, config: ScenarioConfig, need_road_map: bool = False):
        self.config = config
        if config.trace is not None:
            raw = read_trace(config.trace, config.trace_format)
            if config.region is not None:
                self.region = Region(*config.region)
            else:
                self.region = _bounding_region(raw)
            self.trajectories = clip_and_resample(raw, self.region, config.dt)
            needed = (
                need_road_map
                or config.los_mode == "manhattan_los"
                or (config.rsu_count > 0 and config.rsu_placement == "intersections")
            )
            self.road_map = config.road_map(self.region) if needed else None
        else:
            grid = config.grid_scenario
            self.road_map = grid.road_map
            trajectories = generate_grid_scenario(grid)
            if config.region is not None:
                self.region = Region(*config.region)
                trajectories = clip_and_resample(trajectories, self.region, config.dt)
            else:
                self.region = grid.region
            self.trajectories = trajectories
        if not self.trajectories:
            raise DomainError("No vehicle of the trace enters the region.")
        self.rsus = self._load_rsus()
        self.model = make_radio_model(
            config.transmission_range, config.los_mode, self.road_map
        )

    def _load_rsus(self) -> RsuSet:
        config = self.config
        if config.rsus is not None:
            return read_rsus(config.rsus, self.region)
        if config.rsu_count > 0:
            at_junctions = config.rsu_placement == "intersections"
            road_map = self.road_map if at_junctions else None
            vehicle_ids = [tr.vehicle_id for tr in self.trajectories]
            return place_rsus(
                self.region,
                config.rsu_count,
                config.seed,
                road_map,
                vehicle_ids=vehicle_ids,
            )
        return RsuSet()

    @property
    def window(self) -> tuple[float, float]:
        config = self.config
        t_start = config.window_start
        if t_start is None:
            t_start = min(tr.start_time for tr in self.trajectories)
        if config.window_length is not None:
            return t_start, t_start + config.window_length
        t_end = max(tr.end_time for tr in self.trajectories)
        return t_start, t_end + 0.5 * config.dt

    def sample(self, ratio: float) -> PenetrationSample:
        ids = [tr.vehicle_id for tr in self.trajectories]
        return sample_penetration(ids, ratio, self.config.seed)

    def snapshots(
        self, ratio: float, window: Optional[tuple[float, float]] = None
    ) -> Iterator[Snapshot]:
        return snapshot_series(
            self.trajectories,
            self.rsus,
            self.sample(ratio),
            self.model,
            self.window if window is None else window,
            self.config.dt,
        )


def _bounding_region(trajectories: Sequence[Trajectory]) -> Region:
    positions = np.concatenate([np.asarray(tr.positions) for tr in trajectories])
    lo, hi = positions.min(axis=0), positions.max(axis=0)
    return Region(float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))


def ratio_directory(out: str | os.PathLike, ratio: float) -> str:
    directory = os.path.join(out, f"penetration_{format_number(ratio)}")
    os.makedirs(directory, exist_ok=True)
    return directory


def _analyze_tick(task: tuple[Snapshot, Region, bool, bool]) -> dict[str, Any]:
    snapshot, region, betweenness, communities = task
    analysis = analyze_snapshot(
        snapshot, region, betweenness=betweenness, communities=communities
    )
    graph = analysis.graph
    biggest = graph.biggest_cluster
    return {
        "row": metric_row(graph),
        "degrees": np.asarray(analysis.nodes.degree).tolist(),
        "histogram": sorted(graph.degree_histogram.items()),
        "communities": (
            None
            if analysis.partition is None
            else list(
                zip(analysis.partition.node_ids, np.asarray(analysis.partition.labels))
            )
        ),
        "biggest": None
        if biggest is None
        else (
            biggest.size,
            biggest.edge_count,
            biggest.coefficient,
            biggest.membership_fraction,
            biggest.hull_area,
            biggest.hull_area_fraction,
            ";".join(biggest.member_ids),
        ),
    }


def cmd_analyze(config: ScenarioConfig, out: str | os.PathLike) -> list[str]:
    """Per-tick metric series of every penetration ratio. Writes
    metrics.csv, degree_hist.csv, communities.csv, biggest_cluster.csv and
    summary.json under `<out>/penetration_<ratio>/`."""
    scenario = Scenario(config)
    workers = resolve_worker_count(config.workers)
    directories = []
    for ratio in config.penetration:
        directory = ratio_directory(out, ratio)
        tasks = [
            (
                s,
                scenario.region,
                config.betweenness and k % config.stride == 0,
                config.communities,
            )
            for k, s in enumerate(scenario.snapshots(ratio))
        ]
        logger.info(
            "Analysing %d snapshots at penetration %s.", len(tasks), ratio
        )
        results = ordered_map(_analyze_tick, tasks, workers)
        rows = [r["row"] for r in results]
        write_csv(os.path.join(directory, "metrics.csv"), METRIC_COLUMNS, rows)
        write_csv(
            os.path.join(directory, "degree_hist.csv"),
            ("t", "degree", "count"),
            (
                (r["row"]["t"], degree, count)
                for r in results
                for degree, count in r["histogram"]
            ),
        )
        write_csv(
            os.path.join(directory, "communities.csv"),
            ("t", "node_id", "community"),
            (
                (r["row"]["t"], node_id, int(label))
                for r in results
                if r["communities"] is not None
                for node_id, label in r["communities"]
            ),
        )
        write_csv(
            os.path.join(directory, "biggest_cluster.csv"),
            (
                "t",
                "size",
                "edge_count",
                "coefficient",
                "membership_fraction",
                "hull_area",
                "hull_area_fraction",
                "members",
            ),
            (
                (r["row"]["t"],) + r["biggest"]
                for r in results
                if r["biggest"] is not None
            ),
        )
        write_json(
            os.path.join(directory, "summary.json"),
            {
                "penetration": ratio,
                "ticks": len(rows),
                "window": list(scenario.window),
                "node_degree": summary_dict(
                    SummaryStats.of([d for r in results for d in r["degrees"]])
                ),
                "metrics": summarize_columns(rows, METRIC_COLUMNS[1:]),
            },
        )
        directories.append(directory)
    return directories


def _link_chunk(task) -> dict[Pair, LinkTimeline]:
    scenario_parts, window = task
    trajectories, rsus, sample, model, dt = scenario_parts
    return build_link_timelines(
        snapshot_series(trajectories, rsus, sample, model, window, dt)
    )


def _chunk_windows(
    window: tuple[float, float], dt: float, count: int
) -> list[tuple[float, float]]:
    """Split a window into `count` consecutive windows of whole ticks."""
    ticks = window_ticks(window[0], window[1], dt)
    chunks = [c for c in np.array_split(ticks, count) if c.size > 0]
    return [(float(c[0] * dt), float((c[-1] + 0.5) * dt)) for c in chunks]


def cmd_links(config: ScenarioConfig, out: str | os.PathLike) -> list[str]:
    """Link-level statistics of every penetration ratio. Writes links.csv,
    link_summary.csv and link_cdf.csv under `<out>/penetration_<ratio>/`.

    With several workers the window is split into consecutive ranges whose
    timelines are merged in order.
    """
    scenario = Scenario(config)
    workers = resolve_worker_count(config.workers)
    directories = []
    for ratio in config.penetration:
        directory = ratio_directory(out, ratio)
        parts = (
            scenario.trajectories,
            scenario.rsus,
            scenario.sample(ratio),
            scenario.model,
            config.dt,
        )
        windows = _chunk_windows(scenario.window, config.dt, workers)
        chunks = ordered_map(_link_chunk, [(parts, w) for w in windows], workers)
        timelines = chunks[0]
        for chunk in chunks[1:]:
            timelines = merge_link_timelines(timelines, chunk)
        logger.info(
            "Found %d linked pairs at penetration %s.", len(timelines), ratio
        )
        write_link_files(directory, link_stats(timelines))
        directories.append(directory)
    return directories


def _route_run(task) -> Any:
    snapshots, road_map, protocol, config, seed = task
    return run_simulation(
        snapshots,
        road_map,
        protocol,
        config.gpcr_mode,
        config.traffic(),
        seed,
        lobby_threshold=config.lobby_threshold,
        transmission_range=config.transmission_range,
        dt=config.dt,
    )


def cmd_route(config: ScenarioConfig, out: str | os.PathLike) -> list[str]:
    """Routing runs over `config.runs` seeds for every penetration ratio.
    Writes routing_runs.csv, one packets file per run and
    routing_summary.json under `<out>/penetration_<ratio>/`.

    With `config.compare`, both VADD variants run on the same seeds and the
    summary reports the delay improvement of the enhanced one.
    """
    need_map = config.compare or config.protocol.startswith("vadd")
    scenario = Scenario(config, need_road_map=need_map)
    workers = resolve_worker_count(config.workers)
    protocols = (
        ["vadd_baseline", "vadd_enhanced"] if config.compare else [config.protocol]
    )
    for protocol in protocols:
        make_routing_protocol(
            protocol,
            road_map=scenario.road_map,
            transmission_range=config.transmission_range,
            gpcr_mode=config.gpcr_mode,
            lobby_threshold=config.lobby_threshold,
        )
    seeds = [config.seed + run for run in range(config.runs)]
    directories = []
    for ratio in config.penetration:
        directory = ratio_directory(out, ratio)
        snapshots = list(scenario.snapshots(ratio))
        tasks = [
            (snapshots, scenario.road_map, protocol, config, seed)
            for protocol in protocols
            for seed in seeds
        ]
        results = ordered_map(_route_run, tasks, workers)
        rows = []
        summary: dict[str, Any] = {"penetration": ratio, "runs": config.runs}
        by_protocol = {}
        for p, protocol in enumerate(protocols):
            runs = results[p * len(seeds) : (p + 1) * len(seeds)]
            by_protocol[protocol] = [r.stats for r in runs]
            for run, result in enumerate(runs):
                rows.append(routing_row(str(run), result.seed, protocol, result.stats))
                name = (
                    f"packets_{protocol}_run{run}.csv"
                    if config.compare
                    else f"packets_run{run}.csv"
                )
                write_packets(os.path.join(directory, name), result.packets)
            mean = average_routing_stats(by_protocol[protocol])
            rows.append(routing_row("mean", None, protocol, mean))
            summary[protocol] = {
                key: value
                for key, value in routing_row("mean", None, protocol, mean).items()
                if key not in ("run", "seed", "protocol")
            }
        if config.compare:
            comparison = routing_comparison(
                by_protocol["vadd_enhanced"], by_protocol["vadd_baseline"]
            )
            summary["comparison"] = {
                "delay_deltas": list(comparison.delay_deltas),
                "mean_delta": comparison.mean_delta,
                "relative_improvement": comparison.relative_improvement,
            }
        write_csv(os.path.join(directory, "routing_runs.csv"), ROUTING_COLUMNS, rows)
        write_json(os.path.join(directory, "routing_summary.json"), summary)
        directories.append(directory)
    return directories


def cmd_synth(config: ScenarioConfig, out: str | os.PathLike) -> str:
    """Write the synthetic grid scenario of `config` to `<out>/trace.csv`,
    and its synthetic RSUs to `<out>/rsus.csv` when `rsu_count` is set."""
    os.makedirs(out, exist_ok=True)
    grid = config.grid_scenario
    trajectories = generate_grid_scenario(grid)
    path = os.path.join(out, "trace.csv")
    with open(path, "w", encoding="utf-8", newline="") as stream:
        write_trace(trajectories, stream)
    if config.rsu_count > 0:
        road_map = grid.road_map if config.rsu_placement == "intersections" else None
        rsus = place_rsus(
            grid.region,
            config.rsu_count,
            config.seed,
            road_map,
            vehicle_ids=[tr.vehicle_id for tr in trajectories],
        )
        with open(os.path.join(out, "rsus.csv"), "w", encoding="utf-8") as stream:
            write_rsus(rsus, stream)
    logger.info("Wrote %d trajectories to %s.", len(trajectories), path)
    return path


def cmd_convert(
    config: ScenarioConfig,
    out: str | os.PathLike,
    dump_snapshots: Optional[str | os.PathLike] = None,
) -> str:
    """Clip and resample the configured trace to the region and tick, write
    it as `<out>/trace.csv`, and optionally dump the snapshots of the first
    penetration ratio, one file per tick."""
    os.makedirs(out, exist_ok=True)
    scenario = Scenario(config)
    path = os.path.join(out, "trace.csv")
    with open(path, "w", encoding="utf-8", newline="") as stream:
        write_trace(scenario.trajectories, stream)
    if dump_snapshots is not None:
        os.makedirs(dump_snapshots, exist_ok=True)
        count = 0
        for snapshot in scenario.snapshots(config.penetration[0]):
            name = f"snapshot_{format_number(snapshot.time)}.txt"
            with open(os.path.join(dump_snapshots, name), "w", encoding="utf-8") as f:
                write_snapshot_dump(snapshot, f)
            count += 1
        logger.info("Dumped %d snapshots to %s.", count, dump_snapshots)
    return path
