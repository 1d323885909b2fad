"""
CSV and JSON result files.
"""

__all__ = ["METRIC_COLUMNS"]

import csv
import json
import math
import os
from typing import Any, Iterable, Mapping, Optional, Sequence

import numpy as np

from ..io import format_number
from ..links import QUANTITIES, LinkStats, SummaryStats
from ..metrics import GraphMetrics
from ..simulator import DROP_REASONS, PacketRecord, RoutingStats


METRIC_COLUMNS = (
    "t",
    "node_count",
    "vehicle_count",
    "rsu_count",
    "edge_count",
    "density",
    "effective_diameter",
    "diameter",
    "avg_separation",
    "triangle_count",
    "cluster_count",
    "component_count",
    "mean_cluster_coefficient",
    "biggest_cluster_size",
    "biggest_cluster_fraction",
    "biggest_cluster_coefficient",
    "biggest_cluster_hull_fraction",
    "mean_degree",
    "median_degree",
    "median_vehicle_degree",
    "degree_skewness",
    "powerlaw_gamma",
    "mean_lobby",
    "max_lobby",
    "community_count",
    "modularity",
    "mean_betweenness",
    "max_betweenness",
)

ROUTING_COLUMNS = (
    "run",
    "seed",
    "protocol",
    "created",
    "delivered",
    "dropped",
    "in_flight",
    "delivery_rate",
    "mean_delay",
    "median_delay",
    "mean_hops",
) + tuple(f"dropped_{reason}" for reason in DROP_REASONS)

PACKET_COLUMNS = (
    "packet_id",
    "src",
    "dst",
    "created_t",
    "delivered_t",
    "hops",
    "drop_reason",
)


def metric_row(graph: GraphMetrics) -> dict[str, Any]:
    """The metrics.csv row of one snapshot."""
    row = {name: getattr(graph, name, None) for name in METRIC_COLUMNS}
    row["t"] = graph.time
    biggest = graph.biggest_cluster
    if biggest is not None:
        row["biggest_cluster_size"] = biggest.size
        row["biggest_cluster_fraction"] = biggest.membership_fraction
        row["biggest_cluster_coefficient"] = biggest.coefficient
        row["biggest_cluster_hull_fraction"] = biggest.hull_area_fraction
    return row


def _cell(value: Any) -> str:
    if isinstance(value, str):
        return value
    return format_number(value)


def write_csv(
    path: str | os.PathLike,
    columns: Sequence[str],
    rows: Iterable[Mapping[str, Any] | Sequence[Any]],
):
    """Write rows, given as mappings or sequences, under a header."""
    with open(path, "w", newline="", encoding="utf-8") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            if isinstance(row, Mapping):
                row = [row.get(name) for name in columns]
            writer.writerow([_cell(value) for value in row])


def _json_safe(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_json(path: str | os.PathLike, payload: Mapping[str, Any]):
    with open(path, "w", encoding="utf-8") as stream:
        json.dump(_json_safe(payload), stream, indent=2)
        stream.write("\n")


def summary_dict(stats: SummaryStats) -> dict[str, Optional[float]]:
    return {
        "count": stats.count,
        "min": stats.min,
        "max": stats.max,
        "mean": stats.mean,
        "median": stats.median,
    }


def summarize_columns(
    rows: Sequence[Mapping[str, Any]], columns: Sequence[str]
) -> dict[str, dict[str, Optional[float]]]:
    """Min, max, mean and median of every column over the rows where it is
    present."""
    return {
        name: summary_dict(
            SummaryStats.of([row[name] for row in rows if row.get(name) is not None])
        )
        for name in columns
    }


def _joined(values: Sequence[float]) -> str:
    return ";".join(format_number(v) for v in values)


def write_link_files(directory: str | os.PathLike, stats: LinkStats):
    """links.csv, link_summary.csv and link_cdf.csv."""
    write_csv(
        os.path.join(directory, "links.csv"),
        (
            "node_a",
            "node_b",
            "kind_a",
            "kind_b",
            "period_count",
            "durations",
            "rehealings",
        ),
        (
            (
                p.pair[0],
                p.pair[1],
                p.kinds[0],
                p.kinds[1],
                p.period_count,
                _joined(p.durations),
                _joined(p.rehealings),
            )
            for p in stats.pairs
        ),
    )
    summary_rows = []
    groups = [("all", stats.aggregates)] + list(stats.class_aggregates.items())
    for link_class, aggregates in groups:
        for quantity in QUANTITIES:
            row = summary_dict(aggregates[quantity])
            row.update(quantity=quantity, link_class=link_class)
            summary_rows.append(row)
    write_csv(
        os.path.join(directory, "link_summary.csv"),
        ("quantity", "link_class", "count", "min", "max", "mean", "median"),
        summary_rows,
    )
    cdf_rows = []
    for quantity in QUANTITIES:
        support, fraction = stats.cdf(quantity)
        cdf_rows.extend(
            (quantity, float(v), float(f))
            for v, f in zip(np.asarray(support), np.asarray(fraction))
        )
    write_csv(
        os.path.join(directory, "link_cdf.csv"),
        ("quantity", "value", "cum_fraction"),
        cdf_rows,
    )


def routing_row(
    run: str, seed: Optional[int], protocol: str, stats: RoutingStats
) -> dict[str, Any]:
    row = {
        "run": run,
        "seed": seed,
        "protocol": protocol,
        "created": stats.created,
        "delivered": stats.delivered,
        "dropped": stats.dropped,
        "in_flight": stats.in_flight,
        "delivery_rate": stats.delivery_rate,
        "mean_delay": stats.mean_delay,
        "median_delay": stats.median_delay,
        "mean_hops": stats.mean_hops,
    }
    for reason in DROP_REASONS:
        row[f"dropped_{reason}"] = stats.drops_by_reason[reason]
    return row


def write_packets(path: str | os.PathLike, packets: Sequence[PacketRecord]):
    write_csv(
        path,
        PACKET_COLUMNS,
        (
            (
                p.packet_id,
                p.src,
                p.dst,
                p.created_t,
                p.delivered_t,
                p.hop_count,
                p.drop_reason or "",
            )
            for p in packets
        ),
    )
