"""
The full per-snapshot metric suite.
"""

__all__ = ["GraphMetrics", "NodeMetrics", "SnapshotAnalysis", "analyze_snapshot"]

from typing import Optional

import equinox as eqx
import jax.numpy as jnp
import numpy as np
from equinox import field

from ..coordinates import Region
from ..graph import Snapshot
from ..typing import IntVector, RealVector
from ._centrality import (
    ZonalBetweenness,
    _betweenness,
    _component_labels,
    _lobby_index,
    zonal_betweenness,
)
from ._clusters import ClusterReport, _biggest, _cluster_reports, _triangle_count
from ._communities import Partition, detect_communities
from ._degree import degree_histogram, degree_skewness, fit_powerlaw_exponent
from ._paths import (
    SeparationProfile,
    _avg_separation,
    _connected_pair_distances,
    _effective_diameter,
    _hop_distances,
    _separation_by_distance,
)


class NodeMetrics(eqx.Module, strict=True):
    """Per-node metrics of one snapshot.

    **Attributes:**

    `node_ids`: The nodes, in snapshot order.

    `degree`: Number of neighbors.

    `lobby`: Lobby index.

    `betweenness`: Normalised betweenness, absent when not computed.
    """

    node_ids: tuple[str, ...] = field(static=True, converter=tuple)
    degree: IntVector = field(converter=jnp.asarray)
    lobby: IntVector = field(converter=jnp.asarray)
    betweenness: Optional[RealVector] = None


class GraphMetrics(eqx.Module, strict=True):
    """Graph-level metrics of one snapshot. Undefined quantities are `None`.

    `cluster_count` counts the connected components holding at least one
    vehicle, so that roadside units only ever merge clusters. It falls back
    to `component_count`, the number of all components, when the snapshot
    has no vehicle. `median_vehicle_degree` is the median degree over the
    vehicles alone.
    """

    time: float = field(static=True)
    node_count: int = field(static=True)
    vehicle_count: int = field(static=True)
    rsu_count: int = field(static=True)
    edge_count: int = field(static=True)
    density: Optional[float] = field(static=True)
    effective_diameter: Optional[int] = field(static=True)
    diameter: Optional[int] = field(static=True)
    avg_separation: Optional[float] = field(static=True)
    triangle_count: int = field(static=True)
    cluster_count: int = field(static=True)
    component_count: int = field(static=True)
    mean_cluster_coefficient: Optional[float] = field(static=True)
    biggest_cluster: Optional[ClusterReport]
    degree_histogram: dict[int, int] = field(static=True)
    powerlaw_gamma: Optional[float] = field(static=True)
    mean_degree: Optional[float] = field(static=True)
    median_degree: Optional[float] = field(static=True)
    median_vehicle_degree: Optional[float] = field(static=True)
    degree_skewness: Optional[float] = field(static=True)
    mean_lobby: Optional[float] = field(static=True)
    max_lobby: Optional[int] = field(static=True)
    community_count: Optional[int] = field(static=True, default=None)
    modularity: Optional[float] = field(static=True, default=None)
    mean_betweenness: Optional[float] = field(static=True, default=None)
    max_betweenness: Optional[float] = field(static=True, default=None)


class SnapshotAnalysis(eqx.Module, strict=True):
    """Everything the suite computes for one snapshot."""

    graph: GraphMetrics
    nodes: NodeMetrics
    clusters: tuple[ClusterReport, ...]
    partition: Optional[Partition]
    separation: SeparationProfile
    zones: Optional[ZonalBetweenness]


def analyze_snapshot(
    snapshot: Snapshot,
    region: Optional[Region] = None,
    *,
    betweenness: bool = True,
    communities: bool = True,
    quantile: float = 0.9,
    k_min: int = 2,
    min_powerlaw_samples: int = 50,
    separation_bin_width: float = 100.0,
    zones_per_side: int = 8,
) -> SnapshotAnalysis:
    """Run every metric on a snapshot, sharing the adjacency and distance
    matrices between them.

    **Arguments:**

    `snapshot`: The communication graph.

    `region`: The region of study, for hull fractions and zonal betweenness.

    `betweenness`: Whether to compute betweenness centrality.

    `communities`: Whether to detect communities. Skipped without edges.
    """
    n = snapshot.n_nodes
    adjacency = snapshot.adjacency()
    distances = _hop_distances(snapshot)
    labels = _component_labels(snapshot)
    degrees = np.asarray(snapshot.degree())
    lobby = _lobby_index(adjacency)
    clusters = _cluster_reports(snapshot, labels, region)

    is_vehicle = snapshot.kind_mask("vehicle")
    vehicle_clusters = np.unique(labels[is_vehicle]).size
    coefficients = [c.coefficient for c in clusters if c.coefficient is not None]
    pairs = _connected_pair_distances(distances)

    bc = None
    zones = None
    if betweenness:
        bc = _betweenness(adjacency, distances, labels)
        if region is not None:
            zones = zonal_betweenness(snapshot, bc, region, zones_per_side)
    partition = None
    if communities and snapshot.n_edges > 0:
        partition = detect_communities(snapshot)

    graph = GraphMetrics(
        time=snapshot.time,
        node_count=n,
        vehicle_count=int(is_vehicle.sum()),
        rsu_count=int(n - is_vehicle.sum()),
        edge_count=snapshot.n_edges,
        density=None if n < 2 else snapshot.n_edges / (n * (n - 1) / 2),
        effective_diameter=_effective_diameter(distances, quantile),
        diameter=int(pairs.max()) if pairs.size > 0 else None,
        avg_separation=_avg_separation(distances),
        triangle_count=_triangle_count(adjacency),
        cluster_count=int(vehicle_clusters) if is_vehicle.any() else len(clusters),
        component_count=len(clusters),
        mean_cluster_coefficient=(
            float(np.mean(coefficients)) if coefficients else None
        ),
        biggest_cluster=_biggest(clusters) if clusters else None,
        degree_histogram=degree_histogram(degrees),
        powerlaw_gamma=fit_powerlaw_exponent(degrees, k_min, min_powerlaw_samples),
        mean_degree=float(degrees.mean()) if n > 0 else None,
        median_degree=float(np.median(degrees)) if n > 0 else None,
        median_vehicle_degree=(
            float(np.median(degrees[is_vehicle])) if is_vehicle.any() else None
        ),
        degree_skewness=degree_skewness(degrees),
        mean_lobby=float(jnp.mean(lobby)) if n > 0 else None,
        max_lobby=int(jnp.max(lobby)) if n > 0 else None,
        community_count=None if partition is None else partition.count,
        modularity=None if partition is None else partition.modularity,
        mean_betweenness=None if bc is None or n == 0 else float(jnp.mean(bc)),
        max_betweenness=None if bc is None or n == 0 else float(jnp.max(bc)),
    )
    return SnapshotAnalysis(
        graph=graph,
        nodes=NodeMetrics(snapshot.node_ids, degrees, lobby, bc),
        clusters=tuple(clusters),
        partition=partition,
        separation=_separation_by_distance(snapshot, distances, separation_bin_width),
        zones=zones,
    )
