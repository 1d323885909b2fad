"""
Clusters: connected components, their clustering coefficient and their
geographic extent.
"""

__all__ = [
    "ClusterReport",
    "connected_components",
    "cluster_coefficient",
    "triangle_count",
    "biggest_cluster_report",
]

from typing import Optional, Sequence

import equinox as eqx
import jax.numpy as jnp
import numpy as np
from equinox import field
from scipy.spatial import ConvexHull

from ..coordinates import Region
from ..errors import DomainError
from ..graph import Snapshot
from ..typing import AdjacencyMatrix, IntVector
from ._centrality import _component_labels


class ClusterReport(eqx.Module, strict=True):
    """A connected group of nodes.

    **Attributes:**

    `member_ids`: Ids of the members, in node order.

    `member_indices`: Node indices of the members.

    `size`: Number of members.

    `edge_count`: Number of edges among the members.

    `coefficient`: Edge density `2|E_k| / (n(n-1))`, absent for singletons.

    `membership_fraction`: Members over all nodes of the snapshot.

    `hull_area`: Area of the convex hull of member positions in m².

    `hull_area_fraction`: `hull_area` over the region area, absent if no
    region was given.
    """

    member_ids: tuple[str, ...] = field(static=True, converter=tuple)
    member_indices: IntVector = field(converter=jnp.asarray)
    size: int = field(static=True)
    edge_count: int = field(static=True)
    coefficient: Optional[float] = field(static=True)
    membership_fraction: float = field(static=True)
    hull_area: float = field(static=True)
    hull_area_fraction: Optional[float] = field(static=True, default=None)


def _coefficient(size: int, edge_count: int) -> Optional[float]:
    if size < 2:
        return None
    return 2.0 * edge_count / (size * (size - 1))


def _hull_area(points: np.ndarray) -> float:
    """Convex hull area, zero for fewer than three distinct or for collinear
    points."""
    points = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if points.shape[0] < 3:
        return 0.0
    centered = points - points.mean(axis=0)
    scale = max(float(np.abs(centered).max()), 1.0)
    if np.linalg.matrix_rank(centered, tol=1e-9 * scale) < 2:
        return 0.0
    # In 2-D, the hull "volume" is its area.
    return float(ConvexHull(points).volume)


def _member_indices(snapshot: Snapshot, members: Sequence) -> np.ndarray:
    if len(members) > 0 and isinstance(members[0], str):
        index = snapshot.index()
        return np.asarray([index[m] for m in members], dtype=np.int64)
    return np.asarray(members, dtype=np.int64).reshape(-1)


def _internal_edges(snapshot: Snapshot, members: np.ndarray) -> int:
    mask = np.zeros(snapshot.n_nodes, dtype=bool)
    mask[members] = True
    edges = np.asarray(snapshot.edges).reshape(-1, 2)
    return int(np.sum(mask[edges[:, 0]] & mask[edges[:, 1]]))


def cluster_coefficient(members: Sequence, snapshot: Snapshot) -> Optional[float]:
    """The clustering coefficient `2|E_k| / (n(n-1))` of a group of nodes,
    given as ids or indices. Absent for a singleton."""
    indices = _member_indices(snapshot, members)
    return _coefficient(indices.size, _internal_edges(snapshot, indices))


def triangle_count(snapshot: Snapshot) -> int:
    """Number of unordered node triples that are pairwise linked."""
    return _triangle_count(snapshot.adjacency())


def _triangle_count(adjacency: AdjacencyMatrix) -> int:
    if adjacency.shape[0] < 3:
        return 0
    closed_walks = jnp.sum((adjacency @ adjacency) * adjacency)
    return int(round(float(closed_walks) / 6.0))


def _cluster_reports(
    snapshot: Snapshot, labels: np.ndarray, region: Optional[Region]
) -> list[ClusterReport]:
    n = snapshot.n_nodes
    if n == 0:
        return []
    edges = np.asarray(snapshot.edges).reshape(-1, 2)
    edge_counts = np.bincount(labels[edges[:, 0]], minlength=labels.max() + 1)
    positions = np.asarray(snapshot.positions)
    # Order clusters by their smallest node index.
    _, first = np.unique(labels, return_index=True)
    reports = []
    for label in labels[np.sort(first)]:
        members = np.flatnonzero(labels == label)
        area = _hull_area(positions[members])
        reports.append(
            ClusterReport(
                member_ids=tuple(snapshot.node_ids[i] for i in members),
                member_indices=members,
                size=int(members.size),
                edge_count=int(edge_counts[label]),
                coefficient=_coefficient(members.size, int(edge_counts[label])),
                membership_fraction=members.size / n,
                hull_area=area,
                hull_area_fraction=None if region is None else area / region.area,
            )
        )
    return reports


def connected_components(
    snapshot: Snapshot, region: Optional[Region] = None
) -> list[ClusterReport]:
    """The maximal connected groups of nodes, ordered by smallest member
    index.

    **Arguments:**

    `snapshot`: The communication graph.

    `region`: The region of study, used for `hull_area_fraction`.
    """
    return _cluster_reports(snapshot, _component_labels(snapshot), region)


def _biggest(reports: Sequence[ClusterReport]) -> ClusterReport:
    return min(reports, key=lambda r: (-r.size, min(r.member_ids)))


def biggest_cluster_report(snapshot: Snapshot, region: Region) -> ClusterReport:
    """The cluster with the most members. Ties go to the cluster holding the
    smallest node id."""
    if snapshot.n_nodes == 0:
        raise DomainError("The biggest cluster of an empty snapshot is undefined.")
    return _biggest(connected_components(snapshot, region))
