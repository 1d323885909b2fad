"""
Community detection by greedy modularity maximisation.
"""

__all__ = [
    "CommunityBalance",
    "Partition",
    "community_balance",
    "detect_communities",
    "modularity",
]

from typing import Sequence

import equinox as eqx
import jax
import jax.numpy as jnp
import networkx as nx
import numpy as np
from equinox import field
from jaxtyping import ArrayLike
from networkx.algorithms.community import greedy_modularity_communities

from ..errors import DomainError, ValidationError
from ..graph import Snapshot
from ..typing import AdjacencyMatrix, IntVector


class Partition(eqx.Module, strict=True):
    """An assignment of every node to exactly one community.

    **Attributes:**

    `node_ids`: The nodes, in snapshot order.

    `labels`: Community label per node. Labels are `0 .. count - 1`, ordered
    by the smallest node index of each community.

    `modularity`: The modularity `Q` of the partition.
    """

    node_ids: tuple[str, ...] = field(static=True, converter=tuple)
    labels: IntVector = field(converter=jnp.asarray)
    modularity: float = field(static=True)

    def __check_init__(self):
        if self.labels.shape != (len(self.node_ids),):
            raise ValidationError("A partition must label every node exactly once.")

    @property
    def count(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size > 0 else 0

    def communities(self) -> list[tuple[str, ...]]:
        """The member ids of every community, by label."""
        labels = np.asarray(self.labels)
        return [
            tuple(self.node_ids[i] for i in np.flatnonzero(labels == c))
            for c in range(self.count)
        ]


def _canonical_labels(labels: ArrayLike) -> np.ndarray:
    """Relabel communities `0 .. c-1` in order of their smallest member."""
    labels = np.asarray(labels).reshape(-1)
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(first.size, dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(first.size)
    return rank[inverse.reshape(-1)]


def _modularity(adjacency: AdjacencyMatrix, labels: np.ndarray) -> float:
    degree = adjacency.sum(axis=1)
    two_m = float(degree.sum())
    if two_m == 0:
        raise DomainError("Modularity is undefined for a graph without edges.")
    labels = _canonical_labels(labels)
    membership = jax.nn.one_hot(labels, int(labels.max()) + 1, dtype=adjacency.dtype)
    intra = jnp.trace(membership.T @ adjacency @ membership)
    community_degree = membership.T @ degree
    return float((intra - community_degree @ community_degree / two_m) / two_m)


def modularity(snapshot: Snapshot, partition: Partition | Sequence[int]) -> float:
    """The modularity
    `Q = (1/2m) sum_ij [A_ij - D_i D_j / 2m] delta(c_i, c_j)` of a partition,
    given as a `Partition` or as one label per node.
    """
    labels = partition.labels if isinstance(partition, Partition) else partition
    labels = np.asarray(labels).reshape(-1)
    if labels.size != snapshot.n_nodes:
        raise ValidationError(
            f"The partition labels {labels.size} nodes, the snapshot has "
            f"{snapshot.n_nodes}."
        )
    if snapshot.n_edges == 0:
        raise DomainError("Modularity is undefined for a graph without edges.")
    return _modularity(snapshot.adjacency(), labels)


def _as_networkx(n: int, edges: np.ndarray) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(edges.tolist())
    return graph


def detect_communities(snapshot: Snapshot) -> Partition:
    """Communities by fast greedy modularity maximisation.

    Starting from singletons, the pair of linked communities with the largest
    modularity gain is merged for as long as the gain is positive. Isolated
    nodes stay singletons.
    """
    n = snapshot.n_nodes
    if snapshot.n_edges == 0:
        raise DomainError("Communities are undefined for a graph without edges.")
    edges = np.asarray(snapshot.edges, dtype=np.int64).reshape(-1, 2)
    groups = greedy_modularity_communities(_as_networkx(n, edges))
    labels = np.empty(n, dtype=np.int64)
    for label, members in enumerate(groups):
        labels[list(members)] = label
    labels = _canonical_labels(labels)
    return Partition(
        snapshot.node_ids, labels, _modularity(snapshot.adjacency(), labels)
    )


class CommunityBalance(eqx.Module, strict=True):
    """Degree balance of one community: the sum of member degrees toward
    other members against the sum toward the rest of the graph."""

    label: int = field(static=True)
    size: int = field(static=True)
    intra_degree: int = field(static=True)
    inter_degree: int = field(static=True)

    @property
    def is_dense(self) -> bool:
        return self.intra_degree > self.inter_degree


def community_balance(
    snapshot: Snapshot, partition: Partition
) -> list[CommunityBalance]:
    """Check every community for more internal than external degree."""
    labels = np.asarray(partition.labels)
    edges = np.asarray(snapshot.edges).reshape(-1, 2)
    count = partition.count
    same = labels[edges[:, 0]] == labels[edges[:, 1]]
    intra = 2 * np.bincount(labels[edges[same, 0]], minlength=count)
    cut = edges[~same]
    inter = np.bincount(labels[cut[:, 0]], minlength=count) + np.bincount(
        labels[cut[:, 1]], minlength=count
    )
    sizes = np.bincount(labels, minlength=count)
    return [
        CommunityBalance(c, int(sizes[c]), int(intra[c]), int(inter[c]))
        for c in range(count)
    ]
