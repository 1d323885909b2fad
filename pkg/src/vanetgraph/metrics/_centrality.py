"""
Node centralities: betweenness and the lobby index.
"""

__all__ = [
    "ZonalBetweenness",
    "betweenness_centrality",
    "lobby_index",
    "zonal_betweenness",
]

import equinox as eqx
import jax.numpy as jnp
import numpy as np
from equinox import field
from jaxtyping import Array, Float
from scipy.sparse.csgraph import connected_components as _scipy_components

from ..coordinates import Region
from ..errors import DomainError
from ..graph import Snapshot
from ..typing import AdjacencyMatrix, IntVector, RealVector
from ._paths import _hop_distances


def _component_labels(snapshot: Snapshot) -> np.ndarray:
    if snapshot.n_nodes == 0:
        return np.zeros(0, dtype=np.int64)
    _, labels = _scipy_components(snapshot.sparse_adjacency(), directed=False)
    return labels


def _pair_dependencies(
    adjacency: AdjacencyMatrix, distances: Float[Array, "N N"]
) -> Float[Array, "N N"]:
    """Brandes dependencies `delta[s, v]` of every source on every node of a
    connected graph, accumulated level by level in matrix form."""
    max_level = int(distances.max())
    # Number of shortest paths from s to v, built outwards from the sources.
    sigma = (distances == 0).astype(adjacency.dtype)
    for level in range(1, max_level + 1):
        previous = jnp.where(distances == level - 1, sigma, 0.0)
        sigma = jnp.where(distances == level, previous @ adjacency, sigma)
    safe_sigma = jnp.where(sigma > 0, sigma, 1.0)
    delta = jnp.zeros_like(sigma)
    for level in range(max_level - 1, 0, -1):
        weight = jnp.where(distances == level + 1, (1.0 + delta) / safe_sigma, 0.0)
        delta = jnp.where(distances == level, sigma * (weight @ adjacency), delta)
    return delta


def _betweenness(
    adjacency: AdjacencyMatrix, distances: np.ndarray, labels: np.ndarray
) -> RealVector:
    n = adjacency.shape[0]
    scores = np.zeros(n)
    for label in np.unique(labels):
        members = np.flatnonzero(labels == label)
        size = members.size
        if size < 3:
            continue
        sub_adjacency = adjacency[np.ix_(members, members)]
        sub_distances = jnp.asarray(distances[np.ix_(members, members)])
        delta = _pair_dependencies(sub_adjacency, sub_distances)
        # Every unordered pair is counted once from each endpoint.
        raw = np.asarray(delta.sum(axis=0)) / 2.0
        scores[members] = raw / ((size - 1) * (size - 2) / 2.0)
    return jnp.asarray(scores)


def betweenness_centrality(snapshot: Snapshot) -> RealVector:
    """Normalised betweenness of every node.

    `BC_i` sums, over unordered pairs `j, k` of other nodes, the fraction of
    shortest `j`-`k` paths through `i`. It is normalised within the node's
    connected component of size `n_c` by `(n_c - 1)(n_c - 2) / 2`, and is zero
    in components of fewer than three nodes.
    """
    return _betweenness(
        snapshot.adjacency(), _hop_distances(snapshot), _component_labels(snapshot)
    )


def _lobby_index(adjacency: AdjacencyMatrix) -> IntVector:
    n = adjacency.shape[0]
    if n == 0:
        return jnp.zeros(0, dtype=int)
    degree = adjacency.sum(axis=1)
    neighbor_degrees = -jnp.sort(-(adjacency * degree[None, :]), axis=1)
    ranks = jnp.arange(1, n + 1)
    return jnp.sum(neighbor_degrees >= ranks[None, :], axis=1).astype(int)


def lobby_index(snapshot: Snapshot) -> IntVector:
    """The lobby index of every node: the largest `k` such that the node has
    at least `k` neighbors of degree at least `k`. Isolated nodes have 0.
    """
    return _lobby_index(snapshot.adjacency())


class ZonalBetweenness(eqx.Module, strict=True):
    """Betweenness aggregated over a square grid of zones of a region.
    Aggregates of several snapshots add up.

    **Attributes:**

    `bc_sum`: Sum of the node betweenness per zone, indexed `[ix, iy]`.

    `node_count`: Number of nodes per zone.
    """

    bc_sum: Float[Array, "Z Z"] = field(converter=jnp.asarray)
    node_count: Float[Array, "Z Z"] = field(converter=jnp.asarray)

    @property
    def mean(self) -> Float[Array, "Z Z"]:
        """Mean betweenness per zone, NaN in empty zones."""
        return jnp.where(
            self.node_count > 0,
            self.bc_sum / jnp.maximum(self.node_count, 1),
            jnp.nan,
        )

    def __add__(self, other: "ZonalBetweenness") -> "ZonalBetweenness":
        return ZonalBetweenness(
            self.bc_sum + other.bc_sum, self.node_count + other.node_count
        )


def zonal_betweenness(
    snapshot: Snapshot,
    betweenness: RealVector,
    region: Region,
    zones_per_side: int = 8,
) -> ZonalBetweenness:
    """Aggregate node betweenness over `zones_per_side ** 2` equal zones of a
    region. Nodes outside the region are ignored."""
    if zones_per_side < 1:
        raise DomainError(f"zones_per_side must be positive. Got {zones_per_side}.")
    positions = np.asarray(snapshot.positions).reshape(-1, 2)
    inside = np.asarray(region.contains(positions)).reshape(-1)
    x = (positions[:, 0] - region.x_min) / region.width * zones_per_side
    y = (positions[:, 1] - region.y_min) / region.height * zones_per_side
    ix = np.clip(np.floor(x).astype(np.int64), 0, zones_per_side - 1)[inside]
    iy = np.clip(np.floor(y).astype(np.int64), 0, zones_per_side - 1)[inside]
    bc_sum = np.zeros((zones_per_side, zones_per_side))
    counts = np.zeros((zones_per_side, zones_per_side))
    np.add.at(bc_sum, (ix, iy), np.asarray(betweenness)[inside])
    np.add.at(counts, (ix, iy), 1.0)
    return ZonalBetweenness(bc_sum, counts)
