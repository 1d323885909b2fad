"""
The graph information every node broadcasts at each tick.
"""

__all__ = ["GraphBeacon", "compute_beacons"]

import equinox as eqx
import jax.numpy as jnp
import numpy as np
from equinox import field

from ..graph import Snapshot
from ..metrics import connected_components, lobby_index
from ..typing import IntVector, PlanarCoords, RealVector


class GraphBeacon(eqx.Module, strict=True):
    """Per-node beacon contents of one snapshot.

    **Attributes:**

    `time`: The instant of the snapshot.

    `node_ids`: Node ids, in snapshot order.

    `positions`: Node positions.

    `lobby`: Lobby index of every node.

    `cluster_coefficient`: Clustering coefficient of the node's cluster,
    `0.0` for a node without neighbors.

    `cluster_size`: Number of members of the node's cluster.
    """

    time: float = field(static=True, converter=float)
    node_ids: tuple[str, ...] = field(static=True, converter=tuple)
    positions: PlanarCoords = field(converter=jnp.asarray)
    lobby: IntVector = field(converter=jnp.asarray)
    cluster_coefficient: RealVector = field(converter=jnp.asarray)
    cluster_size: IntVector = field(converter=jnp.asarray)


def compute_beacons(snapshot: Snapshot) -> GraphBeacon:
    """Collect the beacon of every node of `snapshot` from its lobby index
    and connected components."""
    n = snapshot.n_nodes
    coefficient = np.zeros(n)
    size = np.ones(n, dtype=np.int64)
    for cluster in connected_components(snapshot):
        members = np.asarray(cluster.member_indices)
        size[members] = cluster.size
        if cluster.coefficient is not None:
            coefficient[members] = cluster.coefficient
    return GraphBeacon(
        time=snapshot.time,
        node_ids=snapshot.node_ids,
        positions=snapshot.positions,
        lobby=lobby_index(snapshot),
        cluster_coefficient=coefficient,
        cluster_size=size,
    )
