"""
Greedy perimeter coordinator routing: coordinator detection and the
per-hop forwarding rule.
"""

__all__ = [
    "COORDINATOR_MODES",
    "coordinator_mask",
    "gpcr_coordinator_detect",
    "gpcr_forward_step",
]

import math
from typing import Literal, Optional, Sequence

import numpy as np
from jaxtyping import ArrayLike
from scipy import sparse

from ..errors import ConfigError
from ..graph import Snapshot
from ..metrics import lobby_index
from ._packet import PacketState


CoordinatorMode = Literal["neighbor_table", "correlation", "lobby_index"]
COORDINATOR_MODES = ("neighbor_table", "correlation", "lobby_index")


def _unlinked_neighbors_in_range(
    around: np.ndarray,
    positions: np.ndarray,
    adjacency: sparse.csr_matrix,
    transmission_range: Optional[float],
) -> bool:
    if around.size < 2 or transmission_range is None:
        return False
    local = positions[around]
    distance = np.linalg.norm(local[:, None, :] - local[None, :, :], axis=-1)
    linked = adjacency[around][:, around].toarray() > 0
    np.fill_diagonal(linked, True)
    return bool(np.any((distance <= transmission_range) & ~linked))


def _position_correlation(positions: ArrayLike) -> float:
    """Absolute Pearson correlation of x and y. Points along a line parallel
    to an axis count as perfectly correlated."""
    positions = np.asarray(positions, dtype=float)
    centered = positions - positions.mean(axis=0)
    spread = np.sqrt(np.sum(centered**2, axis=0))
    if np.any(spread == 0):
        return 1.0
    r = np.sum(centered[:, 0] * centered[:, 1]) / (spread[0] * spread[1])
    return float(abs(r))


def gpcr_coordinator_detect(
    node: int,
    snapshot: Snapshot,
    mode: CoordinatorMode,
    lobby_threshold: Optional[int] = None,
    *,
    correlation_threshold: float = 0.9,
    neighbors: Optional[Sequence[np.ndarray]] = None,
    lobby: Optional[ArrayLike] = None,
    adjacency: Optional[sparse.csr_matrix] = None,
) -> bool:
    """Whether `node` acts as a coordinator, i.e. appears to sit at an
    intersection.

    **Arguments:**

    `node`: Node index in `snapshot`.

    `snapshot`: The communication graph.

    `mode`: `"neighbor_table"` detects two neighbors within range of each
    other but not linked. `"correlation"` detects a neighborhood whose
    positions, the node's included, have an absolute x-y correlation below
    `correlation_threshold`. `"lobby_index"` detects a lobby index of at
    least `lobby_threshold` that is strictly larger than every neighbor's.

    `neighbors`, `lobby`, `adjacency`: Precomputed neighbor lists, lobby
    indices and sparse adjacency of `snapshot`.
    """
    if neighbors is None:
        neighbors = snapshot.neighbors()
    around = neighbors[node]
    if mode == "neighbor_table":
        if adjacency is None:
            adjacency = snapshot.sparse_adjacency()
        return _unlinked_neighbors_in_range(
            around,
            np.asarray(snapshot.positions),
            adjacency,
            snapshot.transmission_range,
        )
    elif mode == "correlation":
        if around.size < 2:
            return False
        group = np.concatenate([[node], around])
        positions = np.asarray(snapshot.positions)[group]
        return _position_correlation(positions) < correlation_threshold
    elif mode == "lobby_index":
        if lobby_threshold is None:
            raise ConfigError("required by lobby_index mode", "lobby_threshold")
        if around.size == 0:
            return False
        lobby = np.asarray(lobby_index(snapshot) if lobby is None else lobby)
        return bool(
            lobby[node] >= lobby_threshold and lobby[node] > lobby[around].max()
        )
    else:
        raise ConfigError(
            f"expected one of {COORDINATOR_MODES}, got {mode!r}", "gpcr_mode"
        )


def coordinator_mask(
    snapshot: Snapshot,
    mode: CoordinatorMode,
    lobby_threshold: Optional[int] = None,
    *,
    correlation_threshold: float = 0.9,
    neighbors: Optional[Sequence[np.ndarray]] = None,
) -> np.ndarray:
    """`gpcr_coordinator_detect` for every node of `snapshot`. The neighbor
    lists, the sparse adjacency and the lobby indices are built once."""
    if neighbors is None:
        neighbors = snapshot.neighbors()
    lobby = lobby_index(snapshot) if mode == "lobby_index" else None
    adjacency = snapshot.sparse_adjacency() if mode == "neighbor_table" else None
    return np.asarray(
        [
            gpcr_coordinator_detect(
                i,
                snapshot,
                mode,
                lobby_threshold,
                correlation_threshold=correlation_threshold,
                neighbors=neighbors,
                lobby=lobby,
                adjacency=adjacency,
            )
            for i in range(snapshot.n_nodes)
        ],
        dtype=bool,
    )


def _right_hand_next(
    holder: int, reference: np.ndarray, around: np.ndarray, positions: np.ndarray
) -> int:
    """The first neighbor counterclockwise from the bearing `reference`."""
    offsets = positions[around] - positions[holder]
    bearing = np.arctan2(offsets[:, 1], offsets[:, 0])
    start = math.atan2(reference[1], reference[0])
    turn = np.mod(bearing - start, 2 * np.pi)
    turn = np.where(turn <= 1e-12, 2 * np.pi, turn)
    return int(around[np.argmin(turn)])


def gpcr_forward_step(
    packet: PacketState,
    holder: int,
    snapshot: Snapshot,
    dst: ArrayLike,
    *,
    coordinators: Optional[np.ndarray] = None,
    neighbors: Optional[Sequence[np.ndarray]] = None,
    perimeter_budget: int = 8,
) -> Optional[int]:
    """The next holder of `packet`, or `None` to drop it at a local optimum.

    Greedy mode hands the packet to the neighbor strictly closer to `dst`
    that is closest to it, preferring coordinators. When no neighbor is
    closer the packet enters perimeter mode and follows the right-hand rule
    for at most `perimeter_budget` hops, returning to greedy mode as soon as
    a holder is closer to `dst` than where perimeter mode began.

    The perimeter state of `packet` is updated in place.
    """
    if neighbors is None:
        neighbors = snapshot.neighbors()
    positions = np.asarray(snapshot.positions)
    dst = np.asarray(dst, dtype=float)
    around = neighbors[holder]
    if around.size == 0:
        return None
    here = float(np.linalg.norm(positions[holder] - dst))
    if packet.perimeter_entry is not None and here < packet.perimeter_entry:
        packet.perimeter_entry = None

    if packet.perimeter_entry is None:
        distances = np.linalg.norm(positions[around] - dst, axis=-1)
        closer = distances < here
        if closer.any():
            pool = closer
            if coordinators is not None and (closer & coordinators[around]).any():
                pool = closer & coordinators[around]
            best = distances[pool].min()
            return int(around[pool & (distances == best)].min())
        packet.perimeter_entry = here
        packet.perimeter_hops_left = perimeter_budget
        reference = dst - positions[holder]
    else:
        index = snapshot.index()
        previous = index.get(packet.previous) if packet.previous is not None else None
        if previous is None:
            reference = dst - positions[holder]
        else:
            reference = positions[previous] - positions[holder]

    if packet.perimeter_hops_left <= 0:
        return None
    packet.perimeter_hops_left -= 1
    return _right_hand_next(holder, reference, around, positions)
