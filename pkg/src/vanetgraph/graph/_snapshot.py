"""
The communication graph at one instant, and the per-tick series of them.
"""

__all__ = [
    "NodeKind",
    "Snapshot",
    "build_snapshot",
    "build_snapshot_from_arrays",
    "snapshot_series",
    "window_ticks",
]

import logging
import math
from typing import Iterator, Literal, Optional, Sequence

import equinox as eqx
import jax.numpy as jnp
import numpy as np
import scipy.sparse as sparse
from equinox import field

from ..errors import DomainError, ValidationError
from ..mobility import PenetrationSample, RsuSet, Trajectory
from ..typing import AdjacencyMatrix, EdgeList, IntVector, PlanarCoords
from ._radio import AbstractRadioModel
from ._spatial_hash import SpatialHash


logger = logging.getLogger(__name__)

NodeKind = Literal["vehicle", "rsu"]
NODE_KINDS = ("vehicle", "rsu")


class Snapshot(eqx.Module, strict=True):
    """The undirected communication graph G(t).

    **Attributes:**

    `time`: The instant in seconds.

    `node_ids`: Unique node identifiers. Node `i` is `node_ids[i]`.

    `kinds`: `"vehicle"` or `"rsu"` per node.

    `positions`: Node positions in meters.

    `edges`: Index pairs `(i, j)` with `i < j`, sorted lexicographically.

    `transmission_range`: The range of the radio model that built the
    graph, if known.
    """

    time: float = field(static=True, converter=float)
    node_ids: tuple[str, ...] = field(static=True, converter=tuple)
    kinds: tuple[str, ...] = field(static=True, converter=tuple)
    positions: PlanarCoords = field(converter=jnp.asarray)
    edges: EdgeList = field(converter=jnp.asarray)
    transmission_range: Optional[float] = field(static=True, default=None)

    def __check_init__(self):
        n = len(self.node_ids)
        if len(set(self.node_ids)) != n:
            seen: set[str] = set()
            duplicates = sorted({i for i in self.node_ids if i in seen or seen.add(i)})
            raise ValidationError(f"Duplicate node ids in snapshot: {duplicates}.")
        if len(self.kinds) != n or any(k not in NODE_KINDS for k in self.kinds):
            raise ValidationError(f"Node kinds must be one of {NODE_KINDS}.")
        if self.positions.shape != (n, 2):
            raise ValidationError(
                f"Expected positions of shape ({n}, 2), got {self.positions.shape}."
            )
        if self.edges.ndim != 2 or self.edges.shape[1] != 2:
            raise ValidationError(
                f"Edges must have shape (E, 2), got {self.edges.shape}."
            )
        if self.edges.shape[0] > 0:
            edges = np.asarray(self.edges)
            if not (np.all(edges[:, 0] < edges[:, 1]) and edges.max() < n):
                raise ValidationError(
                    "Edges must be index pairs (i, j) with i < j < node count."
                )

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    def index(self) -> dict[str, int]:
        """Map from node id to node index."""
        return {node_id: i for i, node_id in enumerate(self.node_ids)}

    def kind_mask(self, kind: NodeKind) -> np.ndarray:
        return np.asarray([k == kind for k in self.kinds], dtype=bool)

    def edge_pairs(self) -> set[tuple[str, str]]:
        """The edges as unordered node-id pairs, each sorted."""
        ids = self.node_ids
        pairs = set()
        for i, j in np.asarray(self.edges).tolist():
            a, b = ids[i], ids[j]
            pairs.add((a, b) if a <= b else (b, a))
        return pairs

    def sparse_adjacency(self) -> sparse.csr_matrix:
        """The symmetric adjacency matrix in compressed sparse row form."""
        n = self.n_nodes
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        data = np.ones(rows.size, dtype=float)
        return sparse.csr_matrix((data, (rows, cols)), shape=(n, n))

    def adjacency(self) -> AdjacencyMatrix:
        """The dense, symmetric 0/1 adjacency matrix."""
        n = self.n_nodes
        a = jnp.zeros((n, n))
        if self.n_edges == 0:
            return a
        i, j = self.edges[:, 0], self.edges[:, 1]
        return a.at[i, j].set(1.0).at[j, i].set(1.0)

    def degree(self) -> IntVector:
        """Number of incident edges per node."""
        edges = np.asarray(self.edges).reshape(-1)
        return jnp.asarray(np.bincount(edges, minlength=self.n_nodes))

    def neighbors(self) -> list[np.ndarray]:
        """Sorted neighbor indices of every node."""
        csr = self.sparse_adjacency()
        csr.sort_indices()
        return [
            csr.indices[csr.indptr[i] : csr.indptr[i + 1]] for i in range(self.n_nodes)
        ]


def build_snapshot_from_arrays(
    node_ids: Sequence[str],
    kinds: Sequence[str],
    positions: np.ndarray,
    model: AbstractRadioModel,
    time: float = 0.0,
) -> Snapshot:
    """Build G(t) from node arrays. See `build_snapshot`."""
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    if not np.all(np.isfinite(positions)):
        raise ValidationError("Node positions must be finite.")
    radius = model.transmission_range
    # A cell slightly larger than the radius absorbs rounding at the boundary.
    hash_grid = SpatialHash(positions, radius * (1.0 + 1e-9))
    edges = hash_grid.close_pairs(radius)
    if edges.shape[0] > 0:
        keep = np.asarray(
            model.link_mask(positions[edges[:, 0]], positions[edges[:, 1]])
        )
        edges = edges[keep]
    return Snapshot(time, tuple(node_ids), tuple(kinds), positions, edges, radius)


def build_snapshot(
    positions: Sequence[tuple[str, str, float, float]],
    model: AbstractRadioModel,
    time: float = 0.0,
) -> Snapshot:
    """Build the communication graph of nodes at one instant.

    Two nodes are linked iff their Euclidean distance is at most the
    transmission range, inclusive, and the radio model admits the link.

    **Arguments:**

    `positions`: Rows of `(node_id, kind, x, y)`.

    `model`: The radio model.

    `time`: The instant of the snapshot, in seconds.
    """
    node_ids = [row[0] for row in positions]
    if len(set(node_ids)) != len(node_ids):
        raise ValidationError("Duplicate node ids in snapshot input.")
    kinds = [row[1] for row in positions]
    xy = np.asarray([(row[2], row[3]) for row in positions], dtype=float)
    return build_snapshot_from_arrays(node_ids, kinds, xy, model, time)


def window_ticks(t_start: float, t_end: float, dt: float) -> np.ndarray:
    """Integer tick indices `k` with `t_start <= k * dt < t_end`."""
    if not dt > 0:
        raise DomainError(f"The tick dt must be positive. Got {dt}.")
    if not t_end > t_start:
        raise DomainError(f"Empty window [{t_start}, {t_end}).")
    first = math.ceil(t_start / dt - 1e-9)
    last = math.ceil(t_end / dt - 1e-9) - 1
    return np.arange(first, last + 1, dtype=np.int64)


def snapshot_series(
    trajectories: Sequence[Trajectory],
    rsus: RsuSet,
    sample: PenetrationSample,
    model: AbstractRadioModel,
    window: tuple[float, float],
    dt: float,
) -> Iterator[Snapshot]:
    """Yield one snapshot per tick of the half-open `window`.

    Only vehicles selected by `sample` are present, each at its resampled
    position when it has a sample at that tick. RSUs are present in every
    snapshot at fixed positions, after the vehicles.

    **Arguments:**

    `trajectories`: Resampled trajectories with tick `dt`.

    `rsus`: Roadside units, possibly empty.

    `sample`: The equipped vehicles.

    `model`: The radio model.

    `window`: `(t_start, t_end)` in seconds.

    `dt`: The tick in seconds.
    """
    if not trajectories:
        raise DomainError("Cannot build snapshots without trajectories.")
    ticks = window_ticks(window[0], window[1], dt)
    t_min = min(tr.start_time for tr in trajectories)
    t_max = max(tr.end_time for tr in trajectories)
    eps = 1e-9 * max(1.0, abs(t_max))
    if ticks[0] * dt < t_min - eps or ticks[-1] * dt > t_max + eps:
        raise DomainError(
            f"Window [{window[0]}, {window[1]}) is outside the trajectory "
            f"coverage [{t_min}, {t_max}]."
        )

    selected = sample.selected_set
    vehicle_ids = sorted({tr.vehicle_id for tr in trajectories} & selected)
    rank = {vehicle_id: r for r, vehicle_id in enumerate(vehicle_ids)}
    tick_chunks, rank_chunks, position_chunks = [], [], []
    for trajectory in trajectories:
        if trajectory.vehicle_id not in rank:
            continue
        k = np.rint(np.asarray(trajectory.times) / dt).astype(np.int64)
        tick_chunks.append(k)
        rank_chunks.append(np.full(k.size, rank[trajectory.vehicle_id]))
        position_chunks.append(np.asarray(trajectory.positions))
    if tick_chunks:
        all_ticks = np.concatenate(tick_chunks)
        all_ranks = np.concatenate(rank_chunks)
        all_positions = np.concatenate(position_chunks)
        order = np.lexsort((all_ranks, all_ticks))
        all_ticks, all_ranks = all_ticks[order], all_ranks[order]
        all_positions = all_positions[order]
    else:
        all_ticks = np.zeros(0, dtype=np.int64)
        all_ranks = np.zeros(0, dtype=np.int64)
        all_positions = np.zeros((0, 2))

    rsu_ids = list(rsus.rsu_ids)
    rsu_positions = np.asarray(rsus.positions).reshape(-1, 2)
    lo = np.searchsorted(all_ticks, ticks, side="left")
    hi = np.searchsorted(all_ticks, ticks, side="right")
    logger.info(
        "Building %d snapshots of %d equipped vehicles and %d RSUs.",
        ticks.size,
        len(vehicle_ids),
        len(rsu_ids),
    )
    for k, start, stop in zip(ticks, lo, hi):
        ids = [vehicle_ids[r] for r in all_ranks[start:stop]] + rsu_ids
        kinds = ["vehicle"] * int(stop - start) + ["rsu"] * len(rsu_ids)
        positions = np.concatenate([all_positions[start:stop], rsu_positions])
        yield build_snapshot_from_arrays(ids, kinds, positions, model, float(k * dt))
