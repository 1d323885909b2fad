"""
Shortest-path metrics: effective diameter, diameter and separation.
"""

__all__ = [
    "SeparationProfile",
    "hop_distances",
    "effective_diameter",
    "diameter",
    "avg_separation",
    "separation_by_distance",
]

import math
from typing import Optional

import equinox as eqx
import jax.numpy as jnp
import numpy as np
from equinox import field
from scipy.sparse.csgraph import shortest_path

from ..errors import DomainError
from ..graph import Snapshot
from ..typing import DistanceMatrix, RealVector


def hop_distances(snapshot: Snapshot) -> DistanceMatrix:
    """All-pairs hop distances by breadth-first search. Pairs in different
    components hold `-1`."""
    return jnp.asarray(_hop_distances(snapshot))


def _hop_distances(snapshot: Snapshot) -> np.ndarray:
    if snapshot.n_nodes == 0:
        return np.zeros((0, 0), dtype=np.int64)
    distances = shortest_path(
        snapshot.sparse_adjacency(), method="D", directed=False, unweighted=True
    )
    return np.where(np.isinf(distances), -1, distances).astype(np.int64)


def _connected_pair_distances(distances: np.ndarray) -> np.ndarray:
    """Distances of the connected unordered pairs `i < j`."""
    upper = distances[np.triu_indices(distances.shape[0], k=1)]
    return upper[upper > 0]


def _effective_diameter(distances: np.ndarray, quantile: float) -> Optional[int]:
    pairs = _connected_pair_distances(distances)
    if pairs.size == 0:
        return None
    rank = max(math.ceil(quantile * pairs.size - 1e-9), 1)
    return int(np.partition(pairs, rank - 1)[rank - 1])


def effective_diameter(snapshot: Snapshot, quantile: float = 0.9) -> Optional[int]:
    """The smallest hop count `d` such that at least a fraction `quantile` of
    all connected node pairs lie within distance `d`. Absent without edges.
    """
    if not 0.0 < quantile <= 1.0:
        raise DomainError(f"quantile must lie in (0, 1]. Got {quantile}.")
    return _effective_diameter(_hop_distances(snapshot), quantile)


def diameter(snapshot: Snapshot) -> Optional[int]:
    """The largest finite shortest-path distance. Absent without edges."""
    pairs = _connected_pair_distances(_hop_distances(snapshot))
    return int(pairs.max()) if pairs.size > 0 else None


def _avg_separation(distances: np.ndarray) -> Optional[float]:
    pairs = _connected_pair_distances(distances)
    return float(pairs.mean()) if pairs.size > 0 else None


def avg_separation(snapshot: Snapshot) -> Optional[float]:
    """The mean shortest-path distance over connected node pairs, the
    average degree of separation. Absent without edges."""
    return _avg_separation(_hop_distances(snapshot))


class SeparationProfile(eqx.Module, strict=True):
    """Hop distances of connected pairs binned by their Euclidean distance.
    Profiles of several snapshots add up.

    **Attributes:**

    `bin_width`: Width of the distance bins in meters.

    `hop_sums`: Sum of the hop distances per bin.

    `pair_counts`: Number of connected pairs per bin.
    """

    bin_width: float = field(static=True, converter=float)
    hop_sums: RealVector = field(converter=jnp.asarray)
    pair_counts: RealVector = field(converter=jnp.asarray)

    @property
    def bin_edges(self) -> RealVector:
        return self.bin_width * jnp.arange(self.hop_sums.size)

    @property
    def mean_hops(self) -> RealVector:
        """Mean hop distance per bin, NaN for empty bins."""
        return jnp.where(
            self.pair_counts > 0,
            self.hop_sums / jnp.maximum(self.pair_counts, 1),
            jnp.nan,
        )

    def __add__(self, other: "SeparationProfile") -> "SeparationProfile":
        if other.bin_width != self.bin_width:
            raise DomainError("Cannot add profiles with different bin widths.")
        size = max(self.hop_sums.size, other.hop_sums.size)

        def pad(x):
            return jnp.pad(x, (0, size - x.size))

        return SeparationProfile(
            self.bin_width,
            pad(self.hop_sums) + pad(other.hop_sums),
            pad(self.pair_counts) + pad(other.pair_counts),
        )


def _separation_by_distance(
    snapshot: Snapshot, distances: np.ndarray, bin_width: float
) -> SeparationProfile:
    i, j = np.triu_indices(snapshot.n_nodes, k=1)
    hops = distances[i, j]
    connected = hops > 0
    i, j, hops = i[connected], j[connected], hops[connected]
    positions = np.asarray(snapshot.positions)
    meters = np.hypot(*(positions[i] - positions[j]).T)
    bins = np.floor(meters / bin_width).astype(np.int64)
    size = int(bins.max()) + 1 if bins.size > 0 else 0
    return SeparationProfile(
        bin_width,
        np.bincount(bins, weights=hops, minlength=size).astype(float),
        np.bincount(bins, minlength=size).astype(float),
    )


def separation_by_distance(
    snapshot: Snapshot, bin_width: float = 100.0
) -> SeparationProfile:
    """Bin the hop distance of every connected pair by the Euclidean
    distance between the pair."""
    if not bin_width > 0:
        raise DomainError(f"bin_width must be positive. Got {bin_width}.")
    return _separation_by_distance(snapshot, _hop_distances(snapshot), bin_width)
