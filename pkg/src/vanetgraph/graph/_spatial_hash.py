"""
Spatial hashing for close-pair detection of planar nodes.
"""

__all__ = ["SpatialHash"]

import numpy as np


# Half of the 3x3 cell neighbourhood. Together with the cell itself these
# offsets visit every pair of adjacent cells exactly once.
_HALF_NEIGHBOURHOOD = ((0, 0), (1, -1), (1, 0), (1, 1), (0, 1))


class SpatialHash:
    """A uniform grid of square cells over planar points.

    Points are bucketed by cell. Any two points within `cell_size` of each
    other lie in the same or in adjacent cells, so close pairs are found
    by looking at a constant number of cells per point.

    **Arguments:**

    `positions`: Point coordinates, shape `(N, 2)`.

    `cell_size`: Edge length of a cell. Must be at least the query radius.
    """

    def __init__(self, positions: np.ndarray, cell_size: float):
        if not cell_size > 0:
            raise ValueError(f"cell_size must be positive. Got {cell_size}.")
        self.positions = np.asarray(positions, dtype=float).reshape(-1, 2)
        self.cell_size = float(cell_size)
        n = self.positions.shape[0]
        if n == 0:
            self.spaces = np.zeros((0, 2), dtype=np.int64)
            self.size = 1
        else:
            minima = self.positions.min(axis=0)
            # Offset by one cell so that neighbouring cells never go negative.
            self.spaces = (
                np.floor((self.positions - minima) / self.cell_size).astype(np.int64)
                + 1
            )
            self.size = int(self.spaces[:, 1].max()) + 2
        self.hashes = self.space_to_hash(self.spaces)
        self.order = np.argsort(self.hashes, kind="stable")
        self.sorted_hashes = self.hashes[self.order]

    def space_to_hash(self, spaces: np.ndarray) -> np.ndarray:
        return spaces[:, 0] * self.size + spaces[:, 1]

    def candidate_pairs(self) -> np.ndarray:
        """All pairs `(i, j)`, `i < j`, of points in the same or adjacent
        cells, as an array of shape `(P, 2)`."""
        n = self.positions.shape[0]
        chunks = []
        for dx, dy in _HALF_NEIGHBOURHOOD:
            target = self.space_to_hash(self.spaces + np.array([dx, dy]))
            lo = np.searchsorted(self.sorted_hashes, target, side="left")
            hi = np.searchsorted(self.sorted_hashes, target, side="right")
            counts = hi - lo
            total = int(counts.sum())
            if total == 0:
                continue
            first = np.repeat(np.arange(n), counts)
            offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
            second = self.order[np.repeat(lo, counts) + offsets]
            if (dx, dy) == (0, 0):
                keep = first < second
                first, second = first[keep], second[keep]
            chunks.append(np.stack([first, second], axis=-1))
        if not chunks:
            return np.zeros((0, 2), dtype=np.int64)
        pairs = np.concatenate(chunks)
        return np.sort(pairs, axis=-1)

    def close_pairs(self, radius: float) -> np.ndarray:
        """Pairs `(i, j)`, `i < j`, with Euclidean distance at most `radius`,
        sorted lexicographically."""
        if radius > self.cell_size:
            raise ValueError(
                f"Query radius {radius} exceeds the cell size {self.cell_size}."
            )
        pairs = self.candidate_pairs()
        delta = self.positions[pairs[:, 0]] - self.positions[pairs[:, 1]]
        within = np.einsum("ij,ij->i", delta, delta) <= radius * radius
        pairs = pairs[within]
        return pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
