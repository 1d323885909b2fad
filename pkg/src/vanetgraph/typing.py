"""
Shape-annotated array hints shared across vanetgraph, written with
jaxtyping.
"""

__all__ = [
    "RealVector",
    "IntVector",
    "TimeSamples",
    "PlanarCoords",
    "TrackCoords",
    "EdgeList",
    "AdjacencyMatrix",
    "DistanceMatrix",
]

import jaxtyping as jt

# 1-d array type hints
RealVector = jt.Float[jt.Array, "N"]
"""Type hint for a real-valued vector."""

IntVector = jt.Int[jt.Array, "N"]
"""Type hint for an integer-valued vector, e.g. a degree vector."""

TimeSamples = jt.Float[jt.Array, "T"]
"""Type hint for the sample times of a trajectory, in seconds."""

# 2-d array type hints
PlanarCoords = jt.Float[jt.Array, "N 2"]
"""Type hint for planar node positions in meters."""

TrackCoords = jt.Float[jt.Array, "T 2"]
"""Type hint for the positions of one trajectory, in meters."""

EdgeList = jt.Int[jt.Array, "E 2"]
"""Type hint for an edge list of node indices with ``i < j`` per row."""

AdjacencyMatrix = jt.Float[jt.Array, "N N"]
"""Type hint for a dense, symmetric 0/1 adjacency matrix."""

DistanceMatrix = jt.Int[jt.Array, "N N"]
"""Type hint for hop distances. Disconnected pairs hold ``-1``."""

del jt
