"""
Plain-text dumps of single snapshots, for debugging and cross-checks.

    #t,1000.0
    #nodes id kind x y
    v001 vehicle 12.5 30.0
    #edges u v
    v001 v002
"""

__all__ = ["read_snapshot_dump", "write_snapshot_dump"]

from typing import Iterable, TextIO

import numpy as np

from ..errors import TraceParseError
from ..graph import Snapshot
from ._format import format_number


def write_snapshot_dump(snapshot: Snapshot, stream: TextIO) -> None:
    """Write one snapshot as a node block followed by an edge list."""
    stream.write(f"#t,{format_number(snapshot.time)}\n")
    stream.write("#nodes id kind x y\n")
    for node_id, kind, (x, y) in zip(
        snapshot.node_ids, snapshot.kinds, np.asarray(snapshot.positions)
    ):
        stream.write(f"{node_id} {kind} {format_number(x)} {format_number(y)}\n")
    stream.write("#edges u v\n")
    ids = snapshot.node_ids
    for i, j in np.asarray(snapshot.edges).tolist():
        stream.write(f"{ids[i]} {ids[j]}\n")


def read_snapshot_dump(stream: Iterable[str]) -> Snapshot:
    """Read a snapshot written by `write_snapshot_dump`."""
    time = 0.0
    block = None
    ids: list[str] = []
    kinds: list[str] = []
    positions: list[tuple[float, float]] = []
    edges: list[tuple[int, int]] = []
    index: dict[str, int] = {}
    for line_number, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#t,"):
            time = float(line[3:])
        elif line.startswith("#nodes"):
            block = "nodes"
        elif line.startswith("#edges"):
            block = "edges"
            index = {node_id: i for i, node_id in enumerate(ids)}
        elif block == "nodes":
            fields = line.split()
            if len(fields) != 4:
                raise TraceParseError("expected 'id kind x y'", line_number)
            ids.append(fields[0])
            kinds.append(fields[1])
            positions.append((float(fields[2]), float(fields[3])))
        elif block == "edges":
            fields = line.split()
            if len(fields) != 2 or fields[0] not in index or fields[1] not in index:
                raise TraceParseError("expected 'u v' of known node ids", line_number)
            i, j = sorted((index[fields[0]], index[fields[1]]))
            edges.append((i, j))
        else:
            raise TraceParseError(
                "row outside of a #nodes or #edges block", line_number
            )
    edge_array = np.asarray(sorted(edges), dtype=np.int64).reshape(-1, 2)
    return Snapshot(
        time, ids, kinds, np.asarray(positions, dtype=float).reshape(-1, 2), edge_array
    )
