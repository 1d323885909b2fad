"""
Readers and writers for RSU catalogs.

An RSU file may start with ``#coords,xy`` (the default) or ``#coords,gps``
followed by ``#ref,<lat>,<lon>``. Rows are ``rsu_id,a,b``.
"""

__all__ = ["load_rsus", "read_rsus", "write_rsus"]

import logging
import os
from typing import Iterable, TextIO

import numpy as np

from ..coordinates import Region, project_gps
from ..errors import DomainError, TraceParseError
from ..mobility import RsuSet
from ._format import format_number
from ._traces import _parse_float, parse_header


logger = logging.getLogger(__name__)


def load_rsus(stream: Iterable[str], region: Region) -> RsuSet:
    """Parse an RSU catalog and keep the units inside `region`."""
    coords = "xy"
    reference = None
    ids: list[str] = []
    rows: list[tuple[float, float]] = []
    for line_number, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, values = parse_header(line, line_number)
            if key == "coords":
                if len(values) != 1 or values[0].lower() not in ("xy", "gps"):
                    raise TraceParseError("expected #coords,xy|gps", line_number)
                coords = values[0].lower()
            elif key == "ref":
                if len(values) != 2:
                    raise TraceParseError("expected #ref,<lat>,<lon>", line_number)
                reference = (
                    _parse_float(values[0], line_number, "reference latitude"),
                    _parse_float(values[1], line_number, "reference longitude"),
                )
            continue
        fields = [part.strip() for part in line.split(",")]
        if len(fields) != 3 or not fields[0]:
            raise TraceParseError(
                f"expected 3 fields rsu_id,a,b but got {len(fields)}", line_number
            )
        a = _parse_float(fields[1], line_number, "coordinate")
        b = _parse_float(fields[2], line_number, "coordinate")
        if coords == "gps" and not (abs(a) <= 90.0 and abs(b) <= 180.0):
            raise DomainError(
                f"line {line_number}: ({a}, {b}) is not a valid GPS position."
            )
        ids.append(fields[0])
        rows.append((a, b))

    positions = np.asarray(rows, dtype=float).reshape(-1, 2)
    if coords == "gps" and ids:
        if reference is None:
            raise TraceParseError("gps RSU catalogs require a #ref,<lat>,<lon> header")
        x, y = project_gps(positions[:, 0], positions[:, 1], reference)
        positions = np.stack([np.asarray(x), np.asarray(y)], axis=-1)
    rsus = RsuSet(ids, positions).clip(region)
    logger.debug("Loaded %d of %d RSUs inside the region.", len(rsus), len(ids))
    return rsus


def read_rsus(path: str | os.PathLike, region: Region) -> RsuSet:
    """Read an RSU catalog file. See `load_rsus`."""
    with open(path, "r", encoding="utf-8") as stream:
        return load_rsus(stream, region)


def write_rsus(rsus: RsuSet, stream: TextIO) -> None:
    """Write an RSU catalog with planar coordinates."""
    stream.write("#coords,xy\n")
    for rsu_id, (x, y) in zip(rsus.rsu_ids, np.asarray(rsus.positions)):
        stream.write(f"{rsu_id},{format_number(x)},{format_number(y)}\n")
