"""
Readers and writers for trajectory CSV files.

A trace file starts with a ``#format,cartesian`` or ``#format,gps`` header.
GPS files also declare the projection origin with ``#ref,<lat>,<lon>``.
Every other line is a ``t,vehicle_id,a,b`` row where ``(a, b)`` is
``(x, y)`` in meters or ``(lat, lon)`` in degrees.
"""

__all__ = ["parse_trace", "read_trace", "write_trace"]

import logging
import math
import os
from collections import defaultdict
from typing import Iterable, Literal, Optional, Sequence, TextIO

import numpy as np

from ..coordinates import project_gps
from ..errors import TraceParseError, ValidationError
from ..mobility import Trajectory
from ._format import format_number


logger = logging.getLogger(__name__)

TraceFormat = Literal["cartesian", "gps"]

_FORMAT_ALIASES = {
    "cartesian": "cartesian",
    "cartesian_csv": "cartesian",
    "xy": "cartesian",
    "gps": "gps",
    "gps_csv": "gps",
}


def normalize_format(name: str) -> TraceFormat:
    try:
        return _FORMAT_ALIASES[name.strip().lower()]  # type: ignore[return-value]
    except KeyError:
        raise TraceParseError(
            f"Unknown trace format {name!r}. Expected one of "
            f"{sorted(set(_FORMAT_ALIASES))}."
        ) from None


def _parse_float(text: str, line_number: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise TraceParseError(
            f"could not parse {what} from {text!r}", line_number
        ) from None
    if not math.isfinite(value):
        raise TraceParseError(f"{what} must be finite, got {text!r}", line_number)
    return value


def parse_header(line: str, line_number: int) -> tuple[str, list[str]]:
    """Split a ``#key,value,...`` header line."""
    key, *values = [part.strip() for part in line[1:].split(",")]
    if not key:
        raise TraceParseError("empty header line", line_number)
    return key.lower(), values


def parse_trace(
    stream: Iterable[str], format: Optional[str] = None
) -> list[Trajectory]:
    """Parse a trace into one trajectory per vehicle, sorted by vehicle id.

    **Arguments:**

    `stream`: The lines of the trace, e.g. an open text file.

    `format`: `"cartesian_csv"` or `"gps_csv"`. If `None`, the
    ``#format`` header decides and cartesian is assumed without one.
    """
    declared = normalize_format(format) if format is not None else None
    reference: Optional[tuple[float, float]] = None
    samples: dict[str, list[tuple[float, float, float]]] = defaultdict(list)
    for line_number, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, values = parse_header(line, line_number)
            if key == "format":
                if len(values) != 1:
                    raise TraceParseError("expected #format,<name>", line_number)
                from_header = normalize_format(values[0])
                if declared is not None and declared != from_header:
                    raise TraceParseError(
                        f"header declares {from_header!r} but {declared!r} "
                        "was requested",
                        line_number,
                    )
                declared = from_header
            elif key == "ref":
                if len(values) != 2:
                    raise TraceParseError("expected #ref,<lat>,<lon>", line_number)
                reference = (
                    _parse_float(values[0], line_number, "reference latitude"),
                    _parse_float(values[1], line_number, "reference longitude"),
                )
            continue
        fields = [part.strip() for part in line.split(",")]
        if len(fields) != 4 or not fields[1]:
            raise TraceParseError(
                f"expected 4 fields t,vehicle_id,a,b but got {len(fields)}",
                line_number,
            )
        t = _parse_float(fields[0], line_number, "time")
        a = _parse_float(fields[2], line_number, "coordinate")
        b = _parse_float(fields[3], line_number, "coordinate")
        vehicle = samples[fields[1]]
        if vehicle and t <= vehicle[-1][0]:
            raise ValidationError(
                f"Timestamps of vehicle {fields[1]!r} are not strictly increasing "
                f"(line {line_number})."
            )
        vehicle.append((t, a, b))

    trace_format = declared or "cartesian"
    if trace_format == "gps" and samples and reference is None:
        raise TraceParseError("gps traces require a #ref,<lat>,<lon> header")
    trajectories = []
    for vehicle_id in sorted(samples):
        rows = np.asarray(samples[vehicle_id], dtype=float)
        if trace_format == "gps":
            x, y = project_gps(rows[:, 1], rows[:, 2], reference)  # type: ignore
            positions = np.stack([np.asarray(x), np.asarray(y)], axis=-1)
        else:
            positions = rows[:, 1:]
        trajectories.append(Trajectory(vehicle_id, rows[:, 0], positions))
    logger.debug("Parsed %d trajectories (%s).", len(trajectories), trace_format)
    return trajectories


def read_trace(path: str | os.PathLike, format: Optional[str] = None):
    """Read a trace file. See `parse_trace`."""
    with open(path, "r", encoding="utf-8") as stream:
        return parse_trace(stream, format)


def write_trace(trajectories: Sequence[Trajectory], stream: TextIO) -> None:
    """Write trajectories in the cartesian format, ordered by vehicle id and
    then time."""
    stream.write("#format,cartesian\n")
    for trajectory in sorted(trajectories, key=lambda tr: tr.vehicle_id):
        times = np.asarray(trajectory.times)
        positions = np.asarray(trajectory.positions)
        for t, (x, y) in zip(times, positions):
            stream.write(
                f"{format_number(t)},{trajectory.vehicle_id},"
                f"{format_number(x)},{format_number(y)}\n"
            )
