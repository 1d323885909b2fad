"""
Vehicle trajectories and their resampling onto the snapshot tick.
"""

__all__ = ["Trajectory", "clip_and_resample"]

import logging
import math
from typing import Sequence

import equinox as eqx
import jax.numpy as jnp
import numpy as np
from equinox import field

from ..coordinates import Region
from ..errors import DomainError, ValidationError
from ..typing import TimeSamples, TrackCoords


logger = logging.getLogger(__name__)


class Trajectory(eqx.Module, strict=True):
    """The time-ordered positions of one vehicle.

    **Attributes:**

    `vehicle_id`: An opaque identifier of the vehicle.

    `times`: Sample times in seconds, strictly increasing.

    `positions`: Sample positions in meters, one row per sample.
    """

    vehicle_id: str = field(static=True)
    times: TimeSamples = field(converter=jnp.asarray)
    positions: TrackCoords = field(converter=jnp.asarray)

    def __check_init__(self):
        if self.times.ndim != 1 or self.positions.shape != (self.times.size, 2):
            raise ValidationError(
                f"Trajectory of vehicle {self.vehicle_id!r} must have times of "
                f"shape (T,) and positions of shape (T, 2). Got {self.times.shape} "
                f"and {self.positions.shape}."
            )
        if self.times.size == 0:
            raise ValidationError(
                f"Trajectory of vehicle {self.vehicle_id!r} is empty."
            )
        if not bool(jnp.all(jnp.diff(self.times) > 0)):
            raise ValidationError(
                f"Timestamps of vehicle {self.vehicle_id!r} are not strictly "
                "increasing."
            )
        if not (
            bool(jnp.all(jnp.isfinite(self.times)))
            and bool(jnp.all(jnp.isfinite(self.positions)))
        ):
            raise ValidationError(
                f"Trajectory of vehicle {self.vehicle_id!r} has non-finite values."
            )

    @property
    def n_samples(self) -> int:
        return self.times.size

    @property
    def start_time(self) -> float:
        return float(self.times[0])

    @property
    def end_time(self) -> float:
        return float(self.times[-1])


def _tick_range(t_start: float, t_end: float, dt: float) -> np.ndarray:
    """Integer tick indices k with t_start <= k*dt <= t_end."""
    eps = 1e-9
    k_first = math.ceil(t_start / dt - eps)
    k_last = math.floor(t_end / dt + eps)
    return np.arange(k_first, k_last + 1, dtype=np.int64)


def _split_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs of ``True`` in a boolean vector, as half-open slices."""
    padded = np.concatenate([[False], mask, [False]]).astype(np.int8)
    edges = np.flatnonzero(np.diff(padded))
    return [(int(a), int(b)) for a, b in zip(edges[::2], edges[1::2])]


def clip_and_resample(
    trajectories: Sequence[Trajectory], region: Region, dt: float
) -> list[Trajectory]:
    """Interpolate trajectories onto the grid `t = k * dt` and clip them to a
    region.

    A vehicle that leaves and re-enters the region becomes several
    trajectories that share its `vehicle_id`. It is simply absent from
    snapshots during the gap. Vehicles that never enter the region are
    removed.

    **Arguments:**

    `trajectories`: The raw trajectories.

    `region`: The clipping box.

    `dt`: The tick in seconds.

    **Returns:**

    The region-resident segments, each uniformly spaced by `dt`.
    """
    if not dt > 0:
        raise DomainError(f"The tick dt must be positive. Got {dt}.")
    segments = []
    for trajectory in trajectories:
        ticks = _tick_range(trajectory.start_time, trajectory.end_time, dt)
        if ticks.size == 0:
            continue
        grid = jnp.asarray(ticks * dt)
        x = jnp.interp(grid, trajectory.times, trajectory.positions[:, 0])
        y = jnp.interp(grid, trajectory.times, trajectory.positions[:, 1])
        positions = jnp.stack([x, y], axis=-1)
        inside = np.asarray(region.contains(positions))
        for start, stop in _split_runs(inside):
            segments.append(
                Trajectory(
                    trajectory.vehicle_id, grid[start:stop], positions[start:stop]
                )
            )
    logger.debug(
        "Resampled %d trajectories into %d region-resident segments.",
        len(trajectories),
        len(segments),
    )
    return segments
