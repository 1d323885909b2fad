"""
Synthetic random-turn mobility on a Manhattan grid.
"""

__all__ = ["GridScenarioConfig", "generate_grid_scenario"]

import logging
import math
from typing import Optional

import equinox as eqx
import jax.numpy as jnp
import jax.random as jr
import numpy as np
from equinox import field

from ..coordinates import Region
from ..errors import ConfigError
from ._road_grid import RoadGrid
from ._trajectory import Trajectory


logger = logging.getLogger(__name__)


class GridScenarioConfig(eqx.Module, strict=True):
    """Configuration of a synthetic grid scenario.

    **Attributes:**

    `grid_size`: Number of blocks along each side of the square grid.

    `street_spacing`: Distance between parallel streets in meters.

    `vehicle_count`: Number of vehicles, constant over the scenario.

    `speed_range`: Range of the per-vehicle constant speeds, in m/s.

    `duration`: Length of the scenario in seconds.

    `dt`: Sampling tick in seconds.

    `seed`: Seed of all random draws.

    `corridor_width`: Width of the street corridors of the road map.
    """

    grid_size: int = field(static=True, converter=int)
    street_spacing: float = field(static=True, converter=float)
    vehicle_count: int = field(static=True, converter=int)
    speed_range: tuple[float, float] = field(static=True, converter=tuple)
    duration: float = field(static=True, converter=float)
    dt: float = field(static=True, converter=float, default=1.0)
    seed: int = field(static=True, converter=int, default=0)
    corridor_width: float = field(static=True, converter=float, default=20.0)

    def __check_init__(self):
        if self.grid_size < 1:
            raise ConfigError("the grid must have at least one block", "grid_size")
        for name in ("street_spacing", "vehicle_count", "duration", "dt"):
            if not getattr(self, name) > 0:
                raise ConfigError("must be positive", name)
        if len(self.speed_range) != 2:
            raise ConfigError("must be a (min, max) pair", "speed_range")
        v_min, v_max = self.speed_range
        if not 1.0 <= v_min <= v_max <= 30.0:
            raise ConfigError("must satisfy 1 <= min <= max <= 30 m/s", "speed_range")

    @property
    def region(self) -> Region:
        side = self.grid_size * self.street_spacing
        return Region.from_size(side, side)

    @property
    def road_map(self) -> RoadGrid:
        return RoadGrid(self.region, self.street_spacing, self.corridor_width)


def _next_heading(
    grid: RoadGrid, node: int, heading: Optional[int], u: float
) -> int:
    """A uniformly random turn at an intersection. U-turns only at dead ends."""
    reverse = None if heading is None else (heading + 2) % 4
    options = [
        h
        for h in range(4)
        if h != reverse and grid.neighbor_intersection(node, h) is not None
    ]
    if not options:
        options = [reverse]
    return options[min(int(u * len(options)), len(options) - 1)]


def generate_grid_scenario(config: GridScenarioConfig) -> list[Trajectory]:
    """Generate vehicles that drive along the streets of a grid at constant
    speed and take a uniformly random turn at every intersection. All
    vehicles are present for the full duration.

    The output is a pure function of `config`.
    """
    grid = config.road_map
    intersections = grid.intersections
    nx, ny = grid.shape
    spacing = config.street_spacing
    n_vehicles = config.vehicle_count
    v_min, v_max = config.speed_range
    n_ticks = math.floor(config.duration / config.dt + 1e-9) + 1
    times = np.arange(n_ticks) * config.dt
    max_edges = math.ceil((spacing + v_max * times[-1]) / spacing) + 2

    key = jr.PRNGKey(config.seed)
    key_start, key_heading, key_offset, key_speed, key_turn = jr.split(key, 5)
    starts = np.asarray(jr.randint(key_start, (n_vehicles,), 0, nx * ny))
    first_turn = np.asarray(jr.uniform(key_heading, (n_vehicles,)))
    offsets = np.asarray(jr.uniform(key_offset, (n_vehicles,)))
    speeds = np.asarray(
        jr.uniform(key_speed, (n_vehicles,), minval=v_min, maxval=v_max)
    )
    turns = np.asarray(jr.uniform(key_turn, (n_vehicles, max_edges)))

    width = len(str(n_vehicles - 1))
    trajectories = []
    for v in range(n_vehicles):
        # The route as a sequence of intersections. Every street edge has the
        # same length, so the travelled distance maps directly onto it.
        node = int(starts[v])
        heading = _next_heading(grid, node, None, first_turn[v])
        route = [node]
        for edge in range(max_edges):
            node = grid.neighbor_intersection(node, heading)
            route.append(node)
            heading = _next_heading(grid, node, heading, turns[v, edge])
        waypoints = intersections[np.asarray(route)]
        travelled = offsets[v] * spacing + speeds[v] * times
        edge_index = np.floor(travelled / spacing).astype(np.int64)
        fraction = (travelled / spacing - edge_index)[:, None]
        positions = (1.0 - fraction) * waypoints[edge_index] + fraction * waypoints[
            edge_index + 1
        ]
        trajectories.append(
            Trajectory(f"v{v:0{width}d}", jnp.asarray(times), jnp.asarray(positions))
        )
    logger.info(
        "Generated %d vehicles on a %dx%d grid over %.0f s.",
        n_vehicles,
        config.grid_size,
        config.grid_size,
        config.duration,
    )
    return trajectories
