"""
Roadside units: the stationary nodes of the communication graph.
"""

__all__ = ["RsuSet", "place_rsus"]

from collections.abc import Iterable
from typing import Optional

import equinox as eqx
import jax.numpy as jnp
import jax.random as jr
import numpy as np
from equinox import field

from ..coordinates import Region
from ..errors import ConfigError, DomainError, ValidationError
from ..typing import PlanarCoords
from ._road_grid import RoadGrid


class RsuSet(eqx.Module, strict=True):
    """A set of roadside units with fixed positions.

    **Attributes:**

    `rsu_ids`: Unique identifiers.

    `positions`: Positions in meters, one row per unit.
    """

    rsu_ids: tuple[str, ...] = field(static=True, converter=tuple)
    positions: PlanarCoords = field(converter=jnp.asarray)

    def __init__(self, rsu_ids=(), positions=None):
        self.rsu_ids = tuple(rsu_ids)
        if positions is None:
            positions = np.zeros((0, 2))
        self.positions = jnp.asarray(positions, dtype=float).reshape(-1, 2)

    def __check_init__(self):
        if len(set(self.rsu_ids)) != len(self.rsu_ids):
            raise ValidationError("RSU ids must be unique.")
        if self.positions.shape != (len(self.rsu_ids), 2):
            raise ValidationError(
                f"Expected {len(self.rsu_ids)} RSU positions, got "
                f"an array of shape {self.positions.shape}."
            )
        if not bool(jnp.all(jnp.isfinite(self.positions))):
            raise ValidationError("RSU positions must be finite.")

    def __len__(self) -> int:
        return len(self.rsu_ids)

    def clip(self, region: Region) -> "RsuSet":
        """Drop the units that lie outside a region."""
        inside = np.asarray(region.contains(self.positions), dtype=bool)
        if len(self) == 0 or inside.all():
            return self
        ids = tuple(i for i, keep in zip(self.rsu_ids, inside) if keep)
        return RsuSet(ids, self.positions[inside])


def place_rsus(
    region: Region,
    count: int,
    seed: int,
    road_map: Optional[RoadGrid] = None,
    *,
    vehicle_ids: Iterable[str] = (),
) -> RsuSet:
    """Deploy `count` synthetic roadside units.

    Without a road map the units are uniform in the region. With one, they
    sit at distinct, uniformly chosen intersections. Units are named
    `rsu:<i>`; a name that is also one of `vehicle_ids` raises a
    `ConfigError`.
    """
    if count < 0:
        raise DomainError(f"RSU count must be non-negative. Got {count}.")
    key = jr.PRNGKey(seed)
    if road_map is None:
        lower = jnp.asarray([region.x_min, region.y_min])
        upper = jnp.asarray([region.x_max, region.y_max])
        positions = jr.uniform(key, (count, 2), minval=lower, maxval=upper)
    else:
        intersections = road_map.intersections
        if count > intersections.shape[0]:
            raise DomainError(
                f"Cannot place {count} RSUs on {intersections.shape[0]} "
                "intersections."
            )
        chosen = np.asarray(jr.permutation(key, intersections.shape[0]))[:count]
        positions = intersections[np.sort(chosen)]
    width = len(str(max(count - 1, 0)))
    rsu_ids = tuple(f"rsu:{i:0{width}d}" for i in range(count))
    taken = set(rsu_ids).intersection(vehicle_ids)
    if taken:
        raise ConfigError(
            f"synthetic RSU ids collide with vehicle ids {sorted(taken)}",
            "rsu_count",
        )
    return RsuSet(rsu_ids, positions)
