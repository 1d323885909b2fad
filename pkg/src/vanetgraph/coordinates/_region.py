"""
The rectangular region of study.
"""

__all__ = ["Region"]

import equinox as eqx
import jax.numpy as jnp
from equinox import field
from jaxtyping import Array, Bool

from ..errors import DomainError
from ..typing import PlanarCoords


class Region(eqx.Module, strict=True):
    """An axis-aligned bounding box in meters. Membership is inclusive
    of the boundary.

    **Attributes:**

    `x_min`, `y_min`, `x_max`, `y_max`: The box bounds.
    """

    x_min: float = field(static=True, converter=float)
    y_min: float = field(static=True, converter=float)
    x_max: float = field(static=True, converter=float)
    y_max: float = field(static=True, converter=float)

    def __check_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise DomainError(
                "Region bounds must satisfy x_min < x_max and y_min < y_max. "
                f"Got {(self.x_min, self.y_min, self.x_max, self.y_max)}."
            )

    @classmethod
    def from_size(cls, width: float, height: float) -> "Region":
        """A region anchored at the origin."""
        return cls(0.0, 0.0, width, height)

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.y_min, self.x_max, self.y_max)

    def contains(self, positions: PlanarCoords) -> Bool[Array, " N"]:
        """Boolean mask of the positions that lie in the region."""
        positions = jnp.atleast_2d(jnp.asarray(positions))
        x, y = positions[:, 0], positions[:, 1]
        return (
            (x >= self.x_min)
            & (x <= self.x_max)
            & (y >= self.y_min)
            & (y <= self.y_max)
        )
