"""
A Manhattan grid road map: streets, building blocks and intersections.
"""

__all__ = ["HEADINGS", "Road", "RoadGrid"]

import math
from typing import Optional

import equinox as eqx
import jax.numpy as jnp
import numpy as np
from equinox import field
from jaxtyping import Array, Bool, Float

from ..coordinates import Region
from ..errors import ConfigError
from ..typing import PlanarCoords


# Unit headings of the four street directions, east, north, west, south.
HEADINGS = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=np.int64)


class Road(eqx.Module, strict=True):
    """A directed street segment between two adjacent intersections."""

    start: int = field(static=True)
    end: int = field(static=True)
    heading: int = field(static=True)
    length: float = field(static=True)


class RoadGrid(eqx.Module, strict=True):
    """A grid of straight streets. Streets run along every multiple of
    `street_spacing` from the lower-left corner of `region`. The space
    between two consecutive streets, minus half a corridor on each side, is a
    building block that blocks line of sight.

    **Attributes:**

    `region`: The area covered by the grid.

    `street_spacing`: Distance between parallel streets in meters.

    `corridor_width`: Width of the open corridor around each street.

    `junction_radius`: Distance from an intersection within which a vehicle
    is considered to be at the intersection.
    """

    region: Region
    street_spacing: float = field(static=True, converter=float)
    corridor_width: float = field(static=True, converter=float, default=20.0)
    junction_radius: float = field(static=True, converter=float, default=30.0)

    def __check_init__(self):
        if not self.street_spacing > 0:
            raise ConfigError("must be positive", "street_spacing")
        if not 0 <= self.corridor_width < self.street_spacing:
            raise ConfigError(
                "must lie in [0, street_spacing)", "corridor_width"
            )
        if not self.junction_radius > 0:
            raise ConfigError("must be positive", "junction_radius")
        if self.street_xs.size < 2 or self.street_ys.size < 2:
            raise ConfigError(
                "the region must contain at least two streets per axis",
                "street_spacing",
            )

    @property
    def street_xs(self) -> np.ndarray:
        count = math.floor(self.region.width / self.street_spacing + 1e-9) + 1
        return self.region.x_min + self.street_spacing * np.arange(count)

    @property
    def street_ys(self) -> np.ndarray:
        count = math.floor(self.region.height / self.street_spacing + 1e-9) + 1
        return self.region.y_min + self.street_spacing * np.arange(count)

    @property
    def shape(self) -> tuple[int, int]:
        """Number of streets along x and along y."""
        return self.street_xs.size, self.street_ys.size

    @property
    def intersections(self) -> np.ndarray:
        """Intersection positions, indexed by ``ix * shape[1] + iy``."""
        xs, ys = np.meshgrid(self.street_xs, self.street_ys, indexing="ij")
        return np.stack([xs.ravel(), ys.ravel()], axis=-1)

    @property
    def blocks(self) -> np.ndarray:
        """Building blocks as rows of ``(x_lo, y_lo, x_hi, y_hi)``."""
        half = 0.5 * self.corridor_width
        xs, ys = self.street_xs, self.street_ys
        x_lo, y_lo = np.meshgrid(xs[:-1] + half, ys[:-1] + half, indexing="ij")
        x_hi, y_hi = np.meshgrid(xs[1:] - half, ys[1:] - half, indexing="ij")
        return np.stack([x_lo.ravel(), y_lo.ravel(), x_hi.ravel(), y_hi.ravel()], -1)

    def intersection_index(self, ix: int, iy: int) -> int:
        return ix * self.shape[1] + iy

    def intersection_cell(self, index: int) -> tuple[int, int]:
        return divmod(index, self.shape[1])

    def intersection_position(self, index: int) -> np.ndarray:
        ix, iy = self.intersection_cell(index)
        return np.array([self.street_xs[ix], self.street_ys[iy]])

    def neighbor_intersection(self, index: int, heading: int) -> Optional[int]:
        """The adjacent intersection in a heading, or ``None`` at the border."""
        ix, iy = self.intersection_cell(index)
        jx, jy = ix + HEADINGS[heading][0], iy + HEADINGS[heading][1]
        nx, ny = self.shape
        if 0 <= jx < nx and 0 <= jy < ny:
            return self.intersection_index(int(jx), int(jy))
        return None

    def roads_from(self, index: int) -> list[Road]:
        """The outgoing roads of an intersection, ordered by heading."""
        roads = []
        for heading in range(len(HEADINGS)):
            end = self.neighbor_intersection(index, heading)
            if end is not None:
                roads.append(Road(index, end, heading, self.street_spacing))
        return roads

    def nearest_intersection(self, point: np.ndarray) -> tuple[int, float]:
        """The index of the closest intersection and the distance to it."""
        xs, ys = self.street_xs, self.street_ys
        ix = int(np.argmin(np.abs(xs - point[0])))
        iy = int(np.argmin(np.abs(ys - point[1])))
        index = self.intersection_index(ix, iy)
        distance = float(np.hypot(xs[ix] - point[0], ys[iy] - point[1]))
        return index, distance

    def junction_at(self, point: np.ndarray) -> Optional[int]:
        """The intersection whose junction zone contains `point`, if any."""
        index, distance = self.nearest_intersection(point)
        return index if distance <= self.junction_radius else None

    def on_road(self, points: np.ndarray, road: Road) -> np.ndarray:
        """Mask of the points that lie within the corridor of `road`, past
        its start intersection and up to its end intersection."""
        points = np.atleast_2d(points)
        origin = self.intersection_position(road.start)
        heading = HEADINGS[road.heading]
        offset = points - origin
        along = offset @ heading
        across = np.abs(offset @ heading[::-1])
        return (
            (along > 0)
            & (along <= road.length)
            & (across <= 0.5 * self.corridor_width)
        )

    def in_corridor(self, points: PlanarCoords) -> Bool[Array, " N"]:
        """Mask of the points that lie on some street corridor."""
        points = jnp.atleast_2d(jnp.asarray(points))
        half = 0.5 * self.corridor_width
        dx = jnp.abs(points[:, 0, None] - jnp.asarray(self.street_xs)[None, :])
        dy = jnp.abs(points[:, 1, None] - jnp.asarray(self.street_ys)[None, :])
        return (dx.min(axis=-1) <= half) | (dy.min(axis=-1) <= half)

    def line_of_sight(
        self, a: Float[Array, "P 2"], b: Float[Array, "P 2"]
    ) -> Bool[Array, " P"]:
        """For each segment from `a[p]` to `b[p]`, whether it avoids the open
        interior of every building block. Segments that only graze a block
        edge or corner are clear.
        """
        a = jnp.atleast_2d(jnp.asarray(a, dtype=float))[:, None, :]
        b = jnp.atleast_2d(jnp.asarray(b, dtype=float))[:, None, :]
        blocks = jnp.asarray(self.blocks)
        if blocks.shape[0] == 0 or a.shape[0] == 0:
            return jnp.ones(a.shape[0], dtype=bool)
        lo, hi = blocks[None, :, :2], blocks[None, :, 2:]
        d = b - a
        parallel = d == 0
        inside_slab = (a > lo) & (a < hi)
        safe_d = jnp.where(parallel, 1.0, d)
        t1, t2 = (lo - a) / safe_d, (hi - a) / safe_d
        t_near = jnp.where(
            parallel, jnp.where(inside_slab, -jnp.inf, jnp.inf), jnp.minimum(t1, t2)
        )
        t_far = jnp.where(
            parallel, jnp.where(inside_slab, jnp.inf, -jnp.inf), jnp.maximum(t1, t2)
        )
        enter = jnp.maximum(t_near.max(axis=-1), 0.0)
        leave = jnp.minimum(t_far.min(axis=-1), 1.0)
        blocked = (leave - enter > 1e-12).any(axis=-1)
        return ~blocked
