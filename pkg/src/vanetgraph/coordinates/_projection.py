"""
Projection of GPS coordinates onto a local metric plane.
"""

__all__ = ["EARTH_RADIUS", "project_gps"]

import math

import jax.numpy as jnp
import numpy as np
from jaxtyping import ArrayLike

from ..errors import DomainError
from ..typing import RealVector


EARTH_RADIUS = 6_371_000.0
"""Mean earth radius in meters."""


def project_gps(
    lat: ArrayLike, lon: ArrayLike, reference: tuple[float, float]
) -> tuple[RealVector, RealVector]:
    """Project latitudes and longitudes to local planar coordinates with an
    equirectangular projection about `reference`. Adequate for regions of a
    few square kilometers.

    **Arguments:**

    `lat`: Latitudes in degrees. Scalars or arrays.

    `lon`: Longitudes in degrees, broadcastable against `lat`.

    `reference`: The `(lat, lon)` origin of the local plane in degrees.

    **Returns:**

    The `(x, y)` coordinates in meters, pointing east and north.
    """
    lat, lon = np.asarray(lat, dtype=float), np.asarray(lon, dtype=float)
    lat0, lon0 = float(reference[0]), float(reference[1])
    if not (abs(lat0) <= 90.0 and abs(lon0) <= 180.0):
        raise DomainError(f"Reference point {reference} is not a valid GPS position.")
    if not (np.all(np.abs(lat) <= 90.0) and np.all(np.abs(lon) <= 180.0)):
        raise DomainError(
            "Latitudes must lie in [-90, 90] and longitudes in [-180, 180]."
        )
    scale = EARTH_RADIUS * math.pi / 180.0
    x = scale * (jnp.asarray(lon) - lon0) * math.cos(math.radians(lat0))
    y = scale * (jnp.asarray(lat) - lat0)
    return x, y
