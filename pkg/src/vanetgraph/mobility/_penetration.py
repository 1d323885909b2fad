"""
Penetration-ratio sampling of the equipped vehicles.
"""

__all__ = ["PenetrationSample", "sample_penetration"]

import math
from typing import Iterable

import equinox as eqx
import jax.random as jr
import numpy as np
from equinox import field

from ..errors import DomainError


class PenetrationSample(eqx.Module, strict=True):
    """The vehicles equipped with a radio at a given penetration ratio.

    Selections are prefixes of a seeded permutation, so for a fixed seed
    the selection at a smaller ratio is contained in the selection at any
    larger ratio.

    **Attributes:**

    `ratio`: The fraction of equipped vehicles, in `(0, 1]`.

    `seed`: The seed of the permutation.

    `selected`: The selected ids, in permutation order.
    """

    ratio: float = field(static=True, converter=float)
    seed: int = field(static=True, converter=int)
    selected: tuple[str, ...] = field(static=True, converter=tuple)

    def __check_init__(self):
        if not 0.0 < self.ratio <= 1.0:
            raise DomainError(
                f"Penetration ratio must lie in (0, 1]. Got {self.ratio}."
            )

    def __contains__(self, vehicle_id: str) -> bool:
        return vehicle_id in self.selected_set

    @property
    def selected_set(self) -> frozenset[str]:
        return frozenset(self.selected)


def sample_penetration(
    vehicle_ids: Iterable[str], ratio: float, seed: int
) -> PenetrationSample:
    """Select `round(ratio * n)` of `n` distinct vehicle ids.

    **Arguments:**

    `vehicle_ids`: The candidate ids. Duplicates and input order are ignored.

    `ratio`: The penetration ratio in `(0, 1]`.

    `seed`: The seed of the permutation.
    """
    if not 0.0 < ratio <= 1.0:
        raise DomainError(f"Penetration ratio must lie in (0, 1]. Got {ratio}.")
    ids = sorted(set(vehicle_ids))
    n = len(ids)
    count = math.floor(ratio * n + 0.5)
    if n == 0:
        return PenetrationSample(ratio, seed, ())
    order = np.asarray(jr.permutation(jr.PRNGKey(seed), n))
    return PenetrationSample(ratio, seed, tuple(ids[i] for i in order[:count]))
