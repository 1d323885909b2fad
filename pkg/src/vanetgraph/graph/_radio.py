"""
Radio models that decide whether two nodes can communicate directly.
"""

__all__ = [
    "AbstractRadioModel",
    "LosMode",
    "UnitDiskRadio",
    "ManhattanLosRadio",
    "make_radio_model",
]

from abc import abstractmethod
from typing import ClassVar, Literal, Optional

import equinox as eqx
import jax.numpy as jnp
import numpy as np
from equinox import AbstractClassVar, AbstractVar, field
from jaxtyping import Array, Bool, Float
from typing_extensions import override

from ..errors import ConfigError
from ..mobility import RoadGrid


LosMode = Literal["unit_disk", "manhattan_los"]


class AbstractRadioModel(eqx.Module, strict=True):
    """Base class for a radio model. Links are symmetric and exist only
    between nodes at Euclidean distance at most `transmission_range`.
    Subclasses may veto in-range links with `link_mask`.
    """

    transmission_range: AbstractVar[float]
    los_mode: AbstractClassVar[str]

    def __check_init__(self):
        if not self.transmission_range > 0:
            raise ConfigError("must be positive", "range")

    @abstractmethod
    def link_mask(
        self, a: Float[Array, "P 2"], b: Float[Array, "P 2"]
    ) -> Bool[Array, " P"]:
        """For in-range pairs of positions, whether the link exists."""
        raise NotImplementedError


class UnitDiskRadio(AbstractRadioModel, strict=True):
    """Every pair within range is linked."""

    transmission_range: float = field(static=True, converter=float)
    los_mode: ClassVar[str] = "unit_disk"

    @override
    def link_mask(
        self, a: Float[Array, "P 2"], b: Float[Array, "P 2"]
    ) -> Bool[Array, " P"]:
        return jnp.ones(np.shape(a)[0], dtype=bool)


class ManhattanLosRadio(AbstractRadioModel, strict=True):
    """Pairs within range are linked only with line of sight, i.e. when the
    segment between them does not cross a building block of `road_map`."""

    transmission_range: float = field(static=True, converter=float)
    road_map: RoadGrid
    los_mode: ClassVar[str] = "manhattan_los"

    @override
    def link_mask(
        self, a: Float[Array, "P 2"], b: Float[Array, "P 2"]
    ) -> Bool[Array, " P"]:
        return self.road_map.line_of_sight(a, b)


def make_radio_model(
    transmission_range: float,
    los_mode: str = "unit_disk",
    road_map: Optional[RoadGrid] = None,
) -> AbstractRadioModel:
    """Build a radio model from its configuration values."""
    if los_mode == "unit_disk":
        return UnitDiskRadio(transmission_range)
    elif los_mode == "manhattan_los":
        if road_map is None:
            raise ConfigError("manhattan_los requires a road map", "los_mode")
        return ManhattanLosRadio(transmission_range, road_map)
    else:
        raise ConfigError(
            f"expected 'unit_disk' or 'manhattan_los', got {los_mode!r}", "los_mode"
        )
