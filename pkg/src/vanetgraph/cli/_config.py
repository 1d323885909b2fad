"""
The scenario configuration shared by every command.
"""

__all__ = ["ScenarioConfig", "load_config_file"]

import dataclasses
import json
import os
from typing import Any, Callable, Mapping, Optional

import equinox as eqx
from equinox import field

from ..coordinates import Region
from ..errors import ConfigError, DomainError
from ..graph import LosMode
from ..mobility import GridScenarioConfig, RoadGrid
from ..simulator import COORDINATOR_MODES, PROTOCOLS, TrafficConfig


def _optional(parse: Callable[[Any], Any]) -> Callable[[Any], Any]:
    def parse_optional(value):
        return None if value is None or value == "" else parse(value)

    return parse_optional


def _boolean(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _floats(value: Any) -> tuple[float, ...]:
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    elif not isinstance(value, (list, tuple)):
        value = [value]
    return tuple(float(v) for v in value)


def _region(value: Any) -> tuple[float, float, float, float]:
    bounds = _floats(value)
    if len(bounds) != 4:
        raise ValueError("expected x_min, y_min, x_max, y_max")
    return bounds


def _text(value: Any) -> str:
    return str(value)


class ScenarioConfig(eqx.Module, strict=True):
    """Every setting of a run, as flat keys.

    **Attributes:**

    `trace`, `trace_format`: Path and format of a mobility trace. Without a
    trace, a grid scenario is synthesized from `grid_size`,
    `street_spacing`, `vehicle_count`, `speed_min`, `speed_max` and
    `duration`.

    `region`: `(x_min, y_min, x_max, y_max)` of the study area. Defaults to
    the synthetic grid, or the bounding box of the trace.

    `dt`: The snapshot tick in seconds.

    `window_start`, `window_length`: The analysed window in seconds.
    Defaults to the whole trajectory coverage.

    `transmission_range`, `los_mode`: The radio model.

    `penetration`: Penetration ratios, each run separately.

    `seed`: Seed of every random draw.

    `rsus`, `rsu_count`, `rsu_placement`: An RSU catalogue file, or a
    number of synthetic RSUs placed `uniform`ly or at `intersections`.

    `betweenness`, `communities`, `stride`: Metric toggles. Betweenness is
    computed every `stride` ticks.

    `workers`: Worker processes, capped by `VGS_THREADS`.

    `protocol`, `gpcr_mode`, `lobby_threshold`, `runs`, `senders`,
    `cbr_rate`, `ttl`, `destination_policy`, `hop_latency`,
    `max_hops_per_tick`, `compare`: Routing settings.
    """

    trace: Optional[str] = field(static=True, default=None)
    trace_format: Optional[str] = field(static=True, default=None)
    grid_size: int = field(static=True, default=10)
    street_spacing: float = field(static=True, default=200.0)
    corridor_width: float = field(static=True, default=20.0)
    junction_radius: float = field(static=True, default=30.0)
    vehicle_count: int = field(static=True, default=150)
    speed_min: float = field(static=True, default=5.0)
    speed_max: float = field(static=True, default=15.0)
    duration: float = field(static=True, default=600.0)
    region: Optional[tuple[float, float, float, float]] = field(
        static=True, default=None
    )
    dt: float = field(static=True, default=1.0)
    window_start: Optional[float] = field(static=True, default=None)
    window_length: Optional[float] = field(static=True, default=None)
    transmission_range: float = field(static=True, default=300.0)
    los_mode: LosMode = field(static=True, default="unit_disk")
    penetration: tuple[float, ...] = field(static=True, default=(1.0,))
    seed: int = field(static=True, default=0)
    rsus: Optional[str] = field(static=True, default=None)
    rsu_count: int = field(static=True, default=0)
    rsu_placement: str = field(static=True, default="uniform")
    betweenness: bool = field(static=True, default=True)
    communities: bool = field(static=True, default=True)
    stride: int = field(static=True, default=1)
    workers: Optional[int] = field(static=True, default=None)
    protocol: str = field(static=True, default="vadd_baseline")
    gpcr_mode: str = field(static=True, default="neighbor_table")
    lobby_threshold: Optional[int] = field(static=True, default=None)
    runs: int = field(static=True, default=5)
    senders: int = field(static=True, default=15)
    cbr_rate: float = field(static=True, default=0.1)
    ttl: Optional[float] = field(static=True, default=None)
    destination_policy: str = field(static=True, default="node")
    hop_latency: float = field(static=True, default=0.005)
    max_hops_per_tick: int = field(static=True, default=100)
    compare: bool = field(static=True, default=False)

    def __check_init__(self):
        for name in (
            "dt",
            "transmission_range",
            "street_spacing",
            "duration",
            "cbr_rate",
            "hop_latency",
        ):
            if not getattr(self, name) > 0:
                raise ConfigError("must be positive", name)
        if self.window_length is not None and not self.window_length > 0:
            raise ConfigError("must be positive", "window_length")
        if not self.penetration:
            raise ConfigError("at least one ratio is required", "penetration")
        for ratio in self.penetration:
            if not 0.0 < ratio <= 1.0:
                raise ConfigError(f"ratio {ratio} is outside (0, 1]", "penetration")
        for name in ("stride", "runs", "senders", "max_hops_per_tick"):
            if getattr(self, name) < 1:
                raise ConfigError("must be at least 1", name)
        if self.rsu_count < 0:
            raise ConfigError("must not be negative", "rsu_count")
        if self.workers is not None and self.workers < 1:
            raise ConfigError("must be at least 1", "workers")
        choices = {
            "los_mode": ("unit_disk", "manhattan_los"),
            "rsu_placement": ("uniform", "intersections"),
            "protocol": PROTOCOLS,
            "gpcr_mode": COORDINATOR_MODES,
            "destination_policy": ("node", "geo"),
        }
        for name, allowed in choices.items():
            if getattr(self, name) not in allowed:
                raise ConfigError(
                    f"expected one of {allowed}, got {getattr(self, name)!r}", name
                )
        if self.region is not None:
            try:
                Region(*self.region)
            except DomainError as err:
                raise ConfigError(str(err), "region") from err

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "ScenarioConfig":
        """Build a configuration from flat keys, parsing text values.
        Unknown keys and unparsable values raise `ConfigError`."""
        kwargs = {}
        for key, value in values.items():
            if key not in _PARSERS:
                raise ConfigError("unknown configuration key", key)
            try:
                kwargs[key] = _PARSERS[key](value)
            except (TypeError, ValueError) as err:
                raise ConfigError(f"invalid value {value!r} ({err})", key) from err
        return cls(**kwargs)

    @classmethod
    def from_sources(
        cls, path: Optional[str | os.PathLike] = None, **overrides: Any
    ) -> "ScenarioConfig":
        """Defaults, overridden by the JSON file at `path`, overridden by
        the `overrides` that are not `None`."""
        values: dict[str, Any] = {}
        if path is not None:
            values.update(load_config_file(path))
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_mapping(values)

    def to_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}

    @property
    def grid_scenario(self) -> GridScenarioConfig:
        return GridScenarioConfig(
            grid_size=self.grid_size,
            street_spacing=self.street_spacing,
            vehicle_count=self.vehicle_count,
            speed_range=(self.speed_min, self.speed_max),
            duration=self.duration,
            dt=self.dt,
            seed=self.seed,
            corridor_width=self.corridor_width,
        )

    def road_map(self, region: Region) -> RoadGrid:
        return RoadGrid(
            region, self.street_spacing, self.corridor_width, self.junction_radius
        )

    def traffic(self) -> TrafficConfig:
        return TrafficConfig(
            sender_count=self.senders,
            packets_per_second=self.cbr_rate,
            destination_policy=self.destination_policy,
            ttl=self.ttl,
            hop_latency=self.hop_latency,
            max_hops_per_tick=self.max_hops_per_tick,
        )


_PARSERS: dict[str, Callable[[Any], Any]] = {
    "trace": _optional(_text),
    "trace_format": _optional(_text),
    "grid_size": int,
    "street_spacing": float,
    "corridor_width": float,
    "junction_radius": float,
    "vehicle_count": int,
    "speed_min": float,
    "speed_max": float,
    "duration": float,
    "region": _optional(_region),
    "dt": float,
    "window_start": _optional(float),
    "window_length": _optional(float),
    "transmission_range": float,
    "los_mode": _text,
    "penetration": _floats,
    "seed": int,
    "rsus": _optional(_text),
    "rsu_count": int,
    "rsu_placement": _text,
    "betweenness": _boolean,
    "communities": _boolean,
    "stride": int,
    "workers": _optional(int),
    "protocol": _text,
    "gpcr_mode": _text,
    "lobby_threshold": _optional(int),
    "runs": int,
    "senders": int,
    "cbr_rate": float,
    "ttl": _optional(float),
    "destination_policy": _text,
    "hop_latency": float,
    "max_hops_per_tick": int,
    "compare": _boolean,
}


def load_config_file(path: str | os.PathLike) -> dict[str, Any]:
    """Read a flat JSON object of configuration keys."""
    with open(path, "r", encoding="utf-8") as stream:
        try:
            values = json.load(stream)
        except json.JSONDecodeError as err:
            raise ConfigError(
                f"{path} is not valid JSON ({err.msg})", "config"
            ) from err
    if not isinstance(values, dict):
        raise ConfigError(f"{path} must hold a JSON object", "config")
    return values
