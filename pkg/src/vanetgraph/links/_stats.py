"""
Connected periods, link durations and re-healing times.
"""

__all__ = [
    "QUANTITIES",
    "LinkStats",
    "PairLinkStats",
    "SummaryStats",
    "empirical_cdf",
    "link_stats",
]

from typing import Mapping, Optional

import equinox as eqx
import jax.numpy as jnp
import numpy as np
from equinox import field
from jaxtyping import Array, ArrayLike, Float

from ._timeline import LinkTimeline, Pair


QUANTITIES = ("connected_periods", "link_duration", "rehealing")
LINK_CLASSES = ("v2v", "v2i", "i2i")


class SummaryStats(eqx.Module, strict=True):
    """Min, max, mean and median of a sample. All absent for an empty one."""

    count: int = field(static=True)
    min: Optional[float] = field(static=True, default=None)
    max: Optional[float] = field(static=True, default=None)
    mean: Optional[float] = field(static=True, default=None)
    median: Optional[float] = field(static=True, default=None)

    @classmethod
    def of(cls, values: ArrayLike) -> "SummaryStats":
        values = np.asarray(values, dtype=float).reshape(-1)
        if values.size == 0:
            return cls(0)
        return cls(
            int(values.size),
            float(values.min()),
            float(values.max()),
            float(values.mean()),
            float(np.median(values)),
        )


class PairLinkStats(eqx.Module, strict=True):
    """Link-level statistics of one node pair.

    **Attributes:**

    `pair`, `kinds`: The node pair and their kinds.

    `period_count`: Number of connected periods.

    `durations`: `t_c - t_o` per period, in seconds.

    `duration_ticks`: Number of linked ticks times the tick, per period.

    `rehealings`: `t_m - t_k` between consecutive periods, in seconds.

    `censored`: Whether the first or last period touches the window edge.
    """

    pair: Pair = field(static=True, converter=tuple)
    kinds: tuple[str, str] = field(static=True, converter=tuple)
    period_count: int = field(static=True)
    durations: tuple[float, ...] = field(static=True, converter=tuple)
    duration_ticks: tuple[float, ...] = field(static=True, converter=tuple)
    rehealings: tuple[float, ...] = field(static=True, converter=tuple)
    censored: bool = field(static=True, default=False)


class LinkStats(eqx.Module, strict=True):
    """Per-pair and aggregate link statistics.

    **Attributes:**

    `pairs`: Per-pair statistics, sorted by pair.

    `aggregates`: Summary of every quantity in `QUANTITIES` over all pairs.

    `class_aggregates`: The same summaries per link class (`v2v`, `v2i`,
    `i2i`).
    """

    pairs: tuple[PairLinkStats, ...]
    aggregates: dict[str, SummaryStats]
    class_aggregates: dict[str, dict[str, SummaryStats]]

    def samples(self, quantity: str, link_class: Optional[str] = None) -> np.ndarray:
        """The pooled sample behind an aggregate."""
        pairs = [
            p
            for p in self.pairs
            if link_class is None or _link_class(p.kinds) == link_class
        ]
        if quantity == "connected_periods":
            values = [float(p.period_count) for p in pairs]
        elif quantity == "link_duration":
            values = [d for p in pairs for d in p.durations]
        elif quantity == "rehealing":
            values = [r for p in pairs for r in p.rehealings]
        else:
            raise ValueError(f"Unknown quantity {quantity!r}.")
        return np.asarray(values, dtype=float)

    def cdf(self, quantity: str) -> tuple[Float[Array, " K"], Float[Array, " K"]]:
        return empirical_cdf(self.samples(quantity))


def _link_class(kinds: tuple[str, str]) -> str:
    return LINK_CLASSES[sum(kind == "rsu" for kind in kinds)]


def empirical_cdf(
    values: ArrayLike,
) -> tuple[Float[Array, " K"], Float[Array, " K"]]:
    """The distinct values of a sample and the fraction of the sample at or
    below each of them. The fractions are non-decreasing and end at 1."""
    values = jnp.asarray(values, dtype=float).reshape(-1)
    if values.size == 0:
        return jnp.zeros(0), jnp.zeros(0)
    support, counts = jnp.unique(values, return_counts=True)
    cumulative = jnp.cumsum(counts)
    return support, cumulative / cumulative[-1]


def _pair_stats(timeline: LinkTimeline) -> PairLinkStats:
    intervals = np.asarray(timeline.intervals, dtype=float).reshape(-1, 2)
    durations = intervals[:, 1] - intervals[:, 0]
    return PairLinkStats(
        pair=timeline.pair,
        kinds=timeline.kinds,
        period_count=timeline.period_count,
        durations=tuple(durations.tolist()),
        duration_ticks=tuple((durations + timeline.tick).tolist()),
        rehealings=tuple((intervals[1:, 0] - intervals[:-1, 1]).tolist()),
        censored=timeline.censored_start or timeline.censored_end,
    )


def link_stats(timelines: Mapping[Pair, LinkTimeline]) -> LinkStats:
    """Durations `t_c - t_o` of every connected period, re-healing times
    `t_m - t_k` between consecutive periods of a pair, and their aggregates.
    """
    pairs = tuple(_pair_stats(timelines[pair]) for pair in sorted(timelines))
    stats = LinkStats(pairs, {}, {})
    aggregates = {q: SummaryStats.of(stats.samples(q)) for q in QUANTITIES}
    class_aggregates = {
        c: {q: SummaryStats.of(stats.samples(q, c)) for q in QUANTITIES}
        for c in LINK_CLASSES
    }
    return LinkStats(pairs, aggregates, class_aggregates)
