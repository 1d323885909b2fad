"""
Per-pair connectivity timelines folded from a snapshot stream.
"""

__all__ = [
    "LinkTimeline",
    "Pair",
    "build_link_timelines",
    "merge_link_timelines",
    "reconstruct_connectivity",
]

import logging
from typing import Iterable, Mapping, Sequence

import equinox as eqx
import numpy as np
from equinox import field

from ..errors import ValidationError
from ..graph import Snapshot


logger = logging.getLogger(__name__)

Pair = tuple[str, str]


class LinkTimeline(eqx.Module, strict=True):
    """The connected periods of one node pair.

    **Attributes:**

    `pair`: The unordered pair, stored sorted.

    `kinds`: Node kinds of `pair[0]` and `pair[1]`.

    `intervals`: Sorted, disjoint `(t_o, t_c)` tick bounds, both inclusive.

    `tick`: The snapshot tick in seconds.

    `censored_start`: The first interval begins at the first snapshot.

    `censored_end`: The last interval ends at the last snapshot.
    """

    pair: Pair = field(static=True, converter=tuple)
    kinds: tuple[str, str] = field(static=True, converter=tuple)
    intervals: tuple[tuple[float, float], ...] = field(static=True, converter=tuple)
    tick: float = field(static=True, converter=float)
    censored_start: bool = field(static=True, default=False)
    censored_end: bool = field(static=True, default=False)

    def __check_init__(self):
        previous_end = None
        for t_o, t_c in self.intervals:
            if t_o > t_c:
                raise ValidationError(
                    f"Interval ({t_o}, {t_c}) of {self.pair} ends early."
                )
            if previous_end is not None and t_o - previous_end < self.tick * (1 - 1e-9):
                raise ValidationError(f"Intervals of {self.pair} overlap or touch.")
            previous_end = t_c

    @property
    def period_count(self) -> int:
        return len(self.intervals)

    @property
    def link_class(self) -> str:
        """`"v2v"`, `"v2i"` or `"i2i"`."""
        rsus = sum(kind == "rsu" for kind in self.kinds)
        return ("v2v", "v2i", "i2i")[rsus]


def _check_tick(times: Sequence[float]) -> float:
    if len(times) < 2:
        return 1.0
    steps = np.diff(np.asarray(times, dtype=float))
    tick = float(steps[0])
    if tick <= 0 or not np.allclose(steps, tick, rtol=1e-9, atol=1e-9):
        raise ValidationError(
            "Snapshots must be strictly increasing in time with a uniform tick."
        )
    return tick


def build_link_timelines(snapshots: Iterable[Snapshot]) -> dict[Pair, LinkTimeline]:
    """Fold snapshots into one timeline per node pair that was ever linked.

    Maximal runs of consecutive linked ticks become the intervals
    `[first_tick, last_tick]`. Intervals that touch the first or last
    snapshot are flagged as censored.
    """
    times: list[float] = []
    kinds: dict[str, str] = {}
    open_since: dict[Pair, float] = {}
    closed: dict[Pair, list[tuple[float, float]]] = {}
    for snapshot in snapshots:
        if times and snapshot.time <= times[-1]:
            raise ValidationError("Snapshots must be strictly increasing in time.")
        times.append(snapshot.time)
        if len(times) >= 3:
            _check_tick(times[-3:])
        kinds.update(zip(snapshot.node_ids, snapshot.kinds))
        current = snapshot.edge_pairs()
        for pair in list(open_since):
            if pair not in current:
                closed.setdefault(pair, []).append((open_since.pop(pair), times[-2]))
        for pair in current:
            if pair not in open_since:
                open_since[pair] = snapshot.time
    if not times:
        return {}
    tick = _check_tick(times)
    for pair, start in open_since.items():
        closed.setdefault(pair, []).append((start, times[-1]))

    first, last = times[0], times[-1]
    timelines = {}
    for pair in sorted(closed):
        intervals = closed[pair]
        timelines[pair] = LinkTimeline(
            pair,
            (kinds[pair[0]], kinds[pair[1]]),
            intervals,
            tick,
            censored_start=intervals[0][0] == first,
            censored_end=intervals[-1][1] == last,
        )
    logger.debug("Folded %d ticks into %d link timelines.", len(times), len(timelines))
    return timelines


def _with_flags(timeline: LinkTimeline, start: bool, end: bool) -> LinkTimeline:
    return LinkTimeline(
        timeline.pair,
        timeline.kinds,
        timeline.intervals,
        timeline.tick,
        censored_start=start,
        censored_end=end,
    )


def merge_link_timelines(
    earlier: Mapping[Pair, LinkTimeline], later: Mapping[Pair, LinkTimeline]
) -> dict[Pair, LinkTimeline]:
    """Merge the timelines of two consecutive tick ranges into the timelines
    of the joint range. An interval that ends on the last tick of `earlier`
    and one that starts on the first tick of `later` are joined. The merge
    is associative.
    """
    merged = {}
    for pair, left in earlier.items():
        if pair not in later:
            merged[pair] = _with_flags(left, left.censored_start, False)
    for pair, right in later.items():
        left = earlier.get(pair)
        if left is None:
            merged[pair] = _with_flags(right, False, right.censored_end)
            continue
        intervals = list(left.intervals)
        right_intervals = list(right.intervals)
        joined = (
            left.censored_end
            and right.censored_start
            and abs(right_intervals[0][0] - intervals[-1][1] - left.tick)
            <= 1e-9 * max(1.0, left.tick)
        )
        if joined:
            intervals[-1] = (intervals[-1][0], right_intervals.pop(0)[1])
        merged[pair] = LinkTimeline(
            pair,
            left.kinds,
            intervals + right_intervals,
            left.tick,
            censored_start=left.censored_start,
            censored_end=right.censored_end,
        )
    return dict(sorted(merged.items()))


def reconstruct_connectivity(
    timelines: Mapping[Pair, LinkTimeline], times: Sequence[float]
) -> dict[Pair, np.ndarray]:
    """The per-tick connectivity of every pair, replayed from its intervals."""
    times = np.asarray(times, dtype=float)
    connectivity = {}
    for pair, timeline in timelines.items():
        linked = np.zeros(times.size, dtype=bool)
        for t_o, t_c in timeline.intervals:
            linked |= (times >= t_o) & (times <= t_c)
        connectivity[pair] = linked
    return connectivity
