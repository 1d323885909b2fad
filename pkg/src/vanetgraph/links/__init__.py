from ._timeline import (
    LinkTimeline as LinkTimeline,
    Pair as Pair,
    build_link_timelines as build_link_timelines,
    merge_link_timelines as merge_link_timelines,
    reconstruct_connectivity as reconstruct_connectivity,
)
from ._stats import (
    QUANTITIES as QUANTITIES,
    LinkStats as LinkStats,
    PairLinkStats as PairLinkStats,
    SummaryStats as SummaryStats,
    empirical_cdf as empirical_cdf,
    link_stats as link_stats,
)
