from ._degree import (
    degree_vector as degree_vector,
    graph_density as graph_density,
    degree_histogram as degree_histogram,
    degree_distribution as degree_distribution,
    degree_skewness as degree_skewness,
    fit_powerlaw_exponent as fit_powerlaw_exponent,
)
from ._paths import (
    SeparationProfile as SeparationProfile,
    hop_distances as hop_distances,
    effective_diameter as effective_diameter,
    diameter as diameter,
    avg_separation as avg_separation,
    separation_by_distance as separation_by_distance,
)
from ._centrality import (
    ZonalBetweenness as ZonalBetweenness,
    betweenness_centrality as betweenness_centrality,
    lobby_index as lobby_index,
    zonal_betweenness as zonal_betweenness,
)
from ._clusters import (
    ClusterReport as ClusterReport,
    connected_components as connected_components,
    cluster_coefficient as cluster_coefficient,
    triangle_count as triangle_count,
    biggest_cluster_report as biggest_cluster_report,
)
from ._communities import (
    CommunityBalance as CommunityBalance,
    Partition as Partition,
    community_balance as community_balance,
    detect_communities as detect_communities,
    modularity as modularity,
)
from ._suite import (
    GraphMetrics as GraphMetrics,
    NodeMetrics as NodeMetrics,
    SnapshotAnalysis as SnapshotAnalysis,
    analyze_snapshot as analyze_snapshot,
)
