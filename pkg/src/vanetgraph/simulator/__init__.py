from ._traffic import (
    Flow as Flow,
    TrafficConfig as TrafficConfig,
    emission_schedule as emission_schedule,
    make_flows as make_flows,
)
from ._records import (
    DROP_REASONS as DROP_REASONS,
    PacketRecord as PacketRecord,
    RoutingComparison as RoutingComparison,
    RoutingStats as RoutingStats,
    average_routing_stats as average_routing_stats,
    routing_comparison as routing_comparison,
    routing_stats as routing_stats,
)
from ._packet import PacketState as PacketState
from ._beacon import (
    GraphBeacon as GraphBeacon,
    compute_beacons as compute_beacons,
)
from ._vadd import (
    enhanced_forwarder_select as enhanced_forwarder_select,
    expected_road_delay as expected_road_delay,
    rank_roads as rank_roads,
    vadd_intersection_decision as vadd_intersection_decision,
)
from ._gpcr import (
    COORDINATOR_MODES as COORDINATOR_MODES,
    coordinator_mask as coordinator_mask,
    gpcr_coordinator_detect as gpcr_coordinator_detect,
    gpcr_forward_step as gpcr_forward_step,
)
from ._protocols import (
    CARRY as CARRY,
    DROP as DROP,
    PROTOCOLS as PROTOCOLS,
    AbstractRoutingProtocol as AbstractRoutingProtocol,
    GpcrRouting as GpcrRouting,
    TickView as TickView,
    VaddRouting as VaddRouting,
    make_routing_protocol as make_routing_protocol,
)
from ._simulation import (
    SimulationResult as SimulationResult,
    run_simulation as run_simulation,
)
