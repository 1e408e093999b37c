"""Charge-tour scheduling for sector chargers under asymmetric travel costs."""

from .errors import (
    InfeasibleError,
    MalformedScheduleError,
    MalformedTourError,
    SchedulingError,
    ValidationError,
)
from .model import (
    AsymmetryField,
    DmcParams,
    EnergyBreakdown,
    NetworkInstance,
    Node,
    RoutingMatrices,
    build_routing_matrices,
    energy_accounting,
    final_node_energy,
    ra_coefficients,
    ra_distance,
    received_energy,
    segment_move_energy_time,
    tour_move_energy_time,
    transfer_coefficient,
)
from .positions import (
    ChargingPositionSet,
    Cluster,
    kmeans,
    min_enclosing_circle,
    select_charging_positions,
)
from .directions import (
    CoefficientMatrix,
    PosDirPair,
    build_coefficient_matrix,
    nodes_in_range,
    representative_directions,
)
from .timing import LpProblem, LpSolution, build_time_lp, solve_lp
from .routing import (
    DirectedCostGraph,
    SymmetricReformulation,
    Tour,
    brute_force_tour,
    cost_graph,
    expand_tour,
    greedy_tour,
    held_karp,
    lk_tour,
    metric_closure,
    read_cost_matrix,
    to_symmetric,
    tour_cost,
    write_cost_matrix,
)
from .pipeline import (
    MOVE,
    TRANSMIT,
    OperationSchedule,
    ScheduleItem,
    ScheduleMetrics,
    execute_schedule,
    one_to_one_schedule,
    plan_schedule,
)

__version__ = "0.1.0"
