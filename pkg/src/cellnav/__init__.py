"""Minimum-time UAV trajectory planning under a cellular-connectivity constraint."""

from .association import (
    AssociationSequence,
    enumerate_associations,
    prune_repeats,
    sequence_graph_weight,
    shortest_path_association,
)
from .bench import (
    BenchConfig,
    BenchmarkSummary,
    InstanceResult,
    SweepRow,
    instances_to_csv,
    run_benchmark,
    summary_to_csv,
    sweep_snr,
    sweep_to_csv,
)
from .connectivity import (
    CoverageGraph,
    build_graph,
    is_feasible,
    max_attainable_snr,
)
from .errors import (
    DegenerateSequence,
    Infeasible,
    OutOfRange,
    PlannerError,
    ScenarioFormatError,
    TooManyPaths,
    UnattainableSnr,
    Unreachable,
)
from .handover import (
    DEFAULT_SOLVER_CONFIG,
    FAST_SOLVER_CONFIG,
    HandoverRegion,
    HandoverSolution,
    SolverConfig,
    feasible_handover_points,
    handover_regions,
    optimize_handovers,
    polyline_length,
    project_two_disks,
)
from .planner import PlanResult, plan_optimal, plan_proposed, plan_straight
from .scenario import (
    CoverageRadius,
    Scenario,
    SnrTarget,
    compute_coverage_radius,
    db_to_linear,
    linear_to_db,
    load_scenario,
    nearest_gbs,
    scenario_from_dict,
    scenario_to_dict,
    snr_at,
)
from .svg import render_svg
from .trajectory import (
    Trajectory,
    build_trajectory,
    max_gap_distance_on_segment,
    sample_position,
    straight_flight,
    straight_flight_threshold,
    trajectory_to_csv,
    verify_connectivity,
    waypoints_to_csv,
)

__version__ = "0.1.0"
