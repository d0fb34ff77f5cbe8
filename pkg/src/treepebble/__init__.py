"""Exact pebbling numbers, extremal configurations and solvability on trees."""
from .errors import (
    AttributionMissing,
    BudgetExceeded,
    CapExceeded,
    CycleDetected,
    DegeneratePartition,
    Disconnected,
    DuplicateEdge,
    EmptyTarget,
    InvalidVertex,
    ParseError,
    PebblingError,
    SelfLoop,
    TreeError,
)
from .oracle import (
    Caps,
    ExtremalReport,
    brute_pi,
    check_observation,
    check_support_theorem,
    enumerate_partitions,
    generate_catalog,
    load_catalog,
    maximal_configurations,
)
from .partition import (
    ChungConfiguration,
    PathPartition,
    PiResult,
    chung_configuration,
    chung_sizes,
    dead_weight,
    max_path_partition,
    pi_single_target,
    pi_t_fold,
)
from .solver import (
    Budget,
    Move,
    Solution,
    Solver,
    Status,
    Verdict,
    greedy_collect,
    is_maximal_unsolvable,
    is_solvable,
    minimalize,
    replay,
    solution_stats,
)
from .target import FSequence, alpha, basic_bounds, path_pi, strong_target_slack, tree_pi
from .tree import (
    HullDecomposition,
    PebblingFn,
    RootedTree,
    Tree,
    build_tree,
    convex_hull,
    distances_from,
    format_edge_list,
    parse_edge_list,
    parse_pebbling_spec,
    path_tree,
    read_tree,
    star_tree,
)

__version__ = "0.1.0"
