"""Constraint-programming solver for the Euclidean TSP with geometric
crossing-elimination and convex-hull-order propagators."""

from .engine import (
    ModelKind,
    SearchStats,
    SolveResult,
    SolveStatus,
    StrategyConfig,
    Tour,
    ValueHeuristic,
    VarHeuristic,
    solve,
    warm_start,
)
from .geometry import AllCollinearError, Orientation, Point
from .instances import (
    DistanceMode,
    Instance,
    gen_clustered,
    gen_uniform,
    parse_tsplib,
    write_tsplib,
)
from .oracle import (
    OracleResult,
    TooLargeError,
    count_crossings,
    enumerate_optimal,
    held_karp_dp,
    verify_hull_order,
)

__version__ = "0.1.0"

__all__ = [
    "AllCollinearError",
    "DistanceMode",
    "Instance",
    "ModelKind",
    "OracleResult",
    "Orientation",
    "Point",
    "SearchStats",
    "SolveResult",
    "SolveStatus",
    "StrategyConfig",
    "TooLargeError",
    "Tour",
    "ValueHeuristic",
    "VarHeuristic",
    "count_crossings",
    "enumerate_optimal",
    "gen_clustered",
    "gen_uniform",
    "held_karp_dp",
    "parse_tsplib",
    "solve",
    "verify_hull_order",
    "warm_start",
    "write_tsplib",
]
