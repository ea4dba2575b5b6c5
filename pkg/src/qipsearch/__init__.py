"""Exact game-tree search for binary quantified integer programs."""

from .core import (
    INF,
    A,
    E,
    MonotoneStatus,
    QipError,
    QipInstance,
    Quant,
    block_structure,
    detect_monotone,
    evaluate_game,
    format_value,
    validate,
)
from .formats import export_dep, import_qdimacs, parse, read_qip, serialize, write_qip
from .generators import RandomParams, RunwayParams, gen_random, gen_runway
from .oracle import INFEASIBLE, minimax, optimal_strategy, principal_variation
from .scp import BoundUpdated, SubtreePruned, recycle_strategy
from .solver import Scp, SearchOptions, SolveResult, Status, check_feasibility, solve

__version__ = "0.1.0"

__all__ = [
    "INF", "A", "E", "MonotoneStatus", "QipError", "QipInstance", "Quant",
    "block_structure", "detect_monotone", "evaluate_game", "format_value", "validate",
    "export_dep", "import_qdimacs", "parse", "read_qip", "serialize", "write_qip",
    "RandomParams", "RunwayParams", "gen_random", "gen_runway",
    "INFEASIBLE", "minimax", "optimal_strategy", "principal_variation",
    "BoundUpdated", "SubtreePruned", "recycle_strategy",
    "Scp", "SearchOptions", "SolveResult", "Status", "check_feasibility", "solve",
]
