"""plankit: a small classical-planning engine and benchmark harness.

Parse a typed STRIPS domain and problem, ground them to integer-indexed
atoms and actions, search with greedy best-first and a pluggable heuristic,
validate plans, and run evaluate-then-select experiments over pools of
candidate heuristics, including ones hosted in external processes.
"""

from .errors import PlankitError
from .grounding import GroundAction, GroundAtom, GroundTask, ground, make_ground_task
from .harness import (
    CandidateHeuristic,
    EvalRecord,
    SelectionReport,
    agile_score,
    evaluate_pool,
    expansions_per_second,
    select_best,
)
from .heuristics import make_heuristic
from .pddl import parse_domain, parse_problem
from .search import SearchResult, SearchStatus, bfs_oracle, gbfs
from .validation import parse_plan_text, validate_plan

__version__ = "0.1.0"

__all__ = [
    "PlankitError",
    "GroundAction",
    "GroundAtom",
    "GroundTask",
    "ground",
    "make_ground_task",
    "CandidateHeuristic",
    "EvalRecord",
    "SelectionReport",
    "agile_score",
    "evaluate_pool",
    "expansions_per_second",
    "select_best",
    "make_heuristic",
    "parse_domain",
    "parse_problem",
    "SearchResult",
    "SearchStatus",
    "bfs_oracle",
    "gbfs",
    "parse_plan_text",
    "validate_plan",
    "__version__",
]
