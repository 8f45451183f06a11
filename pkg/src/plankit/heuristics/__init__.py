"""Heuristic registry.

Baseline estimators work on any ground task; the ``*-r1`` family is
hand-written for one domain each and binds that domain's predicates through
a role manifest at construction time.
"""

from __future__ import annotations

from ..errors import BindingError, UnknownHeuristic
from ..grounding import GroundTask
from .basic import BlindHeuristic, GoalCountHeuristic, Heuristic, INFINITY
from .bindings import DomainBindings, resolve_bindings
from .domains import (
    UNASSIGNED_PENALTY,
    BlocksworldStackingHeuristic,
    ChildsnackCountHeuristic,
    FloortileManhattanHeuristic,
    MiconicServeHeuristic,
    RoversMissionHeuristic,
    SokobanDistanceHeuristic,
    SpannerGreedyHeuristic,
    TransportDeliveryHeuristic,
)
from .relaxation import AdditiveHeuristic, FFHeuristic

BASELINE_HEURISTICS = {
    "blind": BlindHeuristic,
    "goal-count": GoalCountHeuristic,
    "add": AdditiveHeuristic,
    "ff": FFHeuristic,
}

DOMAIN_HEURISTICS = {
    "bw-r1": BlocksworldStackingHeuristic,
    "spanner-r1": SpannerGreedyHeuristic,
    "miconic-r1": MiconicServeHeuristic,
    "sokoban-r1": SokobanDistanceHeuristic,
    "transport-r1": TransportDeliveryHeuristic,
    "childsnack-r1": ChildsnackCountHeuristic,
    "floortile-r1": FloortileManhattanHeuristic,
    "rovers-r1": RoversMissionHeuristic,
}

HEURISTICS = {**BASELINE_HEURISTICS, **DOMAIN_HEURISTICS}


def heuristic_names() -> list[str]:
    return sorted(HEURISTICS)


def make_heuristic(name: str, task: GroundTask) -> Heuristic:
    try:
        cls = HEURISTICS[name]
    except KeyError:
        raise UnknownHeuristic(
            f"unknown heuristic '{name}' (available: {', '.join(heuristic_names())})"
        ) from None
    return cls(task)


def for_domain(task: GroundTask) -> Heuristic:
    """The hand-written heuristic matching the task's domain name."""
    for name, cls in DOMAIN_HEURISTICS.items():
        if cls.manifest_domain == task.domain_name:
            return cls(task)
    raise BindingError(f"no domain heuristic for '{task.domain_name}'")


__all__ = [
    "BASELINE_HEURISTICS",
    "DOMAIN_HEURISTICS",
    "HEURISTICS",
    "DomainBindings",
    "Heuristic",
    "INFINITY",
    "UNASSIGNED_PENALTY",
    "heuristic_names",
    "make_heuristic",
    "for_domain",
    "resolve_bindings",
]
