"""Heuristic interface and the two trivial baselines."""

from __future__ import annotations

from math import inf

from ..grounding import GroundTask, State

INFINITY = inf


class Heuristic:
    """Per-task heuristic: construct once, then evaluate many states."""

    name = "heuristic"

    def __init__(self, task: GroundTask):
        self.task = task

    def evaluate(self, state: State) -> float:
        raise NotImplementedError


class BlindHeuristic(Heuristic):
    """0 on goal states, 1 everywhere else."""

    name = "blind"

    def evaluate(self, state: State) -> float:
        return 0 if self.task.goal <= state else 1


class GoalCountHeuristic(Heuristic):
    """Number of goal atoms not yet true."""

    name = "goal-count"

    def __init__(self, task: GroundTask):
        super().__init__(task)
        self._goal = task.goal

    def evaluate(self, state: State) -> float:
        return len(self._goal - state)
