"""Delete-relaxation heuristics: additive cost and relaxed-plan length.

Atom costs are computed by a Dijkstra-style fixpoint over the relaxed task:
an atom already true costs 0, anything else costs the cheapest achiever,
where an action costs 1 plus the sum of its precondition costs.  Each atom's
cost is finalised exactly once per evaluation.  The fixpoint also records a
best supporter per atom (cheapest achiever, ties broken by lowest action
index), from which the relaxed plan is extracted by backchaining.
"""

from __future__ import annotations

from heapq import heappop, heappush
from math import inf

from ..grounding import GroundTask, State
from .basic import Heuristic


class RelaxationScratch:
    """Reusable per-evaluation buffers for the relaxed-plan fixpoint."""

    def __init__(self, task: GroundTask):
        self.task = task
        n_atoms = len(task.atoms)
        n_actions = len(task.actions)
        # atom index -> indices of actions with that atom as a precondition
        self.consumers = [[] for _ in range(n_atoms)]
        self.pre_sizes = [0] * n_actions
        self.no_pre_actions = []
        for action in task.actions:
            self.pre_sizes[action.index] = len(action.pre)
            if not action.pre:
                self.no_pre_actions.append(action.index)
            for atom in action.pre:
                self.consumers[atom].append(action.index)
        self.cost = [inf] * n_atoms
        self.supporter = [-1] * n_atoms
        self.action_cost = [inf] * n_actions
        self._missing = [0] * n_actions
        self._done = [False] * n_atoms

    def run(self, state: State) -> None:
        """Fill ``cost``/``supporter``/``action_cost`` for ``state``."""

        cost = self.cost
        supporter = self.supporter
        action_cost = self.action_cost
        missing = self._missing
        done = self._done
        for i in range(len(cost)):
            cost[i] = inf
            supporter[i] = -1
            done[i] = False
        for i in range(len(action_cost)):
            action_cost[i] = inf
            missing[i] = self.pre_sizes[i]

        actions = self.task.actions
        heap = []

        def fire(action_idx: int) -> None:
            total = 1
            for p in actions[action_idx].pre:
                total += cost[p]
            action_cost[action_idx] = total
            for a in actions[action_idx].add:
                if total < cost[a]:
                    cost[a] = total
                    supporter[a] = action_idx
                    heappush(heap, (total, a))
                elif total == cost[a] and (
                    supporter[a] == -1 or action_idx < supporter[a]
                ):
                    supporter[a] = action_idx

        for i in state:
            cost[i] = 0
            heappush(heap, (0, i))
        for action_idx in self.no_pre_actions:
            fire(action_idx)

        while heap:
            c, atom = heappop(heap)
            if done[atom] or c > cost[atom]:
                continue
            done[atom] = True
            for action_idx in self.consumers[atom]:
                missing[action_idx] -= 1
                if missing[action_idx] == 0:
                    fire(action_idx)

    def goal_sum(self) -> float:
        total = 0
        for g in self.task.goal:
            c = self.cost[g]
            if c == inf:
                return inf
            total += c
        return total

    def extract_relaxed_plan(self, state: State):
        """Relaxed plan (action indices) for the last ``run``, or None.

        The returned list is ordered by (action cost, index); applying the
        actions' add effects in this order from ``state`` reaches the goal.
        """

        needed = [g for g in self.task.goal if self.cost[g] > 0]
        if any(self.cost[g] == inf for g in self.task.goal):
            return None
        plan = set()
        marked = set(needed)
        stack = list(needed)
        actions = self.task.actions
        while stack:
            atom = stack.pop()
            action_idx = self.supporter[atom]
            if action_idx in plan:
                continue
            plan.add(action_idx)
            for p in actions[action_idx].pre:
                if self.cost[p] > 0 and p not in marked:
                    marked.add(p)
                    stack.append(p)
        return sorted(plan, key=lambda i: (self.action_cost[i], i))


class AdditiveHeuristic(Heuristic):
    """Sum of relaxed atom costs over the goal; inf when unreachable."""

    name = "add"

    def __init__(self, task: GroundTask):
        super().__init__(task)
        self.scratch = RelaxationScratch(task)

    def evaluate(self, state: State) -> float:
        self.scratch.run(state)
        return self.scratch.goal_sum()


class FFHeuristic(Heuristic):
    """Relaxed-plan length, each action counted once."""

    name = "ff"

    def __init__(self, task: GroundTask):
        super().__init__(task)
        self.scratch = RelaxationScratch(task)

    def evaluate(self, state: State) -> float:
        self.scratch.run(state)
        plan = self.scratch.extract_relaxed_plan(state)
        return inf if plan is None else len(plan)

    def relaxed_plan(self, state: State):
        """Relaxed plan as action indices, or None when unreachable."""
        self.scratch.run(state)
        return self.scratch.extract_relaxed_plan(state)
