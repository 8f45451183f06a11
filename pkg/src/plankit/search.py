"""Greedy best-first search and a breadth-first reference search.

Both searches return a :class:`SearchResult` rather than raising on resource
exhaustion.  GBFS orders its open list by heuristic value only and breaks
ties FIFO (insertion order), so with the blind heuristic it expands states in
breadth-first layer order.  Duplicate detection is by a closed set over full
states; plans are rebuilt from parent pointers.
"""

from __future__ import annotations

import enum
import sys
import time
from dataclasses import dataclass
from heapq import heappop, heappush
from collections import deque
from math import inf

from .errors import EvaluationTimeout
from .grounding import GroundTask, State

DEFAULT_TIME_LIMIT = 300.0
DEFAULT_MEM_CAP = 8 * 2**30  # 8 GiB

# Rough per-state bookkeeping cost beyond the frozenset itself: closed-set
# slot, parent-pointer entry, heap tuple.
_STATE_OVERHEAD = 160


class SearchStatus(enum.Enum):
    SOLVED = "solved"
    UNSOLVABLE = "unsolvable"
    TIME_LIMIT = "time_limit"
    MEMORY_LIMIT = "memory_limit"


@dataclass
class SearchResult:
    status: SearchStatus
    plan: list | None = None  # canonical action names; None unless solved
    expansions: int = 0
    evaluations: int = 0
    wall_time: float = 0.0

    @property
    def solved(self) -> bool:
        return self.status is SearchStatus.SOLVED


def _reconstruct(parents: dict, task: GroundTask, state: State) -> list:
    plan = []
    while True:
        entry = parents[state]
        if entry is None:
            break
        state, action_idx = entry
        plan.append(task.actions[action_idx].name)
    plan.reverse()
    return plan


def gbfs(
    task: GroundTask,
    heuristic,
    time_limit: float = DEFAULT_TIME_LIMIT,
    mem_cap: int = DEFAULT_MEM_CAP,
    on_expand=None,
) -> SearchResult:
    """Greedy best-first search under ``heuristic``.

    A heuristic value of ``inf`` closes the state without inserting it into
    the open list.  The deadline is checked once per expansion batch, so a
    run can overshoot ``time_limit`` by at most one expansion's work.
    """

    start = time.perf_counter()
    deadline = start + time_limit
    if hasattr(heuristic, "search_deadline"):
        heuristic.search_deadline = deadline

    def done(status: SearchStatus, plan=None, expansions=0, evaluations=0):
        return SearchResult(
            status, plan, expansions, evaluations, time.perf_counter() - start
        )

    init = task.init
    if task.goal <= init:
        return done(SearchStatus.SOLVED, [], 0, 0)

    try:
        h0 = heuristic.evaluate(init)
    except EvaluationTimeout:
        return done(SearchStatus.TIME_LIMIT, evaluations=1)
    evaluations = 1
    expansions = 0
    if h0 == inf:
        return done(SearchStatus.UNSOLVABLE, evaluations=evaluations)

    open_list = []
    tick = 0
    heappush(open_list, (h0, tick, init))
    closed = {init}
    parents = {init: None}
    mem_used = sys.getsizeof(init) + _STATE_OVERHEAD
    goal = task.goal
    actions = task.actions

    while open_list:
        if time.perf_counter() > deadline:
            return done(SearchStatus.TIME_LIMIT, None, expansions, evaluations)
        _, _, state = heappop(open_list)
        if goal <= state:
            return done(
                SearchStatus.SOLVED, _reconstruct(parents, task, state),
                expansions, evaluations,
            )
        expansions += 1
        if on_expand is not None:
            on_expand(state)
        for action in actions:
            if not action.pre <= state:
                continue
            succ = (state - action.delete) | action.add
            if succ in closed:
                continue
            try:
                h = heuristic.evaluate(succ)
            except EvaluationTimeout:
                return done(SearchStatus.TIME_LIMIT, None, expansions, evaluations)
            evaluations += 1
            closed.add(succ)
            parents[succ] = (state, action.index)
            mem_used += sys.getsizeof(succ) + _STATE_OVERHEAD
            if mem_used > mem_cap:
                return done(SearchStatus.MEMORY_LIMIT, None, expansions, evaluations)
            if h == inf:
                continue
            tick += 1
            heappush(open_list, (h, tick, succ))

    return done(SearchStatus.UNSOLVABLE, None, expansions, evaluations)


def bfs_oracle(
    task: GroundTask,
    time_limit: float = DEFAULT_TIME_LIMIT,
    mem_cap: int = DEFAULT_MEM_CAP,
    on_expand=None,
) -> SearchResult:
    """Breadth-first search; with unit costs its plans are cost-optimal.

    ``evaluations`` counts goal tests (one per dequeued state).
    """

    start = time.perf_counter()
    deadline = start + time_limit

    def done(status, plan=None, expansions=0, evaluations=0):
        return SearchResult(
            status, plan, expansions, evaluations, time.perf_counter() - start
        )

    init = task.init
    goal = task.goal
    queue = deque([init])
    seen = {init}
    parents = {init: None}
    mem_used = sys.getsizeof(init) + _STATE_OVERHEAD
    expansions = 0
    evaluations = 0
    actions = task.actions

    while queue:
        if time.perf_counter() > deadline:
            return done(SearchStatus.TIME_LIMIT, None, expansions, evaluations)
        state = queue.popleft()
        evaluations += 1
        if goal <= state:
            return done(
                SearchStatus.SOLVED, _reconstruct(parents, task, state),
                expansions, evaluations,
            )
        expansions += 1
        if on_expand is not None:
            on_expand(state)
        for action in actions:
            if not action.pre <= state:
                continue
            succ = (state - action.delete) | action.add
            if succ in seen:
                continue
            seen.add(succ)
            parents[succ] = (state, action.index)
            mem_used += sys.getsizeof(succ) + _STATE_OVERHEAD
            if mem_used > mem_cap:
                return done(SearchStatus.MEMORY_LIMIT, None, expansions, evaluations)
            queue.append(succ)

    return done(SearchStatus.UNSOLVABLE, None, expansions, evaluations)
