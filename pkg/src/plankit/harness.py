"""Benchmark harness: run heuristics over task sets, score, and select.

Results are flat records (one search run each) serialised as JSON lines with
a stable field order, so runs can be diffed and re-aggregated offline.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, fields

from .errors import EmptyPool, EvaluationTimeout, PlankitError
from .external import ExternalHeuristic
from .grounding import GroundTask
from .heuristics import make_heuristic
from .search import DEFAULT_MEM_CAP, DEFAULT_TIME_LIMIT, SearchStatus, gbfs
from .validation import validate_plan

logger = logging.getLogger(__name__)

FAILED = "failed"


def agile_score(wall_time: float, time_limit: float) -> float:
    """1 for sub-second solves, 0 at the limit, logarithmic in between."""
    if time_limit <= 1:
        raise PlankitError(f"time limit must exceed 1 second, got {time_limit}")
    if wall_time >= time_limit:
        return 0.0
    if wall_time < 1.0:
        return 1.0
    return 1.0 - math.log(wall_time) / math.log(time_limit)


@dataclass(frozen=True)
class CandidateHeuristic:
    """A pool entry: a registry name or a command line hosting one."""

    candidate: str
    kind: str  # "builtin" | "external"
    spec: str

    def build(self, task: GroundTask, mem_limit: int | None = None):
        if self.kind == "builtin":
            return make_heuristic(self.spec, task)
        if self.kind == "external":
            return ExternalHeuristic(self.spec, task, mem_limit=mem_limit)
        raise PlankitError(f"unknown candidate kind '{self.kind}'")


@dataclass(frozen=True)
class EvalRecord:
    candidate: str
    domain: str
    problem: str
    status: str
    plan_length: int | None
    expansions: int
    evaluations: int
    wall_time: float
    agile: float


def evaluate_candidate(
    candidate: CandidateHeuristic,
    task: GroundTask,
    time_limit: float = DEFAULT_TIME_LIMIT,
    mem_limit: int = DEFAULT_MEM_CAP,
) -> EvalRecord:
    """One search run; any failure to produce a verified plan is recorded,
    never raised."""

    def record(status, plan_length=None, expansions=0, evaluations=0, wall=0.0):
        agile = agile_score(wall, time_limit) if status == SearchStatus.SOLVED.value else 0.0
        return EvalRecord(
            candidate=candidate.candidate,
            domain=task.domain_name,
            problem=task.problem_name,
            status=status,
            plan_length=plan_length,
            expansions=expansions,
            evaluations=evaluations,
            wall_time=wall,
            agile=agile,
        )

    heuristic = None
    try:
        heuristic = candidate.build(task, mem_limit=mem_limit)
        result = gbfs(task, heuristic, time_limit=time_limit, mem_cap=mem_limit)
    except EvaluationTimeout:
        return record(SearchStatus.TIME_LIMIT.value, wall=time_limit)
    except Exception as exc:
        logger.warning(
            "candidate %s failed on %s/%s: %s",
            candidate.candidate,
            task.domain_name,
            task.problem_name,
            exc,
        )
        return record(FAILED)
    finally:
        if heuristic is not None and hasattr(heuristic, "close"):
            heuristic.close()

    plan_length = None
    status = result.status.value
    if result.solved:
        report = validate_plan(task, result.plan)
        if not report:
            logger.warning(
                "candidate %s returned a bogus plan on %s/%s: %s",
                candidate.candidate,
                task.domain_name,
                task.problem_name,
                report.failure_reason,
            )
            status = FAILED
        else:
            plan_length = len(result.plan)
    return record(
        status,
        plan_length=plan_length,
        expansions=result.expansions,
        evaluations=result.evaluations,
        wall=result.wall_time,
    )


def evaluate_pool(
    candidates: list[CandidateHeuristic],
    tasks: list[GroundTask],
    time_limit: float = DEFAULT_TIME_LIMIT,
    mem_limit: int = DEFAULT_MEM_CAP,
) -> list[EvalRecord]:
    records = []
    for candidate in candidates:
        for task in tasks:
            records.append(
                evaluate_candidate(candidate, task, time_limit, mem_limit)
            )
    return records


# ---------------------------------------------------------------------------
# selection


@dataclass(frozen=True)
class CandidateSummary:
    candidate: str
    coverage: int
    agile: float
    failures: int


@dataclass(frozen=True)
class SelectionReport:
    winner: str
    rule: str
    coverage: int
    agile: float
    candidates: tuple[CandidateSummary, ...]
    trail: tuple[str, ...]


SELECTION_RULES = ("max-agile", "min-agile")


def summarize(records: list[EvalRecord]) -> list[CandidateSummary]:
    """Per-candidate aggregates, independent of record order."""
    by_candidate: dict[str, list[EvalRecord]] = {}
    for r in records:
        by_candidate.setdefault(r.candidate, []).append(r)
    summaries = []
    for candidate in sorted(by_candidate):
        runs = sorted(by_candidate[candidate], key=lambda r: (r.domain, r.problem))
        coverage = sum(1 for r in runs if r.status == SearchStatus.SOLVED.value)
        agile = math.fsum(r.agile for r in runs)
        failures = sum(1 for r in runs if r.status == FAILED)
        summaries.append(CandidateSummary(candidate, coverage, agile, failures))
    return summaries


def select_best(records: list[EvalRecord], rule: str = "max-agile") -> SelectionReport:
    """Pick the candidate with the most solved tasks.

    Coverage ties break on the accumulated agile score.  ``max-agile``
    (the default) prefers the faster candidate; ``min-agile`` inverts the
    direction for comparison runs.  When the two rules disagree the trail
    says so.  Any remaining tie goes to the first candidate id in sort
    order.
    """
    if rule not in SELECTION_RULES:
        raise PlankitError(f"unknown selection rule '{rule}'")
    if not records:
        raise EmptyPool("no evaluation records to select from")
    summaries = summarize(records)
    trail = []

    top_coverage = max(s.coverage for s in summaries)
    leaders = [s for s in summaries if s.coverage == top_coverage]
    trail.append(
        "coverage leaders at %d: %s"
        % (top_coverage, ", ".join(s.candidate for s in leaders))
    )

    def pick(direction: str) -> CandidateSummary:
        if direction == "max-agile":
            best_agile = max(s.agile for s in leaders)
        else:
            best_agile = min(s.agile for s in leaders)
        tied = [s for s in leaders if s.agile == best_agile]
        return min(tied, key=lambda s: s.candidate)

    if len(leaders) == 1:
        chosen = leaders[0]
    else:
        fast = pick("max-agile")
        slow = pick("min-agile")
        if fast.candidate != slow.candidate:
            trail.append(
                "tie-break rules disagree: max-agile -> %s (%.4f), "
                "min-agile -> %s (%.4f)"
                % (fast.candidate, fast.agile, slow.candidate, slow.agile)
            )
        chosen = fast if rule == "max-agile" else slow
        trail.append(
            "agile tie-break (%s) selects %s" % (rule, chosen.candidate)
        )

    return SelectionReport(
        winner=chosen.candidate,
        rule=rule,
        coverage=chosen.coverage,
        agile=chosen.agile,
        candidates=tuple(summaries),
        trail=tuple(trail),
    )


# ---------------------------------------------------------------------------
# throughput


def expansions_per_second(records: list[EvalRecord]) -> dict[str, float | None]:
    """Per-domain expansion throughput over search time only.

    Domains whose accumulated search time is zero map to ``None`` rather
    than a made-up rate.
    """
    by_domain: dict[str, list[EvalRecord]] = {}
    for r in records:
        if r.status == FAILED:
            continue
        by_domain.setdefault(r.domain, []).append(r)
    rates: dict[str, float | None] = {}
    for domain in sorted(by_domain):
        runs = by_domain[domain]
        total_time = math.fsum(r.wall_time for r in runs)
        total_exp = sum(r.expansions for r in runs)
        rates[domain] = total_exp / total_time if total_time > 0 else None
    return rates


# ---------------------------------------------------------------------------
# JSON lines persistence


def _to_line(obj) -> str:
    return json.dumps(asdict(obj), separators=(", ", ": "))


def write_records(path, records: list[EvalRecord]) -> None:
    with open(path, "w") as fh:
        for r in records:
            fh.write(_to_line(r) + "\n")


def read_records(path) -> list[EvalRecord]:
    return _read_jsonl(path, EvalRecord)


def write_pool(path, candidates: list[CandidateHeuristic]) -> None:
    with open(path, "w") as fh:
        for c in candidates:
            fh.write(_to_line(c) + "\n")


def read_pool(path) -> list[CandidateHeuristic]:
    return _read_jsonl(path, CandidateHeuristic)


def _read_jsonl(path, cls):
    names = {f.name for f in fields(cls)}
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            data = json.loads(line)
            unknown = set(data) - names
            if unknown:
                raise PlankitError(
                    f"unexpected fields {sorted(unknown)} in {path}"
                )
            out.append(cls(**data))
    return out
