"""Command line front end.

Subcommands mirror the library layers: ground and solve single tasks,
validate plans, run candidate pools over task sets, select a winner, and
assemble or run generation prompts.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import PlankitError
from .external import ExternalHeuristic
from .generation import (
    DEFAULT_COMMAND_TEMPLATE,
    DEFAULT_SAMPLES,
    DEFAULT_TEMPERATURE,
    PromptAssets,
    PromptToggles,
    build_endtoend_prompt,
    build_heuristic_prompt,
    build_pool,
    make_client,
    request_candidates,
)
from .grounding import dump_task, ground
from .harness import (
    CandidateHeuristic,
    evaluate_pool,
    expansions_per_second,
    read_pool,
    read_records,
    select_best,
    summarize,
    write_records,
)
from .heuristics import heuristic_names, make_heuristic
from .pddl import parse_domain, parse_problem
from .search import DEFAULT_MEM_CAP, DEFAULT_TIME_LIMIT, gbfs
from .validation import parse_plan_text, validate_plan

logger = logging.getLogger(__name__)


def _load_task(domain_path: str, problem_path: str):
    domain = parse_domain(Path(domain_path).read_text())
    problem = parse_problem(Path(problem_path).read_text(), domain)
    return ground(domain, problem)


def _read_problems(domain, paths: list[str]):
    tasks = []
    for p in paths:
        problem = parse_problem(Path(p).read_text(), domain)
        tasks.append(ground(domain, problem))
    return tasks


def _make_solver_heuristic(name: str, task, mem_limit: int):
    if name.startswith("ext:"):
        return ExternalHeuristic(name[len("ext:"):], task, mem_limit=mem_limit)
    return make_heuristic(name, task)


# ---------------------------------------------------------------------------
# subcommands


def cmd_ground(args) -> int:
    task = _load_task(args.domain, args.problem)
    text = dump_task(task)
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    print(
        f"atoms={len(task.atoms)} actions={len(task.actions)} "
        f"goal_unreachable={task.goal_unreachable}",
        file=sys.stderr,
    )
    return 0


def cmd_solve(args) -> int:
    task = _load_task(args.domain, args.problem)
    heuristic = _make_solver_heuristic(args.heuristic, task, args.mem_limit)
    try:
        result = gbfs(
            task, heuristic, time_limit=args.time_limit, mem_cap=args.mem_limit
        )
    finally:
        if hasattr(heuristic, "close"):
            heuristic.close()
    print(
        f"status={result.status.value} expansions={result.expansions} "
        f"evaluations={result.evaluations} wall_time={result.wall_time:.3f}"
    )
    if result.solved:
        print(f"plan_length={len(result.plan)}")
        plan_text = "\n".join(result.plan) + "\n"
        if args.plan_out:
            Path(args.plan_out).write_text(plan_text)
        else:
            print(plan_text, end="")
        return 0
    return 1


def cmd_validate(args) -> int:
    task = _load_task(args.domain, args.problem)
    plan = parse_plan_text(Path(args.plan).read_text())
    report = validate_plan(task, plan)
    if report.valid:
        print(f"valid plan, {report.steps_checked} steps")
        return 0
    print(f"invalid at step {report.failure_step}: {report.failure_reason}")
    for g in report.missing_goals:
        print(f"  unmet goal {g}")
    return 1


def cmd_evaluate(args) -> int:
    domain = parse_domain(Path(args.domain).read_text())
    tasks = _read_problems(domain, args.problems)
    if args.pool:
        pool = read_pool(args.pool)
    else:
        pool = [
            CandidateHeuristic(candidate=name, kind="builtin", spec=name)
            for name in args.heuristics
        ]
    records = evaluate_pool(
        pool, tasks, time_limit=args.time_limit, mem_limit=args.mem_limit
    )
    write_records(args.records, records)
    for s in summarize(records):
        print(
            f"{s.candidate}: coverage={s.coverage} agile={s.agile:.4f} "
            f"failures={s.failures}"
        )
    return 0


def cmd_select(args) -> int:
    records = read_records(args.records)
    report = select_best(records, rule=args.rule)
    for line in report.trail:
        print(f"# {line}")
    print(
        f"winner={report.winner} coverage={report.coverage} "
        f"agile={report.agile:.4f} rule={report.rule}"
    )
    return 0


def cmd_report(args) -> int:
    records = read_records(args.records)
    for s in summarize(records):
        print(
            f"{s.candidate}: coverage={s.coverage} agile={s.agile:.4f} "
            f"failures={s.failures}"
        )
    rates = expansions_per_second(records)
    for domain, rate in rates.items():
        shown = "n/a" if rate is None else f"{rate:.1f}"
        print(f"{domain}: expansions/s={shown}")
    if args.csv:
        import csv
        from dataclasses import asdict, fields
        from .harness import EvalRecord

        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, [f.name for f in fields(EvalRecord)])
            writer.writeheader()
            for r in records:
                writer.writerow(asdict(r))
        print(f"scatter data written to {args.csv}")
    return 0


def _toggles_from(args) -> PromptToggles:
    return PromptToggles(
        simple_instructions=args.simple_instructions,
        worked_examples=not args.no_worked_examples,
        state_example=not args.no_state_example,
        statics_example=not args.no_statics_example,
        planner_excerpt=not args.no_planner_excerpt,
        checklist=not args.no_checklist,
    )


def _named_texts(paths: list[str]) -> list[tuple[str, str]]:
    return [(Path(p).stem, Path(p).read_text()) for p in paths]


def cmd_gen_prompt(args) -> int:
    assets = PromptAssets.load(args.assets)
    domain_text = Path(args.domain).read_text()
    if args.endtoend:
        target = Path(args.target)
        prompt = build_endtoend_prompt(
            domain_text, target.stem, target.read_text(), assets
        )
    else:
        prompt = build_heuristic_prompt(
            domain_text, _named_texts(args.problems), assets, _toggles_from(args)
        )
    if args.out:
        Path(args.out).write_text(prompt)
    else:
        print(prompt, end="")
    return 0


def cmd_generate(args) -> int:
    assets = PromptAssets.load(args.assets)
    domain_text = Path(args.domain).read_text()
    prompt = build_heuristic_prompt(
        domain_text, _named_texts(args.problems), assets, _toggles_from(args)
    )
    client = make_client(args.endpoint, args.model)
    out_dir = Path(args.out_dir)
    responses = request_candidates(
        client,
        prompt,
        n=args.n,
        temperature=args.temperature,
        out_dir=out_dir / "responses",
    )
    pool, rejects = build_pool(
        responses, out_dir / "sources", command_template=args.command_template
    )
    from .harness import write_pool

    pool_path = out_dir / "pool.jsonl"
    write_pool(pool_path, pool)
    print(f"accepted {len(pool)} candidates, rejected {len(rejects)}")
    for r in rejects:
        print(f"  {r.candidate}: {r.reason}")
    print(f"pool written to {pool_path}")
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plankit",
        description="Ground, search, validate, and benchmark classical planning tasks.",
    )
    parser.add_argument("--version", action="version", version=f"plankit {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_task_args(p):
        p.add_argument("--domain", required=True)
        p.add_argument("--problem", required=True)

    def add_limits(p):
        p.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT)
        p.add_argument("--mem-limit", type=int, default=DEFAULT_MEM_CAP)

    p = sub.add_parser("ground", help="ground a task and dump its atom/action tables")
    add_task_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ground)

    p = sub.add_parser("solve", help="greedy best-first search on one task")
    add_task_args(p)
    p.add_argument(
        "--heuristic",
        default="ff",
        help=f"one of {', '.join(heuristic_names())}, or ext:COMMAND",
    )
    add_limits(p)
    p.add_argument("--plan-out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="check a plan file against a task")
    add_task_args(p)
    p.add_argument("--plan", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("evaluate", help="run a candidate pool over problems")
    p.add_argument("--domain", required=True)
    p.add_argument("--problems", nargs="+", required=True)
    p.add_argument("--pool", help="pool JSONL; omit to use --heuristics")
    p.add_argument("--heuristics", nargs="*", default=["ff"])
    p.add_argument("--records", required=True)
    add_limits(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("select", help="pick the best candidate from records")
    p.add_argument("--records", required=True)
    p.add_argument("--rule", choices=("max-agile", "min-agile"), default="max-agile")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("report", help="summaries and per-domain throughput")
    p.add_argument("--records", required=True)
    p.add_argument("--csv", help="also dump per-run rows for plotting")
    p.set_defaults(func=cmd_report)

    def add_prompt_args(p):
        p.add_argument("--domain", required=True)
        p.add_argument("--problems", nargs="*", default=[])
        p.add_argument("--assets", required=True)
        p.add_argument("--simple-instructions", action="store_true")
        p.add_argument("--no-worked-examples", action="store_true")
        p.add_argument("--no-state-example", action="store_true")
        p.add_argument("--no-statics-example", action="store_true")
        p.add_argument("--no-planner-excerpt", action="store_true")
        p.add_argument("--no-checklist", action="store_true")

    p = sub.add_parser("gen-prompt", help="assemble a generation prompt")
    add_prompt_args(p)
    p.add_argument("--endtoend", action="store_true")
    p.add_argument("--target", help="target problem for --endtoend")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_prompt)

    p = sub.add_parser("generate", help="sample candidate heuristics from an endpoint")
    add_prompt_args(p)
    p.add_argument("--endpoint", required=True, help="base URL or mock:DIR")
    p.add_argument("--model", default="")
    p.add_argument("--n", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--temperature", type=float, default=DEFAULT_TEMPERATURE)
    p.add_argument("--command-template", default=DEFAULT_COMMAND_TEMPLATE)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_generate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "gen-prompt" and args.endtoend and not args.target:
        print("--endtoend requires --target", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except PlankitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
