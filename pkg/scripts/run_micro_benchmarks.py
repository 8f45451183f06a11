#!/usr/bin/env python3
"""Run every registered heuristic over the bundled micro instances.

Writes one records file per run and prints coverage, accumulated agile
score, and per-domain expansion throughput. This is the offline twin of a
full benchmark sweep: same bookkeeping, desk-sized tasks.
"""

import argparse
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from plankit import ground, parse_domain, parse_problem
from plankit.harness import (
    CandidateHeuristic,
    evaluate_pool,
    expansions_per_second,
    select_best,
    summarize,
    write_records,
)
from plankit.heuristics import DOMAIN_HEURISTICS, heuristic_names

DOMAINS = (
    "blocksworld",
    "childsnack",
    "floortile",
    "miconic",
    "rovers",
    "sokoban",
    "spanner",
    "transport",
)
BASELINES = ("blind", "goal-count", "add", "ff")


def load_domain_tasks(domain: str):
    root = REPO / "benchmarks" / domain
    d = parse_domain((root / "domain.pddl").read_text())
    return [
        ground(d, parse_problem((root / f"p{i:02d}.pddl").read_text(), d))
        for i in (1, 2, 3)
    ]


def matching_heuristic(domain: str) -> str:
    for name, cls in DOMAIN_HEURISTICS.items():
        if cls.manifest_domain == domain:
            return name
    raise SystemExit(f"no domain heuristic registered for {domain}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--domains", nargs="*", default=list(DOMAINS),
                        help="subset of bundled domains to run")
    parser.add_argument("--time-limit", type=float, default=60.0)
    parser.add_argument("--out-dir", default=str(REPO / "results"))
    args = parser.parse_args()

    unknown = [h for h in BASELINES if h not in heuristic_names()]
    if unknown:
        raise SystemExit(f"missing baselines: {unknown}")

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    for domain in args.domains:
        tasks = load_domain_tasks(domain)
        pool = [
            CandidateHeuristic(candidate=name, kind="builtin", spec=name)
            for name in (*BASELINES, matching_heuristic(domain))
        ]
        records = evaluate_pool(pool, tasks, time_limit=args.time_limit)
        records_path = out_dir / f"{domain}.jsonl"
        write_records(records_path, records)

        print(f"== {domain} ({len(tasks)} tasks) -> {records_path}")
        for s in summarize(records):
            print(
                f"   {s.candidate:<14} coverage={s.coverage} "
                f"agile={s.agile:.3f} failures={s.failures}"
            )
        report = select_best(records)
        print(f"   winner: {report.winner} (rule {report.rule})")
        for dom, rate in expansions_per_second(records).items():
            shown = "n/a" if rate is None else f"{rate:.0f}"
            print(f"   throughput[{dom}]: {shown} expansions/s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
