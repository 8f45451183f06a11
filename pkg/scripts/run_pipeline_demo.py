#!/usr/bin/env python3
"""Generate, evaluate, and select candidate heuristics, fully offline.

By default the completion endpoint is the canned-response directory used by
the tests, so the whole loop (prompt -> candidates -> search runs ->
selection) runs without network access. Point --endpoint at a real
chat-completions URL to sample live instead.
"""

import argparse
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from plankit import ground, parse_domain, parse_problem
from plankit.generation import (
    PromptAssets,
    build_heuristic_prompt,
    build_pool,
    make_client,
    request_candidates,
)
from plankit.harness import evaluate_pool, select_best, summarize, write_pool, write_records

DEFAULT_RESPONSES = REPO / "tests" / "data" / "mock_responses"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--domain", default="blocksworld",
                        help="bundled benchmark domain to target")
    parser.add_argument("--endpoint", default=f"mock:{DEFAULT_RESPONSES}")
    parser.add_argument("--model", default="")
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--time-limit", type=float, default=30.0)
    parser.add_argument("--out-dir", default=str(REPO / "results" / "pipeline_demo"))
    args = parser.parse_args()

    root = REPO / "benchmarks" / args.domain
    domain_text = (root / "domain.pddl").read_text()
    domain = parse_domain(domain_text)
    problems = [(p.stem, p.read_text()) for p in sorted(root.glob("p0*.pddl"))]
    tasks = [ground(domain, parse_problem(text, domain)) for _, text in problems]

    assets = PromptAssets.load(REPO / "prompts")
    prompt = build_heuristic_prompt(domain_text, problems, assets)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "prompt.md").write_text(prompt)
    print(f"prompt: {len(prompt)} chars -> {out_dir / 'prompt.md'}")

    client = make_client(args.endpoint, args.model)
    responses = request_candidates(
        client, prompt, n=args.n, out_dir=out_dir / "responses"
    )
    pool, rejects = build_pool(responses, out_dir / "sources")
    write_pool(out_dir / "pool.jsonl", pool)
    print(f"candidates: {len(pool)} accepted, {len(rejects)} rejected")
    for r in rejects:
        print(f"   {r.candidate}: {r.reason}")

    records = evaluate_pool(pool, tasks, time_limit=args.time_limit)
    write_records(out_dir / "records.jsonl", records)
    for s in summarize(records):
        print(
            f"   {s.candidate}: coverage={s.coverage} agile={s.agile:.3f} "
            f"failures={s.failures}"
        )

    report = select_best(records)
    for line in report.trail:
        print(f"   # {line}")
    print(f"winner: {report.winner} coverage={report.coverage} agile={report.agile:.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
