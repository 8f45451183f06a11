#!/usr/bin/env python3
"""Dev helper: BFS every benchmark fixture and print the ground truth that
tests pin (optimal plan length, h(init) of the matching domain heuristic,
task sizes).  Not part of the shipped workflows."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from plankit import bfs_oracle, gbfs, ground, parse_domain, parse_problem, validate_plan
from plankit.heuristics import DOMAIN_HEURISTICS

ROOT = Path(__file__).resolve().parents[1] / "benchmarks"

BY_DOMAIN = {cls.manifest_domain: name for name, cls in DOMAIN_HEURISTICS.items()}


def main():
    for domain_dir in sorted(ROOT.iterdir()):
        if not domain_dir.is_dir():
            continue
        domain = parse_domain((domain_dir / "domain.pddl").read_text())
        for prob_path in sorted(domain_dir.glob("*.pddl")):
            if prob_path.name == "domain.pddl":
                continue
            problem = parse_problem(prob_path.read_text(), domain)
            task = ground(domain, problem)
            line = [
                f"{domain_dir.name}/{prob_path.stem}:",
                f"atoms={len(task.atoms)}",
                f"actions={len(task.actions)}",
                f"unreachable_goal={task.goal_unreachable}",
            ]
            hname = BY_DOMAIN.get(task.domain_name)
            if hname is not None:
                from plankit import make_heuristic

                h = make_heuristic(hname, task)
                line.append(f"h_init={h.evaluate(task.init)}")
            res = bfs_oracle(task, time_limit=60)
            line.append(f"bfs={res.status.value}")
            if res.solved:
                line.append(f"optimal={len(res.plan)}")
                assert validate_plan(task, res.plan).valid, "oracle plan invalid!"
                if hname is not None:
                    g = gbfs(task, make_heuristic(hname, task), time_limit=60)
                    line.append(f"gbfs_len={len(g.plan)} gbfs_exp={g.expansions}")
            print(" ".join(str(x) for x in line))


if __name__ == "__main__":
    main()
