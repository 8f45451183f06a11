from pathlib import Path

import pytest

REPO = Path(__file__).resolve().parents[2]
BENCHMARKS = REPO / "benchmarks"

_cache = {}


def load_task(domain: str, problem: str):
    from plankit import ground, parse_domain, parse_problem

    key = (domain, problem)
    if key not in _cache:
        d = parse_domain((BENCHMARKS / domain / "domain.pddl").read_text())
        p = parse_problem((BENCHMARKS / domain / f"{problem}.pddl").read_text(), d)
        _cache[key] = ground(d, p)
    return _cache[key]


@pytest.fixture(scope="session")
def get_task():
    return load_task
