import sys
from pathlib import Path

import pytest

from plankit import ground, parse_domain, parse_problem

REPO = Path(__file__).resolve().parents[1]
BENCHMARKS = REPO / "benchmarks"
PROMPTS = REPO / "prompts"
MOCK_RESPONSES = Path(__file__).resolve().parent / "data" / "mock_responses"

PYTHON = sys.executable

# The eight bundled planning domains and their micro instances.
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
INSTANCES = tuple((d, p) for d in DOMAINS for p in ("p01", "p02", "p03"))

_task_cache = {}


def load_task(domain: str, problem: str):
    key = (domain, problem)
    if key not in _task_cache:
        d = parse_domain((BENCHMARKS / domain / "domain.pddl").read_text())
        p = parse_problem((BENCHMARKS / domain / f"{problem}.pddl").read_text(), d)
        _task_cache[key] = ground(d, p)
    return _task_cache[key]


@pytest.fixture(scope="session")
def get_task():
    return load_task


@pytest.fixture(scope="session")
def benchmarks_dir():
    return BENCHMARKS


@pytest.fixture(scope="session")
def prompts_dir():
    return PROMPTS


@pytest.fixture(scope="session")
def mock_responses_dir():
    return MOCK_RESPONSES
