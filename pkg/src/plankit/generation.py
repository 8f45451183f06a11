"""Prompt assembly and candidate-heuristic generation.

Prompts are assembled from a directory of text assets plus the domain and
training problems, one ``## `` section per ingredient, so ablations that
drop an ingredient change exactly one section.  Completions come from a
chat-completions endpoint or from a directory of canned responses
(``mock:DIR``), which keeps the whole pipeline runnable offline.
"""

from __future__ import annotations

import logging
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import AuthError, EndpointError, MissingComponent
from .harness import CandidateHeuristic

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 25
DEFAULT_TEMPERATURE = 1.0
DEFAULT_COMMAND_TEMPLATE = sys.executable + " {source}"
API_KEY_ENV = "PLANKIT_API_KEY"

_ASSET_FILES = {
    "instructions": "instructions.txt",
    "instructions_simple": "instructions_simple.txt",
    "instructions_endtoend": "instructions_endtoend.txt",
    "example_gripper": "example_gripper.txt",
    "example_logistics": "example_logistics.txt",
    "state_example": "state_example.txt",
    "statics_example": "statics_example.txt",
    "planner_excerpt": "planner_excerpt.txt",
    "checklist": "checklist.txt",
}


@dataclass(frozen=True)
class PromptAssets:
    instructions: str
    instructions_simple: str
    instructions_endtoend: str
    example_gripper: str
    example_logistics: str
    state_example: str
    statics_example: str
    planner_excerpt: str
    checklist: str

    @classmethod
    def load(cls, directory) -> "PromptAssets":
        directory = Path(directory)
        values = {}
        for attr, filename in _ASSET_FILES.items():
            path = directory / filename
            if not path.is_file():
                raise MissingComponent(f"prompt asset {filename} in {directory}")
            values[attr] = path.read_text().strip()
        return cls(**values)


@dataclass(frozen=True)
class PromptToggles:
    """Which optional prompt sections to include (all on by default)."""

    simple_instructions: bool = False
    worked_examples: bool = True
    state_example: bool = True
    statics_example: bool = True
    planner_excerpt: bool = True
    checklist: bool = True


def select_training_tasks(problems: list[tuple[str, str]]) -> list[tuple[str, str]]:
    """The smallest and largest problem by text size; one entry if they tie
    on the same problem."""
    if not problems:
        return []
    ordered = sorted(problems, key=lambda p: (len(p[1]), p[0]))
    if len(ordered) == 1:
        return [ordered[0]]
    return [ordered[0], ordered[-1]]


def _section(title: str, body: str) -> str:
    return f"## {title}\n\n{body.strip()}\n"


def build_heuristic_prompt(
    domain_text: str,
    problems: list[tuple[str, str]],
    assets: PromptAssets,
    toggles: PromptToggles = PromptToggles(),
) -> str:
    sections = []
    instructions = (
        assets.instructions_simple if toggles.simple_instructions else assets.instructions
    )
    sections.append(_section("Instructions", instructions))
    sections.append(_section("Domain", domain_text))
    for name, text in select_training_tasks(problems):
        sections.append(_section(f"Training task: {name}", text))
    if toggles.worked_examples:
        sections.append(_section("Worked example: gripper", assets.example_gripper))
        sections.append(
            _section("Worked example: logistics", assets.example_logistics)
        )
    if toggles.state_example:
        sections.append(_section("State representation", assets.state_example))
    if toggles.statics_example:
        sections.append(_section("Static facts", assets.statics_example))
    if toggles.planner_excerpt:
        sections.append(_section("Planner interface", assets.planner_excerpt))
    if toggles.checklist:
        sections.append(_section("Checklist", assets.checklist))
    return "\n".join(sections)


def build_endtoend_prompt(
    domain_text: str,
    problem_name: str,
    problem_text: str,
    assets: PromptAssets,
) -> str:
    """Ask for a plan directly; the target task is always the last section."""
    sections = [
        _section("Instructions", assets.instructions_endtoend),
        _section("Domain", domain_text),
        _section(f"Target task: {problem_name}", problem_text),
    ]
    return "\n".join(sections)


# ---------------------------------------------------------------------------
# completion clients


class HttpCompletionClient:
    """Minimal chat-completions client over ``requests``."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str | None = None,
        timeout: float = 120.0,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.model = model
        self.timeout = timeout
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        if not self.api_key:
            raise AuthError(f"no API key: set {API_KEY_ENV} or pass api_key")

    def complete(self, prompt: str, temperature: float, index: int) -> str:
        try:
            resp = requests.post(
                f"{self.endpoint}/chat/completions",
                headers={"Authorization": f"Bearer {self.api_key}"},
                json={
                    "model": self.model,
                    "messages": [{"role": "user", "content": prompt}],
                    "temperature": temperature,
                },
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise EndpointError(f"request failed: {exc}") from exc
        if resp.status_code in (401, 403):
            raise AuthError(f"endpoint rejected credentials ({resp.status_code})")
        if resp.status_code != 200:
            raise EndpointError(f"endpoint returned {resp.status_code}")
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError) as exc:
            raise EndpointError(f"malformed completion payload: {exc}") from exc


class MockCompletionClient:
    """Serves ``response_NNN.txt`` files from a directory, by sample index."""

    def __init__(self, directory):
        self.directory = Path(directory)
        if not self.directory.is_dir():
            raise EndpointError(f"mock response directory missing: {directory}")

    def complete(self, prompt: str, temperature: float, index: int) -> str:
        path = self.directory / f"response_{index:03d}.txt"
        if not path.is_file():
            raise EndpointError(f"no canned response for sample {index}")
        return path.read_text()


def make_client(endpoint: str, model: str = "", api_key: str | None = None):
    if endpoint.startswith("mock:"):
        return MockCompletionClient(endpoint[len("mock:"):])
    return HttpCompletionClient(endpoint, model, api_key=api_key)


def request_candidates(
    client,
    prompt: str,
    n: int = DEFAULT_SAMPLES,
    temperature: float = DEFAULT_TEMPERATURE,
    retries: int = 3,
    out_dir=None,
) -> list[str]:
    """n completions for one prompt; a sample that keeps failing becomes an
    empty response.  Raises :class:`EndpointError` only when every sample
    failed."""
    responses = []
    failures = 0
    for index in range(n):
        text = ""
        for attempt in range(retries):
            try:
                text = client.complete(prompt, temperature, index)
                break
            except EndpointError as exc:
                logger.warning("sample %d attempt %d: %s", index, attempt + 1, exc)
        else:
            failures += 1
        responses.append(text)
        if out_dir is not None:
            out_dir = Path(out_dir)
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / f"response_{index:03d}.txt").write_text(text)
    if n and failures == n:
        raise EndpointError(f"all {n} samples failed")
    return responses


# ---------------------------------------------------------------------------
# candidate extraction

_FENCE = re.compile(r"```[ \t]*([a-zA-Z0-9_+-]*)[ \t]*\n(.*?)```", re.DOTALL)


@dataclass(frozen=True)
class RejectReport:
    candidate: str
    reason: str


def first_code_block(text: str) -> str | None:
    m = _FENCE.search(text)
    if m is None:
        return None
    return m.group(2)


def extract_candidate(
    response: str,
    index: int,
    out_dir,
    command_template: str = DEFAULT_COMMAND_TEMPLATE,
) -> CandidateHeuristic | RejectReport:
    """First fenced code block becomes a source file plus a launch command."""
    name = f"cand-{index:03d}"
    code = first_code_block(response)
    if code is None or not code.strip():
        return RejectReport(candidate=name, reason="no fenced code block")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    source = out_dir / f"candidate_{index:03d}.py"
    source.write_text(code)
    command = command_template.format(source=source)
    return CandidateHeuristic(candidate=name, kind="external", spec=command)


def build_pool(
    responses: list[str],
    out_dir,
    command_template: str = DEFAULT_COMMAND_TEMPLATE,
) -> tuple[list[CandidateHeuristic], list[RejectReport]]:
    pool = []
    rejects = []
    for index, response in enumerate(responses):
        got = extract_candidate(response, index, out_dir, command_template)
        if isinstance(got, RejectReport):
            rejects.append(got)
        else:
            pool.append(got)
    return pool, rejects


def extract_plan_lines(response: str) -> list[str] | None:
    """Plan steps from the first fenced block, one ``(action ...)`` per
    line; None when the response has no block."""
    code = first_code_block(response)
    if code is None:
        return None
    return [line for line in code.splitlines() if line.strip()]
