"""Plan validation against a ground task."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownAction
from .grounding import GroundTask, State


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    steps_checked: int
    failure_step: int | None = None
    failure_reason: str | None = None
    missing_goals: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.valid


def parse_plan_text(text: str) -> list[str]:
    """Plan file lines like ``(stack a b)``; ``;`` comments and blanks skipped.

    Names are lowercased and inner whitespace collapsed, so hand-edited files
    round-trip fine.
    """
    actions = []
    for raw in text.splitlines():
        line = raw.split(";", 1)[0].strip().lower()
        if not line:
            continue
        body = line[1:-1]
        if not (line.startswith("(") and line.endswith(")")) or "(" in body or ")" in body:
            raise UnknownAction(f"malformed plan line: {raw.strip()!r}", len(actions))
        actions.append("(" + " ".join(body.split()) + ")")
    return actions


def validate_plan(task: GroundTask, plan: list[str]) -> ValidationReport:
    """Simulate ``plan`` from the initial state and check the goal at the end.

    The first problem wins: an unknown action name raises, an inapplicable
    step or an unmet goal produces an invalid report pinpointing it.
    """
    state: State = task.init
    for step, name in enumerate(plan):
        idx = task.action_index.get(name)
        if idx is None:
            raise UnknownAction(f"step {step}: no ground action {name}", step)
        action = task.actions[idx]
        missing = action.pre - state
        if missing:
            return ValidationReport(
                valid=False,
                steps_checked=step,
                failure_step=step,
                failure_reason=(
                    f"{name} requires {sorted(task.atoms[i].text for i in missing)}"
                ),
            )
        state = (state - action.delete) | action.add
    unmet = task.goal - state
    if unmet:
        return ValidationReport(
            valid=False,
            steps_checked=len(plan),
            failure_step=len(plan),
            failure_reason="goal not satisfied after final step",
            missing_goals=tuple(sorted(task.atoms[i].text for i in unmet)),
        )
    return ValidationReport(valid=True, steps_checked=len(plan))
