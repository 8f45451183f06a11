"""Exception types shared across the package."""

from __future__ import annotations


class PlankitError(Exception):
    """Base class for all errors raised by this package."""


class PddlSyntaxError(PlankitError):
    """Malformed PDDL input. Carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnsupportedFeature(PlankitError):
    """PDDL construct outside the accepted STRIPS fragment."""

    def __init__(self, feature: str):
        super().__init__(f"unsupported PDDL feature: {feature}")
        self.feature = feature


class ArityMismatch(PlankitError):
    """Atom used with the wrong number of arguments."""

    def __init__(self, predicate: str, expected: int, got: int):
        super().__init__(
            f"predicate '{predicate}' takes {expected} argument(s), got {got}"
        )
        self.predicate = predicate


class UnknownObjectError(PlankitError):
    """Atom or object declaration references an unknown object or type."""


class DomainMismatch(PlankitError):
    """Problem file names a different domain than the one it is paired with."""


class GroundingOverflow(PlankitError):
    """Grounded atom or action count exceeded the configured cap."""


class NotApplicable(PlankitError):
    """Action applied in a state that does not satisfy its precondition."""


class UnknownAction(PlankitError):
    """Plan step names a ground action that does not exist in the task."""

    def __init__(self, name: str, step: int):
        super().__init__(f"step {step}: unknown action '{name}'")
        self.name = name
        self.step = step


class UnknownHeuristic(PlankitError):
    """Heuristic name not present in the registry."""


class BindingError(PlankitError):
    """Domain heuristic could not bind its predicate roles to the task."""


class ExternalHeuristicError(PlankitError):
    """External heuristic process crashed, misbehaved, or reported an error."""


class EvaluationTimeout(PlankitError):
    """External heuristic did not answer before the search deadline."""


class EmptyPool(PlankitError):
    """Selection requested over an empty candidate pool."""


class MissingComponent(PlankitError):
    """Prompt assembly requested a section whose text is absent."""

    def __init__(self, component: str):
        super().__init__(f"prompt component missing or empty: {component}")
        self.component = component


class EndpointError(PlankitError):
    """Completion endpoint unusable after exhausting the retry budget."""


class AuthError(PlankitError):
    """Completion endpoint rejected or lacked credentials."""
