"""Predicate-role bindings for the domain-dependent heuristics.

Each supported domain ships a manifest file mapping the roles a heuristic
needs ("where is the agent", "what links locations") to concrete predicate
names.  Binding fails loudly (:class:`~plankit.errors.BindingError`) when a
manifest is missing or a bound predicate is not declared by the task, so an
unknown domain is never silently mis-scored.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ..errors import BindingError
from ..grounding import GroundTask


@dataclass(frozen=True)
class DomainBindings:
    domain: str
    roles: dict  # role name -> predicate name

    def __getitem__(self, role: str) -> str:
        try:
            return self.roles[role]
        except KeyError:
            raise BindingError(f"domain '{self.domain}' defines no role '{role}'")


def _manifest_text(domain: str) -> str:
    ref = resources.files(__package__) / "manifests" / f"{domain}.txt"
    try:
        return ref.read_text()
    except FileNotFoundError:
        raise BindingError(f"no binding manifest for domain '{domain}'")


def parse_manifest(domain: str, text: str) -> DomainBindings:
    roles = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise BindingError(
                f"manifest for '{domain}', line {lineno}: expected 'role = predicate'"
            )
        role, pred = (part.strip().lower() for part in line.split("=", 1))
        if not role or not pred:
            raise BindingError(
                f"manifest for '{domain}', line {lineno}: empty role or predicate"
            )
        if role in roles:
            raise BindingError(f"manifest for '{domain}': duplicate role '{role}'")
        roles[role] = pred
    return DomainBindings(domain, roles)


def resolve_bindings(domain: str, task: GroundTask) -> DomainBindings:
    """Load the manifest for ``domain`` and check it against ``task``."""

    bindings = parse_manifest(domain, _manifest_text(domain))
    for role, pred in bindings.roles.items():
        if pred not in task.predicates:
            raise BindingError(
                f"role '{role}' of domain '{domain}' binds predicate '{pred}', "
                f"which task '{task.problem_name}' does not declare"
            )
    return bindings
