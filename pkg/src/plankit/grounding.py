"""Schema instantiation over typed objects and the ground task model.

Atoms are restricted to those reachable from the initial state under delete
relaxation, plus the goal atoms themselves (so every goal is representable;
a goal atom outside the reachable set flags the task ``goal_unreachable``).
Atom indices are assigned in lexicographic order of the canonical text
``(pred obj1 obj2)``, action indices likewise, so grounding the same input
twice yields identical tables.

Instantiations whose substituted add and delete sets intersect (the
``stack(a, a)`` family) are degenerate under set semantics and are pruned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import GroundingOverflow, NotApplicable
from .pddl import ROOT_TYPE, ActionSchema, Atom, DomainAst, ProblemAst

DEFAULT_CAP = 10**7

State = frozenset  # frozenset[int]; equality and hashing by value

AtomKey = tuple  # (predicate, arg, arg, ...)


def _atom_text(key: AtomKey) -> str:
    if len(key) == 1:
        return f"({key[0]})"
    return f"({' '.join(key)})"


@dataclass(frozen=True)
class GroundAtom:
    index: int
    predicate: str
    args: tuple[str, ...]
    text: str


@dataclass(frozen=True)
class GroundAction:
    index: int
    name: str  # canonical "(name obj1 obj2)"
    pre: frozenset
    add: frozenset
    delete: frozenset
    cost: int = 1


@dataclass
class GroundTask:
    domain_name: str
    problem_name: str
    atoms: list[GroundAtom]
    actions: list[GroundAction]
    init: State
    goal: frozenset
    static_atoms: frozenset
    goal_unreachable: bool
    predicates: frozenset  # predicate names declared by the domain
    objects: dict  # object name -> type name
    atom_index: dict = field(default_factory=dict, repr=False)
    action_index: dict = field(default_factory=dict, repr=False)
    _by_predicate: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.atom_index:
            self.atom_index = {a.text: a.index for a in self.atoms}
        if not self.action_index:
            self.action_index = {a.name: a.index for a in self.actions}
        if not self._by_predicate:
            for a in self.atoms:
                self._by_predicate.setdefault(a.predicate, []).append(a.index)

    def atoms_of(self, predicate: str) -> list:
        """All table atom indices with the given predicate, in index order."""
        return self._by_predicate.get(predicate, [])

    def init_atoms_of(self, predicate: str) -> list:
        return [i for i in self.atoms_of(predicate) if i in self.init]


def applicable(state: State, action: GroundAction) -> bool:
    return action.pre <= state


def apply(state: State, action: GroundAction) -> State:
    if not action.pre <= state:
        raise NotApplicable(f"{action.name} is not applicable")
    return (state - action.delete) | action.add


def is_goal(task: GroundTask, state: State) -> bool:
    return task.goal <= state


def successors(task: GroundTask, state: State):
    """Yield (action, next state) for every applicable action, in index order."""
    for action in task.actions:
        if action.pre <= state:
            yield action, (state - action.delete) | action.add


# ---------------------------------------------------------------------------
# grounding


def _type_closure(types: dict) -> dict:
    """type -> set of types at or below it (descendants plus itself)."""

    children: dict = {}
    for t, parent in types.items():
        children.setdefault(parent, set()).add(t)
    all_types = set(types) | {ROOT_TYPE} | set(types.values())
    closure = {}
    for t in all_types:
        seen = {t}
        frontier = [t]
        while frontier:
            cur = frontier.pop()
            for child in children.get(cur, ()):
                if child not in seen:
                    seen.add(child)
                    frontier.append(child)
        closure[t] = seen
    return closure


def _objects_by_type(problem: ProblemAst, types: dict) -> dict:
    closure = _type_closure(types)
    by_type: dict = {t: [] for t in closure}
    for obj in problem.objects:
        for t, descendants in closure.items():
            if obj.type in descendants:
                by_type[t].append(obj.name)
    for t in by_type:
        by_type[t].sort()
    return by_type


def _match_schema(schema: ActionSchema, atoms_by_pred: dict, objs_by_type: dict):
    """Yield complete bindings (var -> object) whose preconditions all hold in
    the current reachable set and whose free parameters range over their type."""

    param_types = {p.name: p.type for p in schema.parameters}
    # Ground the cheapest preconditions first to cut the branching factor.
    pres = sorted(
        schema.precondition, key=lambda a: len(atoms_by_pred.get(a.predicate, ()))
    )

    def extend(i: int, binding: dict):
        if i == len(pres):
            free = [p for p in schema.parameters if p.name not in binding]
            if not free:
                yield dict(binding)
                return
            pools = [objs_by_type.get(p.type, ()) for p in free]
            for combo in itertools.product(*pools):
                b = dict(binding)
                for p, obj in zip(free, combo):
                    b[p.name] = obj
                yield b
            return
        atom = pres[i]
        for fact in atoms_by_pred.get(atom.predicate, ()):
            b = binding
            extended = None
            ok = True
            for var, obj in zip(atom.args, fact[1:]):
                if var.startswith("?"):
                    bound = b.get(var) if extended is None else extended.get(var)
                    if bound is None:
                        # Respect the parameter's declared type.
                        if obj not in objs_by_type.get(param_types.get(var, ROOT_TYPE), ()):
                            ok = False
                            break
                        if extended is None:
                            extended = dict(b)
                        extended[var] = obj
                    elif bound != obj:
                        ok = False
                        break
                elif var != obj:
                    ok = False
                    break
            if ok:
                yield from extend(i + 1, extended if extended is not None else b)

    # Type-check membership with sets for speed.
    yield from extend(0, {})


def _substitute(atom: Atom, binding: dict) -> AtomKey:
    return (atom.predicate,) + tuple(
        binding[a] if a.startswith("?") else a for a in atom.args
    )


def ground(domain: DomainAst, problem: ProblemAst, cap: int = DEFAULT_CAP) -> GroundTask:
    objs_by_type = {t: set(v) for t, v in _objects_by_type(problem, domain.types).items()}

    reachable: set = set()
    atoms_by_pred: dict = {}

    def add_fact(key: AtomKey) -> bool:
        if key in reachable:
            return False
        reachable.add(key)
        atoms_by_pred.setdefault(key[0], []).append(key)
        if len(reachable) > cap:
            raise GroundingOverflow(f"more than {cap} ground atoms")
        return True

    for atom in problem.init:
        add_fact((atom.predicate,) + atom.args)

    # Delete-relaxed fixpoint: repeatedly instantiate schemas against the
    # facts reached so far; every new action contributes its add effects.
    ground_actions: dict = {}
    changed = True
    while changed:
        changed = False
        for schema in domain.actions:
            for binding in _match_schema(schema, atoms_by_pred, objs_by_type):
                key = (schema.name,) + tuple(binding[p.name] for p in schema.parameters)
                if key in ground_actions:
                    continue
                pre = frozenset(_substitute(a, binding) for a in schema.precondition)
                add = frozenset(_substitute(a, binding) for a in schema.add_effects)
                dele = frozenset(_substitute(a, binding) for a in schema.delete_effects)
                if add & dele:
                    continue  # degenerate self-aliased instantiation
                ground_actions[key] = (pre, add, dele)
                if len(ground_actions) > cap:
                    raise GroundingOverflow(f"more than {cap} ground actions")
                changed = True
                for fact in add:
                    if add_fact(fact):
                        changed = True

    goal_keys = [(a.predicate,) + a.args for a in problem.goal]
    goal_unreachable = any(k not in reachable for k in goal_keys)
    table = set(reachable)
    table.update(goal_keys)

    atom_keys = sorted(table, key=_atom_text)
    index_of = {key: i for i, key in enumerate(atom_keys)}
    atoms = [
        GroundAtom(i, key[0], tuple(key[1:]), _atom_text(key))
        for i, key in enumerate(atom_keys)
    ]

    action_rows = []
    for key, (pre, add, dele) in ground_actions.items():
        name = _atom_text(key)
        action_rows.append(
            (
                name,
                frozenset(index_of[k] for k in pre),
                frozenset(index_of[k] for k in add),
                # Deleting a fact that can never be true is a no-op.
                frozenset(index_of[k] for k in dele if k in index_of),
            )
        )
    action_rows.sort(key=lambda r: r[0])
    actions = [
        GroundAction(i, name, pre, add, dele)
        for i, (name, pre, add, dele) in enumerate(action_rows)
    ]

    touched = set()
    for a in actions:
        touched.update(a.add)
        touched.update(a.delete)
    static_atoms = frozenset(i for i in range(len(atoms)) if i not in touched)

    init = frozenset(index_of[(a.predicate,) + a.args] for a in problem.init)
    goal = frozenset(index_of[k] for k in goal_keys)

    return GroundTask(
        domain_name=domain.name,
        problem_name=problem.name,
        atoms=atoms,
        actions=actions,
        init=init,
        goal=goal,
        static_atoms=static_atoms,
        goal_unreachable=goal_unreachable,
        predicates=frozenset(p.name for p in domain.predicates),
        objects={o.name: o.type for o in problem.objects},
    )


# ---------------------------------------------------------------------------
# direct construction (tests, synthetic tasks, wire payloads)


def make_ground_task(
    atom_texts: list,
    actions: list,
    init,
    goal,
    domain_name: str = "synthetic",
    problem_name: str = "task",
) -> GroundTask:
    """Build a task from raw pieces.

    ``atom_texts``: canonical atom strings, in index order.
    ``actions``: (name, pre, add, delete) tuples of index iterables.
    """

    atoms = []
    for i, text in enumerate(atom_texts):
        inner = text.strip()
        if inner.startswith("(") and inner.endswith(")"):
            inner = inner[1:-1]
        parts = inner.split()
        atoms.append(GroundAtom(i, parts[0], tuple(parts[1:]), _atom_text(tuple(parts))))
    ground_acts = [
        GroundAction(i, name, frozenset(pre), frozenset(add), frozenset(dele))
        for i, (name, pre, add, dele) in enumerate(actions)
    ]
    touched = set()
    for a in ground_acts:
        touched.update(a.add)
        touched.update(a.delete)
    static_atoms = frozenset(i for i in range(len(atoms)) if i not in touched)
    predicates = frozenset(a.predicate for a in atoms)
    return GroundTask(
        domain_name=domain_name,
        problem_name=problem_name,
        atoms=atoms,
        actions=ground_acts,
        init=frozenset(init),
        goal=frozenset(goal),
        static_atoms=static_atoms,
        goal_unreachable=False,
        predicates=predicates,
        objects={},
    )


def dump_task(task: GroundTask) -> str:
    """Human-readable dump used by the ``ground`` subcommand."""

    lines = [
        f"domain: {task.domain_name}",
        f"problem: {task.problem_name}",
        f"atoms: {len(task.atoms)}",
        f"actions: {len(task.actions)}",
        f"goal-unreachable: {task.goal_unreachable}",
    ]
    for a in task.atoms:
        flags = []
        if a.index in task.init:
            flags.append("init")
        if a.index in task.goal:
            flags.append("goal")
        if a.index in task.static_atoms:
            flags.append("static")
        suffix = f"  [{', '.join(flags)}]" if flags else ""
        lines.append(f"atom {a.index}: {a.text}{suffix}")
    for act in task.actions:
        lines.append(
            f"action {act.index}: {act.name}"
            f"  pre={sorted(act.pre)} add={sorted(act.add)} del={sorted(act.delete)}"
        )
    return "\n".join(lines) + "\n"
