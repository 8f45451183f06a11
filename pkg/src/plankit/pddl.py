"""PDDL reader and writer for the STRIPS fragment.

Accepted: positive conjunctive preconditions and goals, add/delete effects,
``:typing`` with single-parent hierarchies, domain ``:constants``, unit-cost
actions.  Everything else (negative preconditions, ADL connectives, functions,
``either`` types, ...) raises :class:`~plankit.errors.UnsupportedFeature`.

All identifiers are case-insensitive and normalised to lower case.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    ArityMismatch,
    DomainMismatch,
    PddlSyntaxError,
    PlankitError,
    UnknownObjectError,
    UnsupportedFeature,
)

ROOT_TYPE = "object"

_ACCEPTED_REQUIREMENTS = {":strips", ":typing"}

# ADL-and-friends section or connective names that we reject by name so the
# error message says what was actually in the file.
_REJECTED_HEADS = {
    "or",
    "imply",
    "exists",
    "forall",
    "when",
    "oneof",
    "=",
    "increase",
    "decrease",
    "assign",
}


# ---------------------------------------------------------------------------
# s-expression layer


@dataclass(frozen=True)
class Symbol:
    """Bare token with its source position (1-based line/column)."""

    text: str
    line: int
    column: int


class SexpList(list):
    """List node; carries the position of its opening parenthesis."""

    __slots__ = ("line", "column")

    def __init__(self, line: int, column: int):
        super().__init__()
        self.line = line
        self.column = column


def _strip_comments(text: str) -> str:
    out = []
    for line in text.split("\n"):
        cut = line.find(";")
        out.append(line if cut < 0 else line[:cut])
    return "\n".join(out)


def tokenize(text: str) -> list[Symbol]:
    tokens: list[Symbol] = []
    line = 1
    col = 1
    word_start = None
    word_chars: list[str] = []

    def flush(at_col: int) -> None:
        nonlocal word_start
        if word_start is not None:
            tokens.append(Symbol("".join(word_chars).lower(), line, word_start))
            word_chars.clear()
            word_start = None

    for ch in text:
        if ch == "\n":
            flush(col)
            line += 1
            col = 1
            continue
        if ch.isspace():
            flush(col)
        elif ch in "()":
            flush(col)
            tokens.append(Symbol(ch, line, col))
        else:
            if word_start is None:
                word_start = col
            word_chars.append(ch)
        col += 1
    flush(col)
    return tokens


def parse_sexps(text: str) -> list:
    """Parse comment-stripped text into nested Symbol/SexpList trees."""

    tokens = tokenize(_strip_comments(text))
    stack: list[SexpList] = []
    roots: list = []
    for tok in tokens:
        if tok.text == "(":
            node = SexpList(tok.line, tok.column)
            if stack:
                stack[-1].append(node)
            else:
                roots.append(node)
            stack.append(node)
        elif tok.text == ")":
            if not stack:
                raise PddlSyntaxError("unbalanced ')'", tok.line, tok.column)
            stack.pop()
        else:
            if not stack:
                raise PddlSyntaxError(
                    f"stray token '{tok.text}' outside any form", tok.line, tok.column
                )
            stack[-1].append(tok)
    if stack:
        raise PddlSyntaxError("unclosed '('", stack[-1].line, stack[-1].column)
    return roots


def _pos(node) -> tuple[int, int]:
    if isinstance(node, Symbol):
        return node.line, node.column
    return node.line, node.column


def _expect_symbol(node, what: str) -> Symbol:
    if not isinstance(node, Symbol):
        line, col = _pos(node)
        raise PddlSyntaxError(f"expected {what}, found a list", line, col)
    return node


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class TypedName:
    name: str
    type: str = ROOT_TYPE


@dataclass(frozen=True)
class Predicate:
    name: str
    params: tuple[TypedName, ...]

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class Atom:
    """Predicate application; args are variables (``?x``) or object names."""

    predicate: str
    args: tuple[str, ...]

    def text(self) -> str:
        if not self.args:
            return f"({self.predicate})"
        return f"({self.predicate} {' '.join(self.args)})"


@dataclass
class ActionSchema:
    name: str
    parameters: list[TypedName]
    precondition: list[Atom]
    add_effects: list[Atom]
    delete_effects: list[Atom]


@dataclass
class DomainAst:
    name: str
    requirements: list[str]
    types: dict[str, str]  # type name -> parent type name
    constants: list[TypedName]
    predicates: list[Predicate]
    actions: list[ActionSchema]

    def predicate_map(self) -> dict[str, Predicate]:
        return {p.name: p for p in self.predicates}


@dataclass
class ProblemAst:
    name: str
    domain_name: str
    objects: list[TypedName]  # includes domain constants
    init: list[Atom]
    goal: list[Atom]


# ---------------------------------------------------------------------------
# shared pieces


def _parse_typed_list(nodes: list, what: str) -> list[TypedName]:
    """Parse ``a b - t c d`` style lists; untyped entries get the root type."""

    result: list[TypedName] = []
    pending: list[Symbol] = []
    it = iter(nodes)
    for node in it:
        sym = _expect_symbol(node, what)
        if sym.text == "-":
            try:
                type_node = next(it)
            except StopIteration:
                raise PddlSyntaxError("dangling '-' in typed list", sym.line, sym.column)
            if isinstance(type_node, SexpList):
                head = type_node[0] if type_node else None
                if isinstance(head, Symbol) and head.text == "either":
                    raise UnsupportedFeature("either")
                raise PddlSyntaxError(
                    "expected a type name after '-'", type_node.line, type_node.column
                )
            if not pending:
                raise PddlSyntaxError(
                    "'-' with nothing to type", sym.line, sym.column
                )
            for p in pending:
                result.append(TypedName(p.text, type_node.text))
            pending = []
        else:
            pending.append(sym)
    for p in pending:
        result.append(TypedName(p.text, ROOT_TYPE))
    return result


def _parse_atom(node, where: str) -> Atom:
    if not isinstance(node, SexpList) or not node:
        line, col = _pos(node)
        raise PddlSyntaxError(f"expected an atom in {where}", line, col)
    head = _expect_symbol(node[0], "predicate name")
    if head.text in _REJECTED_HEADS:
        raise UnsupportedFeature(head.text)
    args = []
    for arg in node[1:]:
        args.append(_expect_symbol(arg, "atom argument").text)
    return Atom(head.text, tuple(args))


def _parse_condition(node, where: str) -> list[Atom]:
    """Conjunction of positive atoms: bare atom, (and ...), or ()."""

    if not isinstance(node, SexpList):
        line, col = _pos(node)
        raise PddlSyntaxError(f"expected a condition in {where}", line, col)
    if not node:
        return []
    head = node[0]
    if isinstance(head, Symbol) and head.text == "and":
        atoms = []
        for child in node[1:]:
            atoms.extend(_parse_condition(child, where))
        return atoms
    if isinstance(head, Symbol) and head.text == "not":
        raise UnsupportedFeature("negative-preconditions")
    return [_parse_atom(node, where)]


def _parse_effect(node, where: str) -> tuple[list[Atom], list[Atom]]:
    adds: list[Atom] = []
    dels: list[Atom] = []

    def walk(n) -> None:
        if not isinstance(n, SexpList) or not n:
            line, col = _pos(n)
            raise PddlSyntaxError(f"expected an effect in {where}", line, col)
        head = n[0]
        if isinstance(head, Symbol) and head.text == "and":
            for child in n[1:]:
                walk(child)
            return
        if isinstance(head, Symbol) and head.text == "not":
            if len(n) != 2:
                raise PddlSyntaxError("malformed (not ...)", n.line, n.column)
            dels.append(_parse_atom(n[1], where))
            return
        adds.append(_parse_atom(n, where))

    walk(node)
    return adds, dels


def _dedupe(atoms: list[Atom]) -> list[Atom]:
    seen = set()
    out = []
    for a in atoms:
        if a not in seen:
            seen.add(a)
            out.append(a)
    return out


# ---------------------------------------------------------------------------
# domain


def parse_domain(text: str) -> DomainAst:
    roots = parse_sexps(text)
    if len(roots) != 1:
        raise PddlSyntaxError("expected exactly one (define ...) form", 1, 1)
    root = roots[0]
    if not root or not isinstance(root[0], Symbol) or root[0].text != "define":
        raise PddlSyntaxError("expected (define ...)", root.line, root.column)

    name = None
    requirements: list[str] = []
    types: dict[str, str] = {}
    constants: list[TypedName] = []
    predicates: list[Predicate] = []
    actions: list[ActionSchema] = []

    for section in root[1:]:
        if not isinstance(section, SexpList) or not section:
            line, col = _pos(section)
            raise PddlSyntaxError("expected a (...) section", line, col)
        head = _expect_symbol(section[0], "section name")
        if head.text == "domain":
            name = _expect_symbol(section[1], "domain name").text
        elif head.text == ":requirements":
            for req in section[1:]:
                r = _expect_symbol(req, "requirement").text
                if r not in _ACCEPTED_REQUIREMENTS:
                    raise UnsupportedFeature(r.lstrip(":"))
                requirements.append(r)
        elif head.text == ":types":
            for tn in _parse_typed_list(section[1:], "type name"):
                if tn.name == ROOT_TYPE:
                    continue
                types[tn.name] = tn.type
        elif head.text == ":constants":
            constants = _parse_typed_list(section[1:], "constant name")
        elif head.text == ":predicates":
            for node in section[1:]:
                if not isinstance(node, SexpList) or not node:
                    line, col = _pos(node)
                    raise PddlSyntaxError("expected a predicate declaration", line, col)
                pname = _expect_symbol(node[0], "predicate name").text
                params = _parse_typed_list(node[1:], "predicate parameter")
                if pname in {pd.name for pd in predicates}:
                    raise PlankitError(f"duplicate predicate '{pname}'")
                predicates.append(Predicate(pname, tuple(params)))
        elif head.text == ":action":
            actions.append(_parse_action(section))
        else:
            raise UnsupportedFeature(head.text.lstrip(":"))

    if name is None:
        raise PddlSyntaxError("domain has no (domain NAME) section", root.line, root.column)

    # Close the type table: parents that were never declared become children
    # of the root so lookups cannot dangle.
    for parent in list(types.values()):
        if parent != ROOT_TYPE and parent not in types:
            types[parent] = ROOT_TYPE

    dom = DomainAst(name, requirements, types, constants, predicates, actions)
    _validate_domain(dom)
    return dom


def _parse_action(section: SexpList) -> ActionSchema:
    name = _expect_symbol(section[1], "action name").text
    parameters: list[TypedName] = []
    precondition: list[Atom] = []
    adds: list[Atom] = []
    dels: list[Atom] = []
    i = 2
    while i < len(section):
        key = _expect_symbol(section[i], "action keyword")
        if key.text == ":parameters":
            plist = section[i + 1]
            if not isinstance(plist, SexpList):
                raise PddlSyntaxError("expected (...) after :parameters", key.line, key.column)
            parameters = _parse_typed_list(list(plist), "action parameter")
        elif key.text == ":precondition":
            precondition = _parse_condition(section[i + 1], f"precondition of {name}")
        elif key.text == ":effect":
            adds, dels = _parse_effect(section[i + 1], f"effect of {name}")
        else:
            raise UnsupportedFeature(key.text.lstrip(":"))
        i += 2

    precondition = _dedupe(precondition)
    adds = _dedupe(adds)
    # PDDL applies deletes before adds, so an atom in both nets out to an add.
    add_set = set(adds)
    dels = [d for d in _dedupe(dels) if d not in add_set]
    return ActionSchema(name, parameters, precondition, adds, dels)


def _validate_domain(dom: DomainAst) -> None:
    if len({a.name for a in dom.actions}) != len(dom.actions):
        raise PlankitError(f"duplicate action name in domain '{dom.name}'")
    pred_map = dom.predicate_map()
    known_types = set(dom.types) | {ROOT_TYPE}
    for tn in dom.constants:
        if tn.type not in known_types:
            raise UnknownObjectError(f"constant '{tn.name}' has unknown type '{tn.type}'")
    for pred in dom.predicates:
        for p in pred.params:
            if p.type not in known_types:
                raise UnknownObjectError(
                    f"predicate '{pred.name}' parameter has unknown type '{p.type}'"
                )
    for schema in dom.actions:
        if len({p.name for p in schema.parameters}) != len(schema.parameters):
            raise PlankitError(f"duplicate parameter in action '{schema.name}'")
        bound = {p.name for p in schema.parameters}
        const_names = {c.name for c in dom.constants}
        for p in schema.parameters:
            if p.type not in known_types:
                raise UnknownObjectError(
                    f"action '{schema.name}' parameter '{p.name}' has unknown type '{p.type}'"
                )
        for atom in schema.precondition + schema.add_effects + schema.delete_effects:
            pred = pred_map.get(atom.predicate)
            if pred is None:
                raise PlankitError(
                    f"action '{schema.name}' uses undeclared predicate '{atom.predicate}'"
                )
            if len(atom.args) != pred.arity:
                raise ArityMismatch(atom.predicate, pred.arity, len(atom.args))
            for arg in atom.args:
                if arg.startswith("?"):
                    if arg not in bound:
                        raise PlankitError(
                            f"action '{schema.name}' uses unbound variable '{arg}'"
                        )
                elif arg not in const_names:
                    raise UnknownObjectError(
                        f"action '{schema.name}' references unknown constant '{arg}'"
                    )


# ---------------------------------------------------------------------------
# problem


def parse_problem(text: str, domain: DomainAst) -> ProblemAst:
    roots = parse_sexps(text)
    if len(roots) != 1:
        raise PddlSyntaxError("expected exactly one (define ...) form", 1, 1)
    root = roots[0]
    if not root or not isinstance(root[0], Symbol) or root[0].text != "define":
        raise PddlSyntaxError("expected (define ...)", root.line, root.column)

    name = None
    domain_name = None
    objects: list[TypedName] = []
    init: list[Atom] = []
    goal: list[Atom] | None = None

    for section in root[1:]:
        if not isinstance(section, SexpList) or not section:
            line, col = _pos(section)
            raise PddlSyntaxError("expected a (...) section", line, col)
        head = _expect_symbol(section[0], "section name")
        if head.text == "problem":
            name = _expect_symbol(section[1], "problem name").text
        elif head.text == ":domain":
            domain_name = _expect_symbol(section[1], "domain name").text
        elif head.text == ":requirements":
            for req in section[1:]:
                r = _expect_symbol(req, "requirement").text
                if r not in _ACCEPTED_REQUIREMENTS:
                    raise UnsupportedFeature(r.lstrip(":"))
        elif head.text == ":objects":
            objects = _parse_typed_list(section[1:], "object name")
        elif head.text == ":init":
            for node in section[1:]:
                init.append(_parse_atom(node, ":init"))
        elif head.text == ":goal":
            if len(section) != 2:
                raise PddlSyntaxError("malformed (:goal ...)", section.line, section.column)
            goal = _parse_condition(section[1], ":goal")
        else:
            raise UnsupportedFeature(head.text.lstrip(":"))

    if name is None:
        raise PddlSyntaxError("problem has no (problem NAME) section", root.line, root.column)
    if domain_name is None:
        raise PddlSyntaxError("problem has no (:domain NAME) section", root.line, root.column)
    if domain_name != domain.name:
        raise DomainMismatch(
            f"problem '{name}' is for domain '{domain_name}', not '{domain.name}'"
        )
    if goal is None:
        raise PddlSyntaxError("problem has no (:goal ...) section", root.line, root.column)

    if len({o.name for o in objects}) != len(objects):
        raise PlankitError(f"duplicate object in problem '{name}'")
    const_names = {c.name for c in domain.constants}
    clash = const_names & {o.name for o in objects}
    if clash:
        raise PlankitError(f"objects redeclare domain constants: {sorted(clash)}")

    prob = ProblemAst(
        name,
        domain_name,
        list(domain.constants) + objects,
        _dedupe(init),
        _dedupe(goal),
    )
    _validate_problem(prob, domain)
    return prob


def _validate_problem(prob: ProblemAst, domain: DomainAst) -> None:
    known_types = set(domain.types) | {ROOT_TYPE}
    for o in prob.objects:
        if o.type not in known_types:
            raise UnknownObjectError(f"object '{o.name}' has unknown type '{o.type}'")
    known_objects = {o.name for o in prob.objects}
    pred_map = domain.predicate_map()
    for where, atoms in (("init", prob.init), ("goal", prob.goal)):
        for atom in atoms:
            pred = pred_map.get(atom.predicate)
            if pred is None:
                raise PlankitError(f"{where} uses undeclared predicate '{atom.predicate}'")
            if len(atom.args) != pred.arity:
                raise ArityMismatch(atom.predicate, pred.arity, len(atom.args))
            for arg in atom.args:
                if arg.startswith("?"):
                    raise PddlSyntaxError(f"variable '{arg}' in {where}", 1, 1)
                if arg not in known_objects:
                    raise UnknownObjectError(f"{where} references undeclared object '{arg}'")


# ---------------------------------------------------------------------------
# printer


def _format_typed(items: list[TypedName] | tuple[TypedName, ...]) -> str:
    # Group consecutive names sharing a type: "a b - t c - u".
    parts: list[str] = []
    run: list[str] = []
    run_type: str | None = None

    def flush() -> None:
        nonlocal run, run_type
        if run:
            parts.append(" ".join(run) + f" - {run_type}")
            run = []

    for tn in items:
        if run_type != tn.type:
            flush()
            run_type = tn.type
        run.append(tn.name)
    flush()
    return " ".join(parts)


def _format_conjunction(atoms: list[Atom]) -> str:
    if not atoms:
        return "(and)"
    if len(atoms) == 1:
        return atoms[0].text()
    return "(and " + " ".join(a.text() for a in atoms) + ")"


def domain_to_pddl(dom: DomainAst) -> str:
    lines = [f"(define (domain {dom.name})"]
    reqs = sorted(set(dom.requirements)) or [":strips"]
    lines.append(f"  (:requirements {' '.join(reqs)})")
    if dom.types:
        typed = [TypedName(t, parent) for t, parent in sorted(dom.types.items())]
        lines.append(f"  (:types {_format_typed(typed)})")
    if dom.constants:
        lines.append(f"  (:constants {_format_typed(dom.constants)})")
    decls = []
    for p in dom.predicates:
        if p.params:
            decls.append(f"({p.name} {_format_typed(p.params)})")
        else:
            decls.append(f"({p.name})")
    lines.append(f"  (:predicates {' '.join(decls)})")
    for a in dom.actions:
        lines.append(f"  (:action {a.name}")
        lines.append(f"    :parameters ({_format_typed(a.parameters)})")
        lines.append(f"    :precondition {_format_conjunction(a.precondition)}")
        effects = [at.text() for at in a.add_effects]
        effects += [f"(not {at.text()})" for at in a.delete_effects]
        lines.append(f"    :effect (and {' '.join(effects)}))")
    lines.append(")")
    return "\n".join(lines) + "\n"


def problem_to_pddl(prob: ProblemAst, domain: DomainAst | None = None) -> str:
    const_names = {c.name for c in domain.constants} if domain else set()
    own_objects = [o for o in prob.objects if o.name not in const_names]
    lines = [
        f"(define (problem {prob.name})",
        f"  (:domain {prob.domain_name})",
    ]
    if own_objects:
        lines.append(f"  (:objects {_format_typed(own_objects)})")
    lines.append("  (:init " + " ".join(a.text() for a in prob.init) + ")")
    lines.append(f"  (:goal {_format_conjunction(prob.goal)})")
    lines.append(")")
    return "\n".join(lines) + "\n"
