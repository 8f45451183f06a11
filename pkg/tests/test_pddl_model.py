import pytest

from plankit import ground, parse_domain, parse_problem
from plankit.errors import (
    ArityMismatch,
    DomainMismatch,
    PddlSyntaxError,
    PlankitError,
    UnknownObjectError,
    UnsupportedFeature,
)
from plankit.pddl import domain_to_pddl, problem_to_pddl, parse_sexps, tokenize

BW_DOMAIN = """
(define (domain blocksworld)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block) (on-table ?x - block)
               (clear ?x - block) (holding ?x - block) (arm-empty))
  (:action pickup
    :parameters (?x - block)
    :precondition (and (clear ?x) (on-table ?x) (arm-empty))
    :effect (and (holding ?x) (not (clear ?x)) (not (on-table ?x)) (not (arm-empty))))
  (:action putdown
    :parameters (?x - block)
    :precondition (holding ?x)
    :effect (and (clear ?x) (on-table ?x) (arm-empty) (not (holding ?x)))))
"""

BW_PROBLEM = """
(define (problem two-blocks)
  (:domain blocksworld)
  (:objects a b - block)
  (:init (on-table a) (on-table b) (clear a) (clear b) (arm-empty))
  (:goal (and (on a b))))
"""


def wrap_action(body: str) -> str:
    return f"""
(define (domain t)
  (:requirements :strips :typing)
  (:predicates (p ?x) (q ?x) (r ?x ?y))
  (:action act
    :parameters (?x ?y)
    {body}))
"""


class TestTokenizer:
    def test_comments_stripped(self):
        (sexp,) = parse_sexps("(a ; rest of line\n b)")
        assert [s.text for s in sexp] == ["a", "b"]

    def test_case_folded(self):
        toks = tokenize("(On BLOCK-A)")
        assert [t.text for t in toks] == ["(", "on", "block-a", ")"]

    def test_positions_tracked(self):
        toks = tokenize("(foo\n  bar)")
        bar = [t for t in toks if t.text == "bar"][0]
        assert (bar.line, bar.column) == (2, 3)

    def test_unbalanced(self):
        with pytest.raises(PddlSyntaxError):
            parse_sexps("(a (b)")
        with pytest.raises(PddlSyntaxError):
            parse_sexps("a))")


class TestDomainParsing:
    def test_roundtrip_fixture(self):
        domain = parse_domain(BW_DOMAIN)
        assert domain.name == "blocksworld"
        assert sorted(p.name for p in domain.predicates) == [
            "arm-empty",
            "clear",
            "holding",
            "on",
            "on-table",
        ]
        assert [a.name for a in domain.actions] == ["pickup", "putdown"]

    def test_requirements_whitelist(self):
        bad = BW_DOMAIN.replace(":strips :typing", ":strips :adl")
        with pytest.raises(UnsupportedFeature) as exc:
            parse_domain(bad)
        assert "adl" in str(exc.value)

    def test_negative_precondition_rejected(self):
        src = wrap_action(
            ":precondition (and (p ?x) (not (q ?x))) :effect (r ?x ?y)"
        )
        with pytest.raises(UnsupportedFeature) as exc:
            parse_domain(src)
        assert "negative-preconditions" in str(exc.value)

    @pytest.mark.parametrize(
        "cond",
        [
            "(or (p ?x) (q ?x))",
            "(imply (p ?x) (q ?x))",
            "(exists (?z) (p ?z))",
            "(forall (?z) (p ?z))",
        ],
    )
    def test_adl_connectives_rejected(self, cond):
        with pytest.raises(UnsupportedFeature):
            parse_domain(wrap_action(f":precondition {cond} :effect (r ?x ?y)"))

    def test_conditional_effect_rejected(self):
        src = wrap_action(":precondition (p ?x) :effect (when (q ?x) (r ?x ?y))")
        with pytest.raises(UnsupportedFeature):
            parse_domain(src)

    def test_either_type_rejected(self):
        src = """
        (define (domain t)
          (:requirements :strips :typing)
          (:types a b)
          (:predicates (p ?x - (either a b)))
          )
        """
        with pytest.raises(UnsupportedFeature):
            parse_domain(src)

    def test_arity_checked_in_actions(self):
        src = wrap_action(":precondition (r ?x) :effect (p ?x)")
        with pytest.raises(ArityMismatch):
            parse_domain(src)

    def test_unbound_variable_rejected(self):
        src = wrap_action(":precondition (p ?z) :effect (q ?x)")
        with pytest.raises(PlankitError):
            parse_domain(src)

    def test_undeclared_predicate_rejected(self):
        src = wrap_action(":precondition (nope ?x) :effect (q ?x)")
        with pytest.raises(PlankitError):
            parse_domain(src)

    def test_duplicate_action_rejected(self):
        src = """
        (define (domain t)
          (:requirements :strips)
          (:predicates (p ?x))
          (:action a :parameters (?x) :precondition (p ?x) :effect (p ?x))
          (:action a :parameters (?x) :precondition (p ?x) :effect (p ?x)))
        """
        with pytest.raises(PlankitError):
            parse_domain(src)

    def test_effect_normalization_add_wins(self):
        # An atom both added and deleted nets out to an add, and duplicate
        # literals collapse.
        src = wrap_action(
            ":precondition (p ?x) "
            ":effect (and (q ?x) (q ?x) (not (q ?x)) (not (p ?x)))"
        )
        domain = parse_domain(src)
        action = domain.actions[0]
        adds = [a.predicate for a in action.add_effects]
        dels = [a.predicate for a in action.delete_effects]
        assert adds == ["q"]
        assert dels == ["p"]


class TestProblemParsing:
    def test_basic(self):
        domain = parse_domain(BW_DOMAIN)
        problem = parse_problem(BW_PROBLEM, domain)
        assert problem.name == "two-blocks"
        assert sorted(o.name for o in problem.objects) == ["a", "b"]
        assert len(problem.init) == 5
        assert len(problem.goal) == 1

    def test_domain_mismatch(self):
        domain = parse_domain(BW_DOMAIN)
        bad = BW_PROBLEM.replace("(:domain blocksworld)", "(:domain other)")
        with pytest.raises(DomainMismatch):
            parse_problem(bad, domain)

    def test_unknown_object_in_init(self):
        domain = parse_domain(BW_DOMAIN)
        bad = BW_PROBLEM.replace("(on-table a)", "(on-table zz)")
        with pytest.raises(UnknownObjectError):
            parse_problem(bad, domain)

    def test_goal_arity_checked(self):
        domain = parse_domain(BW_DOMAIN)
        bad = BW_PROBLEM.replace("(on a b)", "(on a)")
        with pytest.raises(ArityMismatch):
            parse_problem(bad, domain)

    def test_untyped_objects_default_to_object(self):
        domain = parse_domain(
            """
            (define (domain g)
              (:requirements :strips)
              (:predicates (p ?x))
              (:action a :parameters (?x) :precondition (p ?x) :effect (p ?x)))
            """
        )
        problem = parse_problem(
            "(define (problem t) (:domain g) (:objects o1 o2) "
            "(:init (p o1)) (:goal (p o2)))",
            domain,
        )
        types = {o.name: o.type for o in problem.objects}
        assert types["o1"] == "object"

    def test_domain_constants_available(self, benchmarks_dir):
        domain = parse_domain(
            (benchmarks_dir / "childsnack" / "domain.pddl").read_text()
        )
        problem = parse_problem(
            (benchmarks_dir / "childsnack" / "p01.pddl").read_text(), domain
        )
        # kitchen comes from the domain's :constants, not the problem.
        assert "kitchen" in {o.name for o in problem.objects}

    def test_printer_roundtrip(self):
        domain = parse_domain(BW_DOMAIN)
        problem = parse_problem(BW_PROBLEM, domain)
        domain2 = parse_domain(domain_to_pddl(domain))
        problem2 = parse_problem(problem_to_pddl(problem), domain2)
        t1 = ground(domain, problem)
        t2 = ground(domain2, problem2)
        assert [a.text for a in t1.atoms] == [a.text for a in t2.atoms]
        assert [a.name for a in t1.actions] == [a.name for a in t2.actions]
        assert t1.init == t2.init and t1.goal == t2.goal
