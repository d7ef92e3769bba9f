"""Model checking, reducts, answer sets, optimization, and queries."""

import random

import pytest

from aspcore2.errors import CapacityExceeded
from aspcore2.ground import GroundProgram, UniverseBounds, ground_program
from aspcore2.parser import parse_program
from aspcore2.rewrite import desugar
from aspcore2.solver import (
    MINUS_INFINITY,
    PLUS_INFINITY,
    QueryAnswer,
    answer_query,
    answer_sets,
    dominates,
    eval_aggregate,
    is_model,
    optimal_answer_sets,
    project_interpretation,
    reduct,
    satisfies_builtin,
    satisfies_literal,
    weak_cost,
)
from aspcore2.syntax import (
    AggregateFunction,
    ClassicalAtom,
    IntegerConstant,
    Relation,
    StringConstant,
    SymbolicConstant,
    is_aux_name,
    make_aux_name,
)
from generators import random_ground_program
from oracles import (
    gl_answer_sets,
    oracle_answer_sets,
    oracle_optimal,
    program_atoms,
)


def ground(text, max_int=10, max_nesting=2):
    return ground_program(desugar(parse_program(text)), UniverseBounds(max_int, max_nesting))


def solve(text):
    return answer_sets(ground(text))


def atom(name, *args, neg=False):
    return ClassicalAtom(name, tuple(args), neg)


def sets_of(*collections):
    return {frozenset(c) for c in collections}


def body_literal(text):
    (rule,) = desugar(parse_program(text)).rules
    return rule.body[0]


# --------------------------------------------------------------------------
# Builtin satisfaction


def test_builtin_pinned_values():
    one, two = IntegerConstant(1), IntegerConstant(2)
    abc = SymbolicConstant("abc")
    assert satisfies_builtin(one, Relation.LT, two)
    assert satisfies_builtin(abc, Relation.EQ, abc)
    assert not satisfies_builtin(abc, Relation.EQ, StringConstant("abc"))
    assert not satisfies_builtin(IntegerConstant(3), Relation.GE, SymbolicConstant("a"))
    assert satisfies_builtin(one, Relation.NE, two)
    assert satisfies_builtin(one, Relation.LE, one)
    assert not satisfies_builtin(one, Relation.GT, one)


# --------------------------------------------------------------------------
# Aggregate evaluation


def elements_of(text):
    return body_literal(text).atom.elements


def test_count_respects_interpretation():
    elements = elements_of("x :- #count{1 : q(1); 2 : q(2)} > 0.")
    value = eval_aggregate(AggregateFunction.COUNT, elements, frozenset({atom("q", IntegerConstant(1))}))
    assert value == IntegerConstant(1)


def test_count_empty_is_zero():
    elements = elements_of("x :- #count{1 : q(1)} > 0.")
    assert eval_aggregate(AggregateFunction.COUNT, elements, frozenset()) == IntegerConstant(0)


def test_sum_ignores_non_integer_first_components():
    elements = elements_of("x :- #sum{2, a; 3, b; c, c} > 0.")
    assert eval_aggregate(AggregateFunction.SUM, elements, frozenset()) == IntegerConstant(5)


def test_sum_skips_empty_tuple():
    elements = elements_of("x :- #sum{: q; 4, a} > 0.")
    value = eval_aggregate(AggregateFunction.SUM, elements, frozenset({atom("q")}))
    assert value == IntegerConstant(4)


def test_duplicate_tuples_counted_once():
    elements = elements_of("x :- #sum{2 : q(1); 2 : q(2)} > 0.")
    interpretation = frozenset({atom("q", IntegerConstant(1)), atom("q", IntegerConstant(2))})
    assert eval_aggregate(AggregateFunction.SUM, elements, interpretation) == IntegerConstant(2)
    assert eval_aggregate(AggregateFunction.COUNT, elements, interpretation) == IntegerConstant(1)


def test_max_min_of_empty_set_are_infinities():
    elements = elements_of("x :- #count{1 : q(1)} > 0.")
    assert eval_aggregate(AggregateFunction.MAX, elements, frozenset()) is MINUS_INFINITY
    assert eval_aggregate(AggregateFunction.MIN, elements, frozenset()) is PLUS_INFINITY


def test_max_min_follow_term_order():
    elements = elements_of('x :- #count{1, p; a, p; "s", p} > 0.')
    interpretation = frozenset({atom("p")})
    assert eval_aggregate(AggregateFunction.MAX, elements, interpretation) == StringConstant("s")
    assert eval_aggregate(AggregateFunction.MIN, elements, interpretation) == IntegerConstant(1)


# --------------------------------------------------------------------------
# Literal satisfaction


def test_naf_atom_satisfaction():
    literal = body_literal("x :- not q(1).")
    assert satisfies_literal(literal, frozenset())
    assert not satisfies_literal(literal, frozenset({atom("q", IntegerConstant(1))}))


def test_empty_count_at_least_zero_holds():
    literal = body_literal("x :- #count{} >= 0.")
    assert satisfies_literal(literal, frozenset())


def test_negated_max_over_empty_set():
    # eval is -inf, -inf > 5 is false, naf flips to true
    literal = body_literal("x :- not #max{1 : p(1); 2 : p(2)} > 5.")
    assert satisfies_literal(literal, frozenset())
    assert not satisfies_literal(
        body_literal("x :- #max{1 : p(1)} > 5."), frozenset()
    )


def test_left_guard_flows_through_satisfaction():
    literal = body_literal("x :- 2 < #count{1, a; 2, a; 3, a : q}.")
    assert satisfies_literal(literal, frozenset({atom("q")}))
    assert not satisfies_literal(literal, frozenset())


def test_infinities_compare_below_and_above_terms():
    high = body_literal("x :- #max{1 : p} < 0.")
    assert satisfies_literal(high, frozenset())
    low = body_literal("x :- #min{1 : p} > 1000000.")
    assert satisfies_literal(low, frozenset())


# --------------------------------------------------------------------------
# Models and reducts


def test_is_model_pinned_cases():
    assert is_model(ground("a :- b."), frozenset())
    assert is_model(ground("a | b."), frozenset({atom("a")}))
    assert not is_model(ground("a | b."), frozenset())
    assert not is_model(ground("a. :- a."), frozenset({atom("a")}))


def test_reduct_keeps_rules_with_true_bodies():
    program = ground("p :- not q.")
    assert len(reduct(program, frozenset({atom("p")})).rules) == 1
    assert len(reduct(program, frozenset({atom("q")})).rules) == 0


def test_reduct_keeps_aggregate_bodies_verbatim():
    program = ground("r(1). p :- #count{X : r(X)} >= 1.")
    interpretation = frozenset({atom("r", IntegerConstant(1)), atom("p")})
    kept = reduct(program, interpretation)
    assert len(kept.rules) == 2
    assert kept.to_text() == program.to_text()


def test_facts_survive_every_reduct():
    program = ground("a. b :- not a.")
    kept = reduct(program, frozenset({atom("a")}))
    assert [r.head_atoms() for r in kept.rules] == [(atom("a"),)]
    both = reduct(program, frozenset())
    assert len(both.rules) == 2


# --------------------------------------------------------------------------
# Answer sets


def test_single_fact():
    assert set(solve("a(0).")) == sets_of({atom("a", IntegerConstant(0))})


def test_disjunctive_fact_splits():
    assert set(solve("a | b.")) == sets_of({atom("a")}, {atom("b")})


def test_self_support_gives_empty_set():
    assert set(solve("p :- p.")) == sets_of(set())


def test_odd_loop_has_no_answer_set():
    assert solve("p :- not p.") == ()


def test_disjunction_with_implication_minimizes():
    assert set(solve("a | b. a :- b.")) == sets_of({atom("a")})


def test_even_loop_gives_two_sets():
    assert set(solve("a :- not b. b :- not a.")) == sets_of({atom("a")}, {atom("b")})


def test_inconsistent_complementary_heads():
    assert solve("x. -x.") == ()
    assert set(solve("x | -x.")) == sets_of({atom("x")}, {atom("x", neg=True)})


def test_constraint_prunes():
    assert set(solve("a | b. :- a.")) == sets_of({atom("b")})


def test_aggregate_in_rule_body():
    models = solve("r(1). r(2). big :- #sum{X : r(X)} >= 3.")
    assert len(models) == 1
    assert atom("big") in models[0]


def test_results_are_sorted_and_deduplicated():
    models = solve("a | b. a | c.")
    assert list(models) == sorted(models, key=lambda i: sorted(str(a) for a in i))
    assert len(set(models)) == len(models)


def test_capacity_limit_raises():
    text = " ".join(f"a{i} | b{i}." for i in range(15))
    with pytest.raises(CapacityExceeded):
        answer_sets(ground(text), brute_force_limit=24)
    assert len(answer_sets(ground(text[: text.index(".") + 1]))) == 2


def test_projection_strips_auxiliary_atoms():
    models = solve("{a}.")
    assert set(models) == sets_of(set(), {atom("a")})
    unprojected = answer_sets(ground("{a}."), project=False)
    assert any(
        any(is_aux_name(a.predicate) for a in m) for m in unprojected
    )


def test_projection_can_collapse_duplicates():
    models = solve("{a}. {a}.")
    assert set(models) == sets_of(set(), {atom("a")})


# --------------------------------------------------------------------------
# Differential checks against the independent oracle


def test_matches_oracle_on_random_ground_programs():
    rng = random.Random(11)
    for _ in range(120):
        program = random_ground_program(rng)
        expected = oracle_answer_sets(program.rules)
        got = {frozenset(i) for i in answer_sets(program)}
        assert got == expected


def test_matches_gelfond_lifschitz_without_aggregates():
    rng = random.Random(13)
    for _ in range(80):
        program = random_ground_program(rng, with_aggregates=False)
        expected = gl_answer_sets(program.rules)
        got = {frozenset(i) for i in answer_sets(program)}
        assert got == expected


def test_naf_free_horn_program_reaches_least_fixpoint():
    rng = random.Random(17)
    for _ in range(60):
        program = random_ground_program(rng, with_aggregates=False)
        rules = tuple(
            r
            for r in program.rules
            if len(r.head_atoms()) == 1
            and all(not lit.naf for lit in r.body)
            and all(isinstance(lit.atom, ClassicalAtom) for lit in r.body)
        )
        horn = GroundProgram(rules)
        fixpoint = set()
        changed = True
        while changed:
            changed = False
            for rule in horn.rules:
                if all(lit.atom in fixpoint for lit in rule.body):
                    head = rule.head_atoms()[0]
                    if head not in fixpoint:
                        fixpoint.add(head)
                        changed = True
        models = answer_sets(horn)
        complements = {
            ClassicalAtom(a.predicate, a.args, not a.strong_negation)
            for a in fixpoint
        }
        if complements & fixpoint:
            assert models == ()
        else:
            assert set(models) == {frozenset(fixpoint)}


# --------------------------------------------------------------------------
# Weak constraints and optimality


def test_weak_cost_pinned_example():
    program = ground("a. :~ a. [1@2, x]")
    (interpretation,) = answer_sets(program)
    assert weak_cost(program, interpretation) == {2: 1}


def test_weak_tuples_deduplicate():
    program = ground("a. b. :~ a. [1@0, x] :~ b. [1@0, x]")
    (interpretation,) = answer_sets(program)
    assert weak_cost(program, interpretation) == {0: 1}


def test_distinct_tuples_accumulate():
    program = ground("a. b. :~ a. [1@0, x] :~ b. [1@0, y]")
    (interpretation,) = answer_sets(program)
    assert weak_cost(program, interpretation) == {0: 2}


def test_false_bodies_cost_nothing():
    program = ground("a. :~ not a. [5@1]")
    (interpretation,) = answer_sets(program)
    assert weak_cost(program, interpretation) == {}


def test_cost_free_weights_are_ignored_with_warning():
    program = ground("a. :~ a. [x@0]")
    (interpretation,) = answer_sets(program)
    with pytest.warns(UserWarning):
        costs = weak_cost(program, interpretation)
    assert 0 not in costs or costs[0] == 0


def test_dominates_is_lexicographic_from_highest_level():
    assert dominates({0: 1}, {0: 2})
    assert not dominates({0: 2}, {0: 1})
    assert not dominates({0: 1}, {0: 1})
    assert dominates({2: 0, 0: 9}, {2: 1, 0: 0})
    assert dominates({1: 1}, {1: 2, 0: -5})
    assert not dominates({1: 1, 0: 0}, {1: 1, 0: 0})


def test_optimal_prefers_cheaper_level_zero():
    program = ground("a | b. :~ a. [1@0] :~ b. [2@0]")
    assert {frozenset(i) for i in optimal_answer_sets(program)} == sets_of({atom("a")})


def test_optimal_prefers_higher_level():
    program = ground("a | b. :~ a. [9@1] :~ b. [1@2]")
    assert {frozenset(i) for i in optimal_answer_sets(program)} == sets_of({atom("a")})


def test_without_weak_constraints_all_sets_are_optimal():
    program = ground("a | b.")
    assert optimal_answer_sets(program) == answer_sets(program)


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_optimal_matches_oracle_on_random_programs():
    rng = random.Random(19)
    for _ in range(60):
        program = random_ground_program(rng, with_weaks=True)
        all_sets = oracle_answer_sets(program.rules)
        expected = oracle_optimal(program.weak_constraints, all_sets)
        got = {frozenset(i) for i in optimal_answer_sets(program)}
        assert got == expected
        if all_sets:
            assert got


# --------------------------------------------------------------------------
# Queries


def query_of(text):
    program = desugar(parse_program(text))
    grounded = ground_program(program, UniverseBounds(10, 2))
    return answer_query(grounded, program.query)


def test_ground_query_true_and_false():
    assert query_of("a. b | c. a?").status == "true"
    assert query_of("a. b | c. b?").status == "false"


def test_nonground_query_intersects_answer_sets():
    answer = query_of("p(1). p(2) | p(3). p(X)?")
    assert answer.status == "answers"
    assert answer.substitutions == ((("X", IntegerConstant(1)),),)


def test_query_on_inconsistent_program():
    answer = query_of("a. :- a. a?")
    assert answer.status == "inconsistent"
    assert answer.substitutions == ()


def test_query_with_undefined_arithmetic_is_false():
    assert query_of("p(0). p(1/0)?").status == "false"


def test_query_matches_strong_negation_exactly():
    assert query_of("-p(1). -p(1)?").status == "true"
    assert query_of("-p(1). p(1)?").status == "false"


def test_query_substitution_ordering():
    answer = query_of("q(2). q(1). q(X)?")
    values = [dict(s)["X"] for s in answer.substitutions]
    assert values == [IntegerConstant(1), IntegerConstant(2)]


def test_query_answer_shape():
    answer = QueryAnswer("true")
    assert answer.substitutions == ()


# --------------------------------------------------------------------------
# Projection helper


def test_project_interpretation_keeps_user_atoms():
    full = frozenset({atom("a"), atom(make_aux_name("a", 0), IntegerConstant(1))})
    assert project_interpretation(full) == frozenset({atom("a")})
