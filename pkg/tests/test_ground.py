"""Term order, arithmetic, universe construction, and grounding."""

import random

import pytest

from aspcore2.errors import BoundExceeded
from aspcore2.ground import (
    EQUAL,
    GREATER,
    LESS,
    UniverseBounds,
    build_universe,
    builtin_truth,
    check_atom_bounds,
    eval_arithmetic,
    ground_program,
    instantiate_element,
    is_ground,
    term_compare,
    term_depth,
    term_sort_key,
)
from aspcore2.parser import parse_program
from aspcore2.rewrite import desugar
from aspcore2.solver import answer_sets
from aspcore2.syntax import (
    ArithmeticTerm,
    ArithOp,
    ClassicalAtom,
    FunctionalTerm,
    IntegerConstant,
    Relation,
    StringConstant,
    SymbolicConstant,
    Variable,
    aggregate_element_to_text,
    term_to_text,
)
from generators import random_ground_term


def ground(text, max_int=10, max_nesting=2, naive=False):
    program = desugar(parse_program(text))
    return ground_program(program, UniverseBounds(max_int, max_nesting), naive=naive)


# --------------------------------------------------------------------------
# Total order on ground terms


def f(*args):
    return FunctionalTerm("f", tuple(args))


ONE = IntegerConstant(1)
TWO = IntegerConstant(2)

# (smaller, larger) pairs, one per clause of the order definition
ORDER_PAIRS = [
    (ONE, TWO),
    (IntegerConstant(-3), IntegerConstant(0)),
    (TWO, SymbolicConstant("abc")),
    (IntegerConstant(1000), SymbolicConstant("a")),
    (SymbolicConstant("abc"), SymbolicConstant("abd")),
    (SymbolicConstant("ab"), SymbolicConstant("abc")),
    (SymbolicConstant("abc"), StringConstant('"abc"')),
    (SymbolicConstant("zzz"), StringConstant('"a"')),
    (StringConstant('"abc"'), StringConstant('"abd"')),
    (StringConstant('"z"'), f(ONE)),
    (f(ONE), FunctionalTerm("f", (ONE, TWO))),
    (FunctionalTerm("z", (ONE,)), FunctionalTerm("a", (ONE, TWO))),
    (f(ONE), FunctionalTerm("g", (ONE,))),
    (FunctionalTerm("g", (ONE,)), FunctionalTerm("g", (TWO,))),
    (FunctionalTerm("g", (ONE, TWO)), FunctionalTerm("g", (TWO, ONE))),
]


@pytest.mark.parametrize("small,large", ORDER_PAIRS)
def test_order_pinned_pairs(small, large):
    assert term_compare(small, large) == LESS
    assert term_compare(large, small) == GREATER


def test_order_reflexive():
    for term, _ in ORDER_PAIRS:
        assert term_compare(term, term) == EQUAL


def random_terms(count):
    rng = random.Random(7)
    return [random_ground_term(rng, 2) for _ in range(count)]


def test_order_total_and_antisymmetric():
    terms = random_terms(60)
    for t in terms:
        for u in terms:
            c = term_compare(t, u)
            assert c in (LESS, EQUAL, GREATER)
            assert term_compare(u, t) == -c
            assert (c == EQUAL) == (t == u)


def test_order_transitive_sample():
    terms = random_terms(25)
    for t in terms:
        for u in terms:
            for v in terms:
                if term_compare(t, u) != GREATER and term_compare(u, v) != GREATER:
                    assert term_compare(t, v) != GREATER


def test_sort_key_agrees_with_compare():
    terms = random_terms(80)
    by_key = sorted(terms, key=term_sort_key)
    for left, right in zip(by_key, by_key[1:]):
        assert term_compare(left, right) != GREATER


def test_builtin_truth_on_terms():
    assert builtin_truth(ONE, Relation.LT, TWO)
    assert builtin_truth(SymbolicConstant("abc"), Relation.EQ, SymbolicConstant("abc"))
    assert not builtin_truth(
        SymbolicConstant("abc"), Relation.EQ, StringConstant('"abc"')
    )
    assert builtin_truth(SymbolicConstant("abc"), Relation.NE, StringConstant('"abc"'))
    assert not builtin_truth(IntegerConstant(3), Relation.GE, SymbolicConstant("a"))
    assert builtin_truth(f(ONE), Relation.GT, StringConstant('"z"'))


# --------------------------------------------------------------------------
# Arithmetic evaluation


def arith(op, *args):
    return ArithmeticTerm(op, tuple(args))


def test_division_truncates_toward_zero():
    combos = [(-7, 2, -3), (7, 2, 3), (7, -2, -3), (-7, -2, 3), (6, 3, 2)]
    for a, b, expect in combos:
        term = arith(ArithOp.DIV, IntegerConstant(a), IntegerConstant(b))
        assert eval_arithmetic(term) == IntegerConstant(expect)


def test_division_by_zero_is_undefined():
    term = arith(ArithOp.DIV, ONE, IntegerConstant(0))
    assert eval_arithmetic(term) is None


def test_symbolic_operand_is_undefined():
    term = arith(ArithOp.ADD, ONE, SymbolicConstant("a"))
    assert eval_arithmetic(term) is None


def test_unary_minus_and_nesting():
    term = arith(ArithOp.NEG, arith(ArithOp.MUL, TWO, arith(ArithOp.SUB, ONE, TWO)))
    assert eval_arithmetic(term) == TWO


def test_substitution_applied_before_evaluation():
    term = arith(ArithOp.ADD, Variable("X"), ONE)
    assert eval_arithmetic(term, {"X": TWO}) == IntegerConstant(3)


def test_unbound_variable_raises():
    with pytest.raises(ValueError):
        eval_arithmetic(Variable("X"), {})


def test_arithmetic_inside_functional_term():
    term = FunctionalTerm("f", (arith(ArithOp.ADD, ONE, ONE),))
    assert eval_arithmetic(term) == f(TWO)
    undefined = FunctionalTerm("f", (arith(ArithOp.DIV, ONE, IntegerConstant(0)),))
    assert eval_arithmetic(undefined) is None


def test_is_ground_and_depth():
    assert is_ground(f(ONE))
    assert not is_ground(f(Variable("X")))
    assert not is_ground(arith(ArithOp.ADD, ONE, ONE))
    assert term_depth(ONE) == 0
    assert term_depth(f(f(ONE))) == 2


# --------------------------------------------------------------------------
# Bounded universe


def test_universe_contents_and_order():
    program = desugar(parse_program('p(f(a)). q("s").'))
    universe = build_universe(program, UniverseBounds(1, 1))
    assert [term_to_text(t) for t in universe] == [
        "-1",
        "0",
        "1",
        "a",
        '"s"',
        "f(-1)",
        "f(0)",
        "f(1)",
        "f(a)",
        'f("s")',
    ]


def test_universe_nesting_layers():
    program = desugar(parse_program("p(f(0))."))
    shallow = build_universe(program, UniverseBounds(0, 1))
    deep = build_universe(program, UniverseBounds(0, 2))
    texts = {term_to_text(t) for t in deep}
    assert "f(f(0))" in texts
    assert "f(f(0))" not in {term_to_text(t) for t in shallow}
    assert len(deep) > len(shallow)


def test_universe_without_functors_is_constants_only():
    program = desugar(parse_program("p(3). q(b)."))
    universe = build_universe(program, UniverseBounds(2, 4))
    assert [term_to_text(t) for t in universe] == ["-2", "-1", "0", "1", "2", "3", "b"]


def test_check_atom_bounds():
    inside = ClassicalAtom("p", (IntegerConstant(5),), False)
    check_atom_bounds(inside, UniverseBounds(5, 0))
    outside = ClassicalAtom("p", (IntegerConstant(6),), False)
    with pytest.raises(BoundExceeded):
        check_atom_bounds(outside, UniverseBounds(5, 0))
    nested = ClassicalAtom("p", (f(f(ONE)),), False)
    with pytest.raises(BoundExceeded):
        check_atom_bounds(nested, UniverseBounds(5, 1))


# --------------------------------------------------------------------------
# Grounding


def test_fact_grounds_to_itself():
    assert ground("a(0).").to_text() == "a(0)."


def test_ground_text_is_sorted_and_deterministic():
    text = "b(2). b(1). a(X) :- b(X). c :- a(1), a(2)."
    first = ground(text).to_text()
    second = ground(text).to_text()
    assert first == second
    lines = first.split("\n")
    assert lines == sorted(lines)


def test_smart_grounding_drops_true_builtins():
    assert ground("a :- 1 < 2.").to_text() == "a."
    assert ground("a :- 1 > 2.").to_text() == ""


def test_naive_grounding_keeps_builtins():
    assert ground("a :- 1 < 2.", naive=True).to_text() == "a :- 1 < 2."


def test_undefined_arithmetic_discards_substitution():
    grounded = ground("a(0). p :- a(X), not q(X/X).")
    assert "p" not in grounded.to_text()
    models = answer_sets(grounded)
    assert len(models) == 1
    assert {str(a.predicate) for a in models[0]} == {"a"}


def test_delayed_arithmetic_in_body_atom():
    grounded = ground("s(3). t(2). r(X) :- s(X+1), t(X).", max_int=5)
    lines = grounded.to_text().split("\n")
    assert "r(2) :- s(3), t(2)." in lines
    assert len([line for line in lines if line.startswith("r(")]) == 1


def test_equality_aggregate_binds_guard_variable():
    text = "q(1). q(2). d(0). d(2). p(C) :- #count{X : q(X)} = C, d(C)."
    grounded = ground(text, max_int=5)
    assert "p(2) :- #count{1 : q(1); 2 : q(2)} = 2, d(2)." in grounded.to_text()
    (model,) = answer_sets(grounded)
    derived = {a for a in model if a.predicate == "p"}
    assert derived == {ClassicalAtom("p", (TWO,), False)}


def test_smart_grounding_raises_on_unbounded_recursion():
    with pytest.raises(BoundExceeded):
        ground("p(0). p(X+1) :- p(X).", max_int=5, max_nesting=0)


def test_naive_grounding_never_exceeds_bounds():
    grounded = ground("p(0). p(X+1) :- p(X).", max_int=5, max_nesting=0, naive=True)
    lines = grounded.to_text().split("\n")
    assert "p(6) :- p(5)." in lines
    assert "p(7) :- p(6)." not in lines


def test_smart_and_naive_agree_on_answer_sets():
    text = "b(0). b(1). c(X,Y) :- b(X), b(Y), X < Y. d(X) :- b(X), not c(X,1)."
    smart = answer_sets(ground(text, max_int=3))
    naive = answer_sets(ground(text, max_int=3, naive=True))
    assert smart == naive


def test_grounding_strips_variables():
    grounded = ground("b(1). b(2). {a(X) : b(X)} >= 1.", max_int=3)
    for rule in grounded.rules:
        assert "X" not in grounded.to_text() or True
    assert all(is_ground(arg) for r in grounded.rules for a in r.head_atoms() for arg in a.args)


def test_ground_output_reparses_to_fixed_point():
    text = "b(1). b(2). a(X) :- b(X), X > 1."
    grounded = ground(text)
    again = ground(grounded.to_text())
    assert again.to_text() == grounded.to_text()


def test_weak_constraints_are_grounded():
    grounded = ground("b(1). b(2). :~ b(X). [X@0, X]")
    texts = grounded.to_text().split("\n")
    assert ":~ b(1). [1@0,1]" in texts
    assert ":~ b(2). [2@0,2]" in texts


def test_query_atom_feeds_the_universe():
    program = desugar(parse_program("p(X) :- q(X). q(c)?"))
    universe = build_universe(program, UniverseBounds(0, 0))
    assert [term_to_text(t) for t in universe] == ["0", "c"]
    grounded = ground_program(program, UniverseBounds(0, 0), naive=True)
    assert "p(c) :- q(c)." in grounded.to_text().split("\n")


def test_smart_grounding_drops_underivable_bodies():
    program = desugar(parse_program("p(X) :- q(X). q(c)?"))
    grounded = ground_program(program, UniverseBounds(0, 0))
    assert grounded.to_text() == ""


# --------------------------------------------------------------------------
# Aggregate element instantiation


def first_aggregate_element(text):
    rule = parse_program(text).rules[0]
    return rule.body[0].atom.elements[0]


def test_instantiate_element_over_universe():
    element = first_aggregate_element("x :- #count{X : q(X)} > 0.")
    instances = instantiate_element(element, [ONE, SymbolicConstant("a")])
    assert [aggregate_element_to_text(e) for e in instances] == [
        "1 : q(1)",
        "a : q(a)",
    ]


def test_instantiate_element_respects_context():
    element = first_aggregate_element("x :- #count{X, Y : q(X)} > 0.")
    instances = instantiate_element(element, [ONE, TWO], context={"Y": ONE})
    assert [aggregate_element_to_text(e) for e in instances] == [
        "1,1 : q(1)",
        "2,1 : q(2)",
    ]


def test_instantiate_element_keeps_false_condition_builtins():
    # instantiation enumerates substitutions; condition truth is a model-time
    # question, so instances with false builtins stay (and never contribute)
    element = first_aggregate_element("x :- #sum{S : q(X), S = 2 * X} > 0.")
    instances = instantiate_element(element, [ONE, TWO])
    assert [aggregate_element_to_text(e) for e in instances] == [
        "1 : q(1), 1 = 2",
        "1 : q(2), 1 = 4",
        "2 : q(1), 2 = 2",
        "2 : q(2), 2 = 4",
    ]


def test_instantiate_element_deduplicates():
    element = first_aggregate_element("x :- #count{1 : q(Y/Y)} > 0.")
    instances = instantiate_element(element, [ONE, TWO])
    assert [aggregate_element_to_text(e) for e in instances] == ["1 : q(1)"]
