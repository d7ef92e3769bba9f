"""Shortcut elimination: rewrites programs into the disjunctive core.

After `desugar` a program contains only disjunctive rules and weak
constraints whose aggregates carry exactly one guard, on the right; choice
rules are compiled away with auxiliary predicates, and every anonymous
variable has been replaced by a fresh named variable. The pipeline is
idempotent: desugaring a desugared program returns it unchanged.
"""

from __future__ import annotations

from typing import Union

from .syntax import (
    AggregateAtom,
    AggregateElement,
    AggregateFunction,
    AggregateLiteral,
    AnonymousVariable,
    BodyLiteral,
    ChoiceAtom,
    ClassicalAtom,
    FunctionalTerm,
    Guard,
    INVERTED_RELATION,
    IntegerConstant,
    NafLiteral,
    Program,
    Query,
    Relation,
    Rule,
    Statement,
    Term,
    Variable,
    WeakConstraint,
    make_aux_name,
    statement_variables,
    transform_statement,
)


# --------------------------------------------------------------------------
# Anonymous variables


def name_anonymous_variables(statement: Statement) -> Statement:
    """Replace each `_` with a fresh variable unused in the statement."""
    used = statement_variables(statement)
    counter = 0

    def fresh() -> Variable:
        nonlocal counter
        while True:
            counter += 1
            name = f"V{counter}"
            if name not in used:
                used.add(name)
                return Variable(name)

    def rename(term: Term) -> Term:
        if isinstance(term, AnonymousVariable):
            return fresh()
        return term

    return transform_statement(statement, rename)


# --------------------------------------------------------------------------
# Guard normalization


def _flip_left_guard(atom: AggregateAtom) -> AggregateAtom:
    """Move a lone left guard to the right by inverting its relation."""
    if atom.left_guard is None or atom.right_guard is not None:
        return atom
    guard = atom.left_guard
    return AggregateAtom(
        atom.function,
        atom.elements,
        None,
        Guard(guard.term, INVERTED_RELATION[guard.relation]),
    )


def _split_two_bound_body(
    body: tuple[BodyLiteral, ...]
) -> Union[None, tuple[list[BodyLiteral]], tuple[list[BodyLiteral], list[BodyLiteral]]]:
    """Expand the first two-bound aggregate literal in `body`, if any.

    Returns None when there is nothing to expand, a 1-tuple for the positive
    case (both conjuncts stay in one body), and a 2-tuple for the negated
    case (the bodies of the two replacement statements).
    """
    for index, literal in enumerate(body):
        if not isinstance(literal, AggregateLiteral):
            continue
        atom = literal.atom
        if atom.left_guard is None or atom.right_guard is None:
            continue
        left_only = AggregateAtom(atom.function, atom.elements, atom.left_guard, None)
        right_only = AggregateAtom(atom.function, atom.elements, None, atom.right_guard)
        before, after = list(body[:index]), list(body[index + 1 :])
        if literal.naf:
            first = before + [AggregateLiteral(left_only, naf=True)] + after
            second = before + [AggregateLiteral(right_only, naf=True)] + after
            return (first, second)
        both = (
            before
            + [AggregateLiteral(left_only), AggregateLiteral(right_only)]
            + after
        )
        return (both,)
    return None


def normalize_guards(statement: Statement) -> list[Statement]:
    """Expand two-bound aggregates and choices, then flip left-only guards."""
    worklist: list[Statement] = [statement]
    done: list[Statement] = []
    while worklist:
        current = worklist.pop(0)
        if isinstance(current, Rule):
            head = current.head
            if (
                isinstance(head, ChoiceAtom)
                and head.left_guard is not None
                and head.right_guard is not None
            ):
                left = ChoiceAtom(head.elements, head.left_guard, None)
                right = ChoiceAtom(head.elements, None, head.right_guard)
                worklist.insert(0, Rule(right, current.body, span=current.span))
                worklist.insert(0, Rule(left, current.body, span=current.span))
                continue
            split = _split_two_bound_body(current.body)
            if split is not None:
                for body in reversed(split):
                    worklist.insert(0, Rule(current.head, tuple(body), span=current.span))
                continue
        elif isinstance(current, WeakConstraint):
            split = _split_two_bound_body(current.body)
            if split is not None:
                for body in reversed(split):
                    worklist.insert(
                        0,
                        WeakConstraint(
                            tuple(body),
                            current.weight,
                            current.level,
                            current.terms,
                            span=current.span,
                        ),
                    )
                continue
        done.append(_flip_remaining_left_guards(current))
    return done


def _flip_remaining_left_guards(statement: Statement) -> Statement:
    if isinstance(statement, Rule):
        head = statement.head
        if isinstance(head, ChoiceAtom) and head.left_guard is not None:
            guard = head.left_guard
            head = ChoiceAtom(
                head.elements, None, Guard(guard.term, INVERTED_RELATION[guard.relation])
            )
        body = tuple(_flip_body_literal(l) for l in statement.body)
        return Rule(head, body, span=statement.span)
    if isinstance(statement, WeakConstraint):
        body = tuple(_flip_body_literal(l) for l in statement.body)
        return WeakConstraint(
            body, statement.weight, statement.level, statement.terms, span=statement.span
        )
    return statement


def _flip_body_literal(literal: BodyLiteral) -> BodyLiteral:
    if isinstance(literal, AggregateLiteral):
        return AggregateLiteral(_flip_left_guard(literal.atom), literal.naf)
    return literal


# --------------------------------------------------------------------------
# Choice rules


class AuxNameGenerator:
    """Hands out auxiliary predicate names, one per source predicate.

    Names embed a marker character outside every lexical class, so they can
    never collide with predicates or functors of a parsed program.
    """

    def __init__(self) -> None:
        self._by_predicate: dict[str, str] = {}

    def aux_for(self, predicate: str) -> str:
        if predicate not in self._by_predicate:
            self._by_predicate[predicate] = make_aux_name(predicate, len(self._by_predicate))
        return self._by_predicate[predicate]


def desugar_choice_rules(program: Program) -> Program:
    """Compile choice rules into disjunctive rules plus a count constraint.

    Each element `a : l1, ..., lk` of a choice rule `C <rel> u :- body`
    produces `a | a' :- body, l1, ..., lk` where `a'` is a fresh atom pairing
    a polarity flag with the arguments of `a`; a final constraint enforces the
    guard by counting the chosen `a'` terms.
    """
    generator = AuxNameGenerator()
    rules: list[Rule] = []
    for rule in program.rules:
        if not isinstance(rule.head, ChoiceAtom):
            rules.append(rule)
            continue
        choice = rule.head
        if choice.left_guard is not None:
            raise ValueError("choice guards must be normalized before desugaring")
        guard = choice.right_guard
        if guard is None:
            guard = Guard(IntegerConstant(0), Relation.GE)
        count_elements: list[AggregateElement] = []
        for element in choice.elements:
            atom = element.atom
            aux_predicate = generator.aux_for(atom.predicate)
            polarity = IntegerConstant(0 if atom.strong_negation else 1)
            aux_args = (polarity,) + atom.args
            aux_atom = ClassicalAtom(aux_predicate, aux_args)
            aux_term = FunctionalTerm(aux_predicate, aux_args)
            rules.append(
                Rule(
                    (atom, aux_atom),
                    rule.body + element.condition,
                    span=rule.span,
                )
            )
            count_elements.append(
                AggregateElement(
                    (aux_term,),
                    (NafLiteral(atom),) + element.condition,
                )
            )
        count = AggregateAtom(
            AggregateFunction.COUNT, tuple(count_elements), None, guard
        )
        rules.append(
            Rule(
                (),
                rule.body + (AggregateLiteral(count, naf=True),),
                span=rule.span,
            )
        )
    return Program(tuple(rules), program.weak_constraints, program.query)


# --------------------------------------------------------------------------
# Full pipeline


def desugar(program: Program) -> Program:
    """Anonymous-variable naming, guard normalization, choice elimination."""
    rules: list[Rule] = []
    weaks: list[WeakConstraint] = []
    for statement in program.rules + program.weak_constraints:
        for normalized in normalize_guards(name_anonymous_variables(statement)):
            if isinstance(normalized, Rule):
                rules.append(normalized)
            else:
                weaks.append(normalized)
    query = program.query
    if query is not None:
        query = name_anonymous_variables(query)
    return desugar_choice_rules(Program(tuple(rules), tuple(weaks), query))
