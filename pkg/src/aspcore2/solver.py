"""Answer sets, optimality, and cautious query answering over ground
programs.

The reference operations (literal satisfaction, models, reducts) work
directly on atom sets. Enumeration runs on the packed bitmask kernels and
every emitted answer set is re-verified against the reference operations.
"""

from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from . import kernel as _kernel
from ._packed import pack_program
from .errors import CapacityExceeded
from .ground import (
    EQUAL,
    GREATER,
    GroundProgram,
    LESS,
    builtin_truth,
    eval_arithmetic,
    term_compare,
    term_sort_key,
)
from .syntax import (
    AUX_MARKER,
    AggregateElement,
    AggregateFunction,
    AggregateLiteral,
    ArithmeticTerm,
    BodyLiteral,
    BuiltinAtom,
    ClassicalAtom,
    FunctionalTerm,
    IntegerConstant,
    NafLiteral,
    Query,
    Relation,
    Rule,
    SymbolicConstant,
    Term,
    Variable,
    WeakConstraint,
    iter_subterms,
)

Interpretation = frozenset[ClassicalAtom]


class _Infinity:
    """Aggregate value below or above every ground term."""

    __slots__ = ("sign",)

    def __init__(self, sign: int) -> None:
        self.sign = sign

    def __repr__(self) -> str:
        return "+infinity" if self.sign > 0 else "-infinity"


MINUS_INFINITY = _Infinity(-1)
PLUS_INFINITY = _Infinity(1)

AggregateValue = Union[Term, _Infinity]


def satisfies_builtin(left: Term, relation: Relation, right: Term) -> bool:
    return builtin_truth(left, relation, right)


def _relation_truth(cmp: int, relation: Relation) -> bool:
    if relation is Relation.LT:
        return cmp == LESS
    if relation is Relation.GT:
        return cmp == GREATER
    if relation is Relation.LE:
        return cmp != GREATER
    if relation is Relation.GE:
        return cmp != LESS
    if relation is Relation.EQ:
        return cmp == EQUAL
    return cmp != EQUAL


def _value_compare(value: AggregateValue, term: Term) -> int:
    if value is MINUS_INFINITY:
        return LESS
    if value is PLUS_INFINITY:
        return GREATER
    return term_compare(value, term)


def eval_aggregate(
    function: AggregateFunction,
    elements: Iterable[AggregateElement],
    interpretation: Interpretation,
) -> AggregateValue:
    """Aggregate value over the set of tuples whose conditions hold."""
    satisfied: set[tuple[Term, ...]] = set()
    for element in elements:
        if all(satisfies_literal(l, interpretation) for l in element.condition):
            satisfied.add(element.terms)
    if function is AggregateFunction.COUNT:
        return IntegerConstant(len(satisfied))
    if function is AggregateFunction.SUM:
        return IntegerConstant(
            sum(
                t[0].value
                for t in satisfied
                if t and isinstance(t[0], IntegerConstant)
            )
        )
    firsts = [t[0] for t in satisfied if t]
    if not firsts:
        return MINUS_INFINITY if function is AggregateFunction.MAX else PLUS_INFINITY
    ordered = sorted(firsts, key=term_sort_key)
    return ordered[-1] if function is AggregateFunction.MAX else ordered[0]


def satisfies_literal(
    literal: BodyLiteral, interpretation: Interpretation
) -> bool:
    if isinstance(literal, AggregateLiteral):
        atom = literal.atom
        value = eval_aggregate(atom.function, atom.elements, interpretation)
        truth = True
        if atom.left_guard is not None:
            cmp = -_value_compare(value, atom.left_guard.term)
            truth = _relation_truth(cmp, atom.left_guard.relation)
        if truth and atom.right_guard is not None:
            cmp = _value_compare(value, atom.right_guard.term)
            truth = _relation_truth(cmp, atom.right_guard.relation)
        return truth != literal.naf
    atom = literal.atom
    if isinstance(atom, BuiltinAtom):
        truth = satisfies_builtin(atom.left, atom.relation, atom.right)
    else:
        truth = atom in interpretation
    return truth != literal.naf


def _body_true(rule, interpretation: Interpretation) -> bool:
    return all(satisfies_literal(l, interpretation) for l in rule.body)


def is_model(ground_program: GroundProgram, interpretation: Interpretation) -> bool:
    """Every rule with a true body has a true head atom."""
    for rule in ground_program.rules:
        if _body_true(rule, interpretation) and not any(
            atom in interpretation for atom in rule.head
        ):
            return False
    return True


def reduct(
    ground_program: GroundProgram, interpretation: Interpretation
) -> GroundProgram:
    """Rules whose entire body is true under the interpretation, verbatim."""
    return GroundProgram(
        tuple(r for r in ground_program.rules if _body_true(r, interpretation))
    )


# --------------------------------------------------------------------------
# Answer sets


def _atom_as_term(atom: ClassicalAtom) -> Term:
    if atom.args:
        return FunctionalTerm(atom.predicate, atom.args)
    return SymbolicConstant(atom.predicate)


def atom_order_key(atom: ClassicalAtom):
    """Atoms ordered by the term order on their representation; a negated
    atom follows its positive twin."""
    return (term_sort_key(_atom_as_term(atom)), atom.strong_negation)


def interpretation_sort_key(interpretation: Interpretation):
    return tuple(atom_order_key(a) for a in sorted(interpretation, key=atom_order_key))


def project_interpretation(interpretation: Interpretation) -> Interpretation:
    """Strip desugaring auxiliaries, keeping the user signature."""
    return frozenset(
        a for a in interpretation if not a.predicate.startswith(AUX_MARKER)
    )


def _is_consistent(interpretation: Interpretation) -> bool:
    return not any(
        atom.strong_negation
        and ClassicalAtom(atom.predicate, atom.args, False) in interpretation
        for atom in interpretation
    )


def _verify_answer_set(
    ground_program: GroundProgram, interpretation: Interpretation
) -> None:
    """Post-hoc reference check of one emitted answer set."""
    if not _is_consistent(interpretation):
        raise RuntimeError("internal error: inconsistent answer set emitted")
    if not is_model(ground_program, interpretation):
        raise RuntimeError("internal error: emitted answer set is not a model")
    if len(interpretation) > 12:
        return
    red = reduct(ground_program, interpretation)
    atoms = sorted(interpretation, key=atom_order_key)
    for mask in range((1 << len(atoms)) - 1):
        subset = frozenset(a for i, a in enumerate(atoms) if mask >> i & 1)
        if is_model(red, subset):
            raise RuntimeError(
                "internal error: emitted answer set is not minimal for its reduct"
            )


def answer_sets(
    ground_program: GroundProgram,
    *,
    brute_force_limit: int = 24,
    kernel: Optional[str] = None,
    project: bool = True,
    verify: bool = True,
) -> tuple[Interpretation, ...]:
    """All answer sets, projected onto the user signature and sorted.

    Enumerates consistent subsets of the derivable head atoms with the
    packed kernel, keeps the minimal models of their own reducts, and
    re-verifies each result against the reference operations.
    """
    packed = pack_program(ground_program)
    if packed.size > brute_force_limit:
        raise CapacityExceeded(
            f"candidate base has {packed.size} atoms, above the brute-force "
            f"limit {brute_force_limit}"
        )
    flat = packed.flat()
    masks = _kernel.solve_masks(flat, kernel)
    raw: list[Interpretation] = [
        frozenset(atom for i, atom in enumerate(packed.atoms) if mask >> i & 1)
        for mask in masks
    ]
    if verify:
        for interpretation in raw:
            _verify_answer_set(ground_program, interpretation)
        if (
            any(len(i) > 12 for i in raw)
            and kernel != "python"
            and _kernel.compiled_available()
            and _kernel.fits_compiled(flat)
        ):
            if _kernel.solve_masks(flat, "python") != masks:
                raise RuntimeError("internal error: kernels disagree")
    results = raw
    if project:
        seen: dict[Interpretation, None] = {}
        for interpretation in raw:
            seen.setdefault(project_interpretation(interpretation))
        results = list(seen)
    return tuple(sorted(results, key=interpretation_sort_key))


# --------------------------------------------------------------------------
# Weak constraints and optimality


def weak_cost(
    ground_program: GroundProgram, interpretation: Interpretation
) -> dict[Union[int, Term], int]:
    """Per-level cost: the sum of integer weights over the distinct
    (weight, level, tuple) triples whose constraint bodies are true.

    Integer levels key by their value and participate in domination;
    non-integer levels key by their term and are cost-neutral there. A
    warning is emitted for non-integer weights or levels.
    """
    triples: set[tuple[Term, Term, tuple[Term, ...]]] = set()
    for weak in ground_program.weak_constraints:
        if all(satisfies_literal(l, interpretation) for l in weak.body):
            triples.add((weak.weight, weak.level, weak.terms))
    costs: dict[Union[int, Term], int] = {}
    for weight, level, _terms in triples:
        if not isinstance(level, IntegerConstant):
            warnings.warn(
                "weak constraint with non-integer level does not participate "
                "in domination"
            )
        if not isinstance(weight, IntegerConstant):
            warnings.warn("non-integer weak constraint weight contributes no cost")
            continue
        key: Union[int, Term] = (
            level.value if isinstance(level, IntegerConstant) else level
        )
        costs[key] = costs.get(key, 0) + weight.value
    return costs


def dominates(
    costs_a: dict[Union[int, Term], int], costs_b: dict[Union[int, Term], int]
) -> bool:
    """Whether cost vector a is strictly better: smaller at some integer
    level and equal at every higher integer level."""
    levels = sorted(
        {l for l in costs_a if isinstance(l, int)}
        | {l for l in costs_b if isinstance(l, int)},
        reverse=True,
    )
    for level in levels:
        a, b = costs_a.get(level, 0), costs_b.get(level, 0)
        if a < b:
            return True
        if a > b:
            return False
    return False


def optimal_answer_sets(
    ground_program: GroundProgram,
    *,
    brute_force_limit: int = 24,
    kernel: Optional[str] = None,
) -> tuple[Interpretation, ...]:
    """The answer sets not dominated by any other answer set."""
    sets = answer_sets(
        ground_program, brute_force_limit=brute_force_limit, kernel=kernel
    )
    costs = [weak_cost(ground_program, i) for i in sets]
    return tuple(
        candidate
        for index, candidate in enumerate(sets)
        if not any(
            dominates(costs[other], costs[index])
            for other in range(len(sets))
            if other != index
        )
    )


# --------------------------------------------------------------------------
# Queries


@dataclass(frozen=True)
class QueryAnswer:
    """Outcome of a cautious query.

    status: "true" / "false" for ground queries, "answers" for non-ground
    ones (substitutions holds the common answers), or "inconsistent" when
    the program has no answer sets, in which case every substitution
    answers the query.
    """

    status: str
    substitutions: tuple[tuple[tuple[str, Term], ...], ...] = ()


def _match_atom(
    pattern: ClassicalAtom, atom: ClassicalAtom
) -> Optional[dict[str, Term]]:
    sigma: dict[str, Term] = {}
    delayed: list[tuple[Term, Term]] = []

    def unify(p: Term, v: Term) -> bool:
        if isinstance(p, Variable):
            if p.name in sigma:
                return sigma[p.name] == v
            sigma[p.name] = v
            return True
        if isinstance(p, ArithmeticTerm):
            delayed.append((p, v))
            return True
        if isinstance(p, FunctionalTerm):
            return (
                isinstance(v, FunctionalTerm)
                and v.functor == p.functor
                and len(v.args) == len(p.args)
                and all(unify(a, b) for a, b in zip(p.args, v.args))
            )
        return p == v

    if not all(unify(p, v) for p, v in zip(pattern.args, atom.args)):
        return None
    for pattern_term, expected in delayed:
        names = {
            t.name for t in iter_subterms(pattern_term) if isinstance(t, Variable)
        }
        if not names <= sigma.keys():
            return None
        if eval_arithmetic(pattern_term, sigma) != expected:
            return None
    return sigma


def answer_query(
    ground_program: GroundProgram,
    query: Query,
    *,
    brute_force_limit: int = 24,
    kernel: Optional[str] = None,
) -> QueryAnswer:
    """Cautious answering: true in every answer set."""
    sets = answer_sets(
        ground_program, brute_force_limit=brute_force_limit, kernel=kernel
    )
    if not sets:
        return QueryAnswer("inconsistent")
    atom = query.atom
    names = {
        t.name
        for arg in atom.args
        for t in iter_subterms(arg)
        if isinstance(t, Variable)
    }
    if not names:
        args = [eval_arithmetic(a, {}) for a in atom.args]
        if any(a is None for a in args):
            return QueryAnswer("false")
        ground_atom = ClassicalAtom(atom.predicate, tuple(args), atom.strong_negation)
        held = all(ground_atom in interpretation for interpretation in sets)
        return QueryAnswer("true" if held else "false")
    common: Optional[set[tuple[tuple[str, Term], ...]]] = None
    for interpretation in sets:
        matches: set[tuple[tuple[str, Term], ...]] = set()
        for candidate in interpretation:
            if (
                candidate.predicate != atom.predicate
                or candidate.strong_negation != atom.strong_negation
                or len(candidate.args) != len(atom.args)
            ):
                continue
            sigma = _match_atom(atom, candidate)
            if sigma is not None:
                matches.add(tuple(sorted(sigma.items())))
        common = matches if common is None else common & matches
        if not common:
            break
    answers = sorted(
        common or (),
        key=lambda s: tuple(term_sort_key(term) for _, term in s),
    )
    return QueryAnswer("answers", tuple(answers))
