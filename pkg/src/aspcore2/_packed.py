"""Bitmask packing of ground programs for the enumeration kernels.

Candidate atoms become bit positions; rule bodies become positive/negative
masks plus packed aggregates whose tuples carry precomputed weights and
guard comparisons. Both the compiled and the pure-Python kernel consume the
same flat integer arrays, so they differ only in arithmetic width.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .ground import (
    EQUAL,
    GREATER,
    GroundProgram,
    LESS,
    builtin_truth,
    term_compare,
    term_sort_key,
)
from .syntax import (
    AggregateFunction,
    AggregateLiteral,
    BuiltinAtom,
    ClassicalAtom,
    Guard,
    IntegerConstant,
    NafLiteral,
    Relation,
    Rule,
    Term,
)

KIND_COUNT = 0
KIND_SUM = 1
KIND_MAX = 2
KIND_MIN = 3

_KIND = {
    AggregateFunction.COUNT: KIND_COUNT,
    AggregateFunction.SUM: KIND_SUM,
    AggregateFunction.MAX: KIND_MAX,
    AggregateFunction.MIN: KIND_MIN,
}

REL_LT = 0
REL_GT = 1
REL_LE = 2
REL_GE = 3
REL_EQ = 4
REL_NE = 5

_REL = {
    Relation.LT: REL_LT,
    Relation.GT: REL_GT,
    Relation.LE: REL_LE,
    Relation.GE: REL_GE,
    Relation.EQ: REL_EQ,
    Relation.NE: REL_NE,
}


def relation_truth(cmp: int, rel: int) -> bool:
    if rel == REL_LT:
        return cmp == LESS
    if rel == REL_GT:
        return cmp == GREATER
    if rel == REL_LE:
        return cmp != GREATER
    if rel == REL_GE:
        return cmp != LESS
    if rel == REL_EQ:
        return cmp == EQUAL
    return cmp != EQUAL


def atom_sort_key(atom: ClassicalAtom):
    return (
        atom.predicate,
        len(atom.args),
        tuple(term_sort_key(a) for a in atom.args),
        atom.strong_negation,
    )


def derivable_atoms(program: GroundProgram) -> set[ClassicalAtom]:
    """Head atoms derivable when naf-literals and aggregates are taken as
    satisfiable; builtin atoms have fixed truth and do filter."""
    derived: set[ClassicalAtom] = set()
    pending = list(program.rules)
    changed = True
    while changed:
        changed = False
        remaining: list[Rule] = []
        for rule in pending:
            viable = True
            fires = True
            for literal in rule.body:
                if isinstance(literal, AggregateLiteral):
                    continue
                if isinstance(literal.atom, BuiltinAtom):
                    atom = literal.atom
                    if builtin_truth(atom.left, atom.relation, atom.right) == literal.naf:
                        viable = False
                        break
                elif not literal.naf and literal.atom not in derived:
                    fires = False
            if not viable:
                continue
            if fires:
                for atom in rule.head:
                    if atom not in derived:
                        derived.add(atom)
                        changed = True
            else:
                remaining.append(rule)
        pending = remaining
    return derived


@dataclass(frozen=True)
class PackedGuard:
    rel: int
    is_int: bool
    int_value: int


@dataclass(frozen=True)
class PackedTuple:
    weight: int  # contribution to #sum (0 for non-integer or empty tuples)
    participates: bool  # tuple has arity >= 1, so it feeds #max/#min
    cmp_left: int  # term_compare(first component, left guard term)
    cmp_right: int
    conditions: tuple[tuple[int, int], ...]  # (pos_mask, neg_mask) alternatives


@dataclass(frozen=True)
class PackedAggregate:
    naf: bool
    kind: int
    left: Optional[PackedGuard]
    right: Optional[PackedGuard]
    tuples: tuple[PackedTuple, ...]


@dataclass(frozen=True)
class PackedRule:
    head: int
    pos: int
    neg: int
    aggregates: tuple[int, ...]


@dataclass(frozen=True)
class PackedProgram:
    size: int
    atoms: tuple[ClassicalAtom, ...]
    conflicts: tuple[int, ...]
    rules: tuple[PackedRule, ...]
    aggregates: tuple[PackedAggregate, ...]

    def flat(self) -> tuple:
        """Primitive-integer view shared by the enumeration kernels:
        (size, conflicts, rule_meta, agg_meta, tuple_meta, cond_flat)."""
        rule_meta: list[tuple[int, int, int, int, int]] = []
        agg_index: list[int] = []
        for rule in self.rules:
            start = len(agg_index)
            agg_index.extend(rule.aggregates)
            rule_meta.append((rule.head, rule.pos, rule.neg, start, len(rule.aggregates)))
        agg_meta: list[tuple[int, ...]] = []
        tuple_meta: list[tuple[int, int, int, int, int, int]] = []
        cond_flat: list[tuple[int, int]] = []
        for agg in self.aggregates:
            tup_start = len(tuple_meta)
            for tup in agg.tuples:
                cond_start = len(cond_flat)
                cond_flat.extend(tup.conditions)
                tuple_meta.append(
                    (
                        tup.weight,
                        1 if tup.participates else 0,
                        tup.cmp_left,
                        tup.cmp_right,
                        cond_start,
                        len(tup.conditions),
                    )
                )
            left = agg.left or PackedGuard(0, False, 0)
            right = agg.right or PackedGuard(0, False, 0)
            agg_meta.append(
                (
                    1 if agg.naf else 0,
                    agg.kind,
                    1 if agg.left is not None else 0,
                    left.rel,
                    1 if left.is_int else 0,
                    left.int_value,
                    1 if agg.right is not None else 0,
                    right.rel,
                    1 if right.is_int else 0,
                    right.int_value,
                    tup_start,
                    len(agg.tuples),
                )
            )
        return (
            self.size,
            tuple(self.conflicts),
            tuple(rule_meta),
            tuple(agg_index),
            tuple(agg_meta),
            tuple(tuple_meta),
            tuple(cond_flat),
        )


class _Packer:
    def __init__(self, atoms: list[ClassicalAtom]) -> None:
        self.atoms = atoms
        self.bit = {atom: 1 << i for i, atom in enumerate(atoms)}

    def literal_masks(
        self, literals, pos: int, neg: int
    ) -> Optional[tuple[int, int]]:
        """Fold classical literals into masks; None when a positive literal
        can never hold over the candidate base."""
        for literal in literals:
            atom = literal.atom
            mask = self.bit.get(atom)
            if literal.naf:
                if mask is not None:
                    neg |= mask
            else:
                if mask is None:
                    return None
                pos |= mask
        return pos, neg

    def pack_guard(self, guard: Optional[Guard]) -> Optional[PackedGuard]:
        if guard is None:
            return None
        is_int = isinstance(guard.term, IntegerConstant)
        return PackedGuard(_REL[guard.relation], is_int, guard.term.value if is_int else 0)

    def pack_aggregate(self, literal: AggregateLiteral) -> PackedAggregate:
        atom = literal.atom
        left = self.pack_guard(atom.left_guard)
        right = self.pack_guard(atom.right_guard)
        by_tuple: dict[tuple[Term, ...], list[tuple[int, int]]] = {}
        order: list[tuple[Term, ...]] = []
        for element in atom.elements:
            masks = self.literal_masks(element.condition, 0, 0)
            if masks is None:
                continue
            if element.terms not in by_tuple:
                by_tuple[element.terms] = []
                order.append(element.terms)
            by_tuple[element.terms].append(masks)
        order.sort(key=lambda terms: tuple(term_sort_key(t) for t in terms))
        tuples: list[PackedTuple] = []
        for terms in order:
            weight = 0
            if terms and isinstance(terms[0], IntegerConstant):
                weight = terms[0].value
            cmp_left = (
                term_compare(terms[0], atom.left_guard.term)
                if terms and atom.left_guard is not None
                else 0
            )
            cmp_right = (
                term_compare(terms[0], atom.right_guard.term)
                if terms and atom.right_guard is not None
                else 0
            )
            tuples.append(
                PackedTuple(
                    weight,
                    bool(terms),
                    cmp_left,
                    cmp_right,
                    tuple(by_tuple[terms]),
                )
            )
        return PackedAggregate(literal.naf, _KIND[atom.function], left, right, tuple(tuples))


def pack_program(program: GroundProgram) -> PackedProgram:
    """Pack a ground program over its derivable head atoms."""
    atoms = sorted(derivable_atoms(program), key=atom_sort_key)
    packer = _Packer(atoms)
    bit = packer.bit
    conflicts: list[int] = []
    for atom in atoms:
        if atom.strong_negation:
            partner = ClassicalAtom(atom.predicate, atom.args, False)
            mask = bit.get(partner)
            if mask is not None:
                conflicts.append(mask | bit[atom])
    rules: list[PackedRule] = []
    aggregates: list[PackedAggregate] = []
    for rule in program.rules:
        head = 0
        skip = False
        for atom in rule.head:
            mask = bit.get(atom)
            if mask is None:
                skip = True
                break
            head |= mask
        if skip:
            continue
        pos = neg = 0
        agg_ids: list[int] = []
        for literal in rule.body:
            if isinstance(literal, AggregateLiteral):
                agg_ids.append(len(aggregates))
                aggregates.append(packer.pack_aggregate(literal))
                continue
            atom = literal.atom
            if isinstance(atom, BuiltinAtom):
                if builtin_truth(atom.left, atom.relation, atom.right) == literal.naf:
                    skip = True
                    break
                continue
            masks = packer.literal_masks([literal], pos, neg)
            if masks is None:
                skip = True
                break
            pos, neg = masks
        if skip:
            continue
        rules.append(PackedRule(head, pos, neg, tuple(agg_ids)))
    return PackedProgram(
        len(atoms), tuple(atoms), tuple(conflicts), tuple(rules), tuple(aggregates)
    )
