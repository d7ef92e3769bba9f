"""AST for ASP-Core-2 programs, with the canonical pretty printer.

Every node is a frozen dataclass so terms, atoms and aggregate elements can be
used as set members and dict keys. Statement nodes carry an optional source
span that is excluded from structural equality.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Union


@dataclass(frozen=True)
class Span:
    """Source location: byte offset, length, and 1-based line/column."""

    offset: int
    length: int
    line: int
    column: int

    def describe(self) -> str:
        return f"{self.line}:{self.column}"


# --------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class IntegerConstant:
    value: int


@dataclass(frozen=True)
class SymbolicConstant:
    name: str


@dataclass(frozen=True)
class StringConstant:
    # Content between the quotes, escape sequences retained verbatim.
    value: str

    def content(self) -> str:
        """Unescaped text (the only escape is a doubled-up quote)."""
        return self.value.replace('\\"', '"')


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class AnonymousVariable:
    # Each occurrence stands for a fresh variable; rewriting replaces them
    # positionally with fresh named variables, so none survive desugaring.
    pass


class ArithOp(enum.Enum):
    # Values are the printed operator symbols; unary minus gets a distinct
    # value so the enum does not alias it to SUB.
    NEG = "neg"
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"


@dataclass(frozen=True)
class ArithmeticTerm:
    op: ArithOp
    args: tuple["Term", ...]

    def __post_init__(self) -> None:
        expected = 1 if self.op is ArithOp.NEG else 2
        if len(self.args) != expected:
            raise ValueError(f"{self.op.name} takes {expected} operand(s)")


@dataclass(frozen=True)
class FunctionalTerm:
    functor: str
    args: tuple["Term", ...]

    def __post_init__(self) -> None:
        if not self.args:
            raise ValueError("functional terms have at least one argument")


Term = Union[
    IntegerConstant,
    SymbolicConstant,
    StringConstant,
    Variable,
    AnonymousVariable,
    ArithmeticTerm,
    FunctionalTerm,
]

GROUND_TERM_TYPES = (IntegerConstant, SymbolicConstant, StringConstant, FunctionalTerm)


def is_ground(term: Term) -> bool:
    if isinstance(term, (IntegerConstant, SymbolicConstant, StringConstant)):
        return True
    if isinstance(term, (Variable, AnonymousVariable)):
        return False
    return all(is_ground(a) for a in term.args)


# --------------------------------------------------------------------------
# Atoms and literals


class Relation(enum.Enum):
    LT = "<"
    LE = "<="
    EQ = "="
    NE = "!="
    GT = ">"
    GE = ">="


INVERTED_RELATION = {
    Relation.LT: Relation.GT,
    Relation.LE: Relation.GE,
    Relation.EQ: Relation.EQ,
    Relation.NE: Relation.NE,
    Relation.GT: Relation.LT,
    Relation.GE: Relation.LE,
}


@dataclass(frozen=True)
class ClassicalAtom:
    predicate: str
    args: tuple[Term, ...] = ()
    strong_negation: bool = False

    def signature(self) -> tuple[str, int]:
        return (self.predicate, len(self.args))


@dataclass(frozen=True)
class BuiltinAtom:
    left: Term
    relation: Relation
    right: Term


@dataclass(frozen=True)
class NafLiteral:
    atom: Union[ClassicalAtom, BuiltinAtom]
    naf: bool = False


class AggregateFunction(enum.Enum):
    COUNT = "#count"
    MAX = "#max"
    MIN = "#min"
    SUM = "#sum"


@dataclass(frozen=True)
class AggregateElement:
    terms: tuple[Term, ...] = ()
    condition: tuple[NafLiteral, ...] = ()
    # Distinguishes `{:}` (one empty element, colon present) from terms-only
    # elements when printing; irrelevant once a condition exists.
    explicit_colon: bool = False


@dataclass(frozen=True)
class Guard:
    term: Term
    relation: Relation


@dataclass(frozen=True)
class AggregateAtom:
    function: AggregateFunction
    elements: tuple[AggregateElement, ...] = ()
    left_guard: Optional[Guard] = None
    right_guard: Optional[Guard] = None


@dataclass(frozen=True)
class AggregateLiteral:
    atom: AggregateAtom
    naf: bool = False


BodyLiteral = Union[NafLiteral, AggregateLiteral]


# --------------------------------------------------------------------------
# Statements


@dataclass(frozen=True)
class ChoiceElement:
    atom: ClassicalAtom
    condition: tuple[NafLiteral, ...] = ()


@dataclass(frozen=True)
class ChoiceAtom:
    elements: tuple[ChoiceElement, ...] = ()
    left_guard: Optional[Guard] = None
    right_guard: Optional[Guard] = None


@dataclass(frozen=True)
class Rule:
    # Disjunctive head as a tuple of classical atoms (empty for constraints),
    # or a single choice atom.
    head: Union[tuple[ClassicalAtom, ...], ChoiceAtom]
    body: tuple[BodyLiteral, ...] = ()
    span: Optional[Span] = field(default=None, compare=False)

    def is_constraint(self) -> bool:
        return isinstance(self.head, tuple) and not self.head

    def head_atoms(self) -> tuple[ClassicalAtom, ...]:
        return self.head if isinstance(self.head, tuple) else ()


@dataclass(frozen=True)
class WeakConstraint:
    body: tuple[BodyLiteral, ...]
    weight: Term
    level: Term
    terms: tuple[Term, ...] = ()
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class Query:
    atom: ClassicalAtom
    span: Optional[Span] = field(default=None, compare=False)


Statement = Union[Rule, WeakConstraint, Query]


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = ()
    weak_constraints: tuple[WeakConstraint, ...] = ()
    query: Optional[Query] = None

    def statements(self) -> tuple[Statement, ...]:
        out: tuple[Statement, ...] = self.rules + self.weak_constraints
        if self.query is not None:
            out = out + (self.query,)
        return out


# --------------------------------------------------------------------------
# Auxiliary predicate names (introduced by choice-rule rewriting)

# Marker that cannot appear in any lexed identifier, so generated names can
# never collide with source predicates or functors.
AUX_MARKER = "\x01"


def make_aux_name(base: str, index: int) -> str:
    return f"{AUX_MARKER}{index}{AUX_MARKER}{base}"


def is_aux_name(name: str) -> bool:
    return name.startswith(AUX_MARKER)


def render_aux_name(name: str) -> str:
    _, index, base = name.split(AUX_MARKER)
    return f"__aux_{base}_{index}"


def _render_name(name: str) -> str:
    return render_aux_name(name) if is_aux_name(name) else name


# --------------------------------------------------------------------------
# Generic walkers: bottom-up term transformation and term iteration over
# whole statements. Used by the rewriter (renaming), grounder (substitution)
# and analyses (variable collection).


def transform_term(term: Term, fn: Callable[[Term], Term]) -> Term:
    """Rebuild `term` bottom-up, applying `fn` to every node."""
    if isinstance(term, ArithmeticTerm):
        term = ArithmeticTerm(term.op, tuple(transform_term(a, fn) for a in term.args))
    elif isinstance(term, FunctionalTerm):
        term = FunctionalTerm(term.functor, tuple(transform_term(a, fn) for a in term.args))
    return fn(term)


def _transform_atom(atom, fn):
    if isinstance(atom, ClassicalAtom):
        return ClassicalAtom(
            atom.predicate,
            tuple(transform_term(t, fn) for t in atom.args),
            atom.strong_negation,
        )
    return BuiltinAtom(
        transform_term(atom.left, fn), atom.relation, transform_term(atom.right, fn)
    )


def _transform_naf_literal(literal: NafLiteral, fn) -> NafLiteral:
    return NafLiteral(_transform_atom(literal.atom, fn), literal.naf)


def _transform_guard(guard: Optional[Guard], fn) -> Optional[Guard]:
    if guard is None:
        return None
    return Guard(transform_term(guard.term, fn), guard.relation)


def _transform_body_literal(literal: BodyLiteral, fn) -> BodyLiteral:
    if isinstance(literal, AggregateLiteral):
        atom = literal.atom
        elements = tuple(
            AggregateElement(
                tuple(transform_term(t, fn) for t in e.terms),
                tuple(_transform_naf_literal(l, fn) for l in e.condition),
                e.explicit_colon,
            )
            for e in atom.elements
        )
        return AggregateLiteral(
            AggregateAtom(
                atom.function,
                elements,
                _transform_guard(atom.left_guard, fn),
                _transform_guard(atom.right_guard, fn),
            ),
            literal.naf,
        )
    return _transform_naf_literal(literal, fn)


def transform_statement(statement: Statement, fn: Callable[[Term], Term]) -> Statement:
    """Rebuild a statement with `fn` applied to every term node."""
    if isinstance(statement, Rule):
        if isinstance(statement.head, ChoiceAtom):
            choice = statement.head
            head: Union[tuple[ClassicalAtom, ...], ChoiceAtom] = ChoiceAtom(
                tuple(
                    ChoiceElement(
                        _transform_atom(e.atom, fn),
                        tuple(_transform_naf_literal(l, fn) for l in e.condition),
                    )
                    for e in choice.elements
                ),
                _transform_guard(choice.left_guard, fn),
                _transform_guard(choice.right_guard, fn),
            )
        else:
            head = tuple(_transform_atom(a, fn) for a in statement.head)
        return Rule(
            head,
            tuple(_transform_body_literal(l, fn) for l in statement.body),
            span=statement.span,
        )
    if isinstance(statement, WeakConstraint):
        return WeakConstraint(
            tuple(_transform_body_literal(l, fn) for l in statement.body),
            transform_term(statement.weight, fn),
            transform_term(statement.level, fn),
            tuple(transform_term(t, fn) for t in statement.terms),
            span=statement.span,
        )
    if isinstance(statement, Query):
        return Query(_transform_atom(statement.atom, fn), span=statement.span)
    raise TypeError(f"not a statement: {statement!r}")


def iter_subterms(term: Term) -> Iterator[Term]:
    yield term
    if isinstance(term, (ArithmeticTerm, FunctionalTerm)):
        for arg in term.args:
            yield from iter_subterms(arg)


def _iter_atom_terms(atom) -> Iterator[Term]:
    if isinstance(atom, ClassicalAtom):
        yield from atom.args
    else:
        yield atom.left
        yield atom.right


def _iter_body_literal_terms(literal: BodyLiteral) -> Iterator[Term]:
    if isinstance(literal, AggregateLiteral):
        atom = literal.atom
        for guard in (atom.left_guard, atom.right_guard):
            if guard is not None:
                yield guard.term
        for element in atom.elements:
            yield from element.terms
            for cond in element.condition:
                yield from _iter_atom_terms(cond.atom)
    else:
        yield from _iter_atom_terms(literal.atom)


def iter_statement_terms(statement: Statement) -> Iterator[Term]:
    """Every top-level term position in the statement (not subterms)."""
    if isinstance(statement, Rule):
        if isinstance(statement.head, ChoiceAtom):
            choice = statement.head
            for guard in (choice.left_guard, choice.right_guard):
                if guard is not None:
                    yield guard.term
            for element in choice.elements:
                yield from element.atom.args
                for cond in element.condition:
                    yield from _iter_atom_terms(cond.atom)
        else:
            for atom in statement.head:
                yield from atom.args
        for literal in statement.body:
            yield from _iter_body_literal_terms(literal)
    elif isinstance(statement, WeakConstraint):
        for literal in statement.body:
            yield from _iter_body_literal_terms(literal)
        yield statement.weight
        yield statement.level
        yield from statement.terms
    elif isinstance(statement, Query):
        yield from statement.atom.args
    else:
        raise TypeError(f"not a statement: {statement!r}")


def statement_variables(statement: Statement) -> set[str]:
    """Names of all named variables occurring anywhere in the statement."""
    names: set[str] = set()
    for top in iter_statement_terms(statement):
        for sub in iter_subterms(top):
            if isinstance(sub, Variable):
                names.add(sub.name)
    return names


# --------------------------------------------------------------------------
# Pretty printer
#
# Canonical text: minimal parentheses under the usual precedence (unary minus
# binds tightest, then * /, then + -, all left-associative), single spaces
# around :- and relations, ", " between body literals.

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_ATOM = 4

_BINOP_PREC = {
    ArithOp.ADD: _PREC_ADD,
    ArithOp.SUB: _PREC_ADD,
    ArithOp.MUL: _PREC_MUL,
    ArithOp.DIV: _PREC_MUL,
}


def term_to_text(term: Term, parent_prec: int = 0) -> str:
    if isinstance(term, IntegerConstant):
        text = str(term.value)
        prec = _PREC_NEG if term.value < 0 else _PREC_ATOM
    elif isinstance(term, SymbolicConstant):
        return _render_name(term.name)
    elif isinstance(term, StringConstant):
        return f'"{term.value}"'
    elif isinstance(term, Variable):
        return term.name
    elif isinstance(term, AnonymousVariable):
        return "_"
    elif isinstance(term, FunctionalTerm):
        args = ",".join(term_to_text(a) for a in term.args)
        return f"{_render_name(term.functor)}({args})"
    elif isinstance(term, ArithmeticTerm):
        if term.op is ArithOp.NEG:
            text = "-" + term_to_text(term.args[0], _PREC_NEG)
            prec = _PREC_NEG
        else:
            prec = _BINOP_PREC[term.op]
            left = term_to_text(term.args[0], prec)
            right = term_to_text(term.args[1], prec + 1)
            text = f"{left}{term.op.value}{right}"
    else:
        raise TypeError(f"not a term: {term!r}")
    if prec < parent_prec:
        return f"({text})"
    return text


def classical_atom_to_text(atom: ClassicalAtom) -> str:
    sign = "-" if atom.strong_negation else ""
    name = _render_name(atom.predicate)
    if not atom.args:
        return f"{sign}{name}"
    args = ",".join(term_to_text(a) for a in atom.args)
    return f"{sign}{name}({args})"


def naf_literal_to_text(literal: NafLiteral) -> str:
    if isinstance(literal.atom, BuiltinAtom):
        a = literal.atom
        text = f"{term_to_text(a.left)} {a.relation.value} {term_to_text(a.right)}"
    else:
        text = classical_atom_to_text(literal.atom)
    return f"not {text}" if literal.naf else text


def aggregate_element_to_text(element: AggregateElement) -> str:
    terms = ",".join(term_to_text(t) for t in element.terms)
    if element.condition:
        conds = ", ".join(naf_literal_to_text(l) for l in element.condition)
        return f"{terms} : {conds}" if terms else f": {conds}"
    if element.explicit_colon:
        return f"{terms} :" if terms else ":"
    return terms


def aggregate_atom_to_text(atom: AggregateAtom) -> str:
    inner = "; ".join(aggregate_element_to_text(e) for e in atom.elements)
    text = f"{atom.function.value}{{{inner}}}"
    if atom.left_guard is not None:
        g = atom.left_guard
        text = f"{term_to_text(g.term)} {g.relation.value} {text}"
    if atom.right_guard is not None:
        g = atom.right_guard
        text = f"{text} {g.relation.value} {term_to_text(g.term)}"
    return text


def body_literal_to_text(literal: BodyLiteral) -> str:
    if isinstance(literal, AggregateLiteral):
        text = aggregate_atom_to_text(literal.atom)
        return f"not {text}" if literal.naf else text
    return naf_literal_to_text(literal)


def choice_element_to_text(element: ChoiceElement) -> str:
    text = classical_atom_to_text(element.atom)
    if element.condition:
        conds = ", ".join(naf_literal_to_text(l) for l in element.condition)
        text = f"{text} : {conds}"
    return text


def choice_atom_to_text(atom: ChoiceAtom) -> str:
    inner = "; ".join(choice_element_to_text(e) for e in atom.elements)
    text = f"{{{inner}}}"
    if atom.left_guard is not None:
        g = atom.left_guard
        text = f"{term_to_text(g.term)} {g.relation.value} {text}"
    if atom.right_guard is not None:
        g = atom.right_guard
        text = f"{text} {g.relation.value} {term_to_text(g.term)}"
    return text


def rule_to_text(rule: Rule) -> str:
    body = ", ".join(body_literal_to_text(l) for l in rule.body)
    if isinstance(rule.head, ChoiceAtom):
        head = choice_atom_to_text(rule.head)
    else:
        head = " | ".join(classical_atom_to_text(a) for a in rule.head)
    if not head:
        return f":- {body}." if body else ":-."
    return f"{head} :- {body}." if body else f"{head}."


def weak_constraint_to_text(w: WeakConstraint) -> str:
    body = ", ".join(body_literal_to_text(l) for l in w.body)
    tail = f"{term_to_text(w.weight)}@{term_to_text(w.level)}"
    if w.terms:
        tail += "," + ",".join(term_to_text(t) for t in w.terms)
    prefix = f":~ {body}." if body else ":~."
    return f"{prefix} [{tail}]"


def query_to_text(q: Query) -> str:
    return f"{classical_atom_to_text(q.atom)}?"


def statement_to_text(statement: Statement) -> str:
    if isinstance(statement, Rule):
        return rule_to_text(statement)
    if isinstance(statement, WeakConstraint):
        return weak_constraint_to_text(statement)
    return query_to_text(statement)


def program_to_text(program: Program) -> str:
    lines = [statement_to_text(s) for s in program.statements()]
    return "".join(line + "\n" for line in lines)


# --------------------------------------------------------------------------
# Structural dump (CLI --ast)


def _node_to_data(node: object) -> object:
    if isinstance(node, IntegerConstant):
        return {"type": "integer", "value": node.value}
    if isinstance(node, SymbolicConstant):
        return {"type": "symbolic_constant", "name": _render_name(node.name)}
    if isinstance(node, StringConstant):
        return {"type": "string", "value": node.value}
    if isinstance(node, Variable):
        return {"type": "variable", "name": node.name}
    if isinstance(node, AnonymousVariable):
        return {"type": "anonymous_variable"}
    if isinstance(node, ArithmeticTerm):
        name = "neg" if node.op is ArithOp.NEG else node.op.name.lower()
        return {"type": name, "args": [_node_to_data(a) for a in node.args]}
    if isinstance(node, FunctionalTerm):
        return {
            "type": "function",
            "functor": _render_name(node.functor),
            "args": [_node_to_data(a) for a in node.args],
        }
    if isinstance(node, ClassicalAtom):
        return {
            "type": "classical_atom",
            "predicate": _render_name(node.predicate),
            "strong_negation": node.strong_negation,
            "args": [_node_to_data(a) for a in node.args],
        }
    if isinstance(node, BuiltinAtom):
        return {
            "type": "builtin_atom",
            "relation": node.relation.value,
            "left": _node_to_data(node.left),
            "right": _node_to_data(node.right),
        }
    if isinstance(node, NafLiteral):
        return {"type": "literal", "naf": node.naf, "atom": _node_to_data(node.atom)}
    if isinstance(node, AggregateLiteral):
        return {"type": "literal", "naf": node.naf, "atom": _node_to_data(node.atom)}
    if isinstance(node, AggregateElement):
        return {
            "type": "aggregate_element",
            "terms": [_node_to_data(t) for t in node.terms],
            "condition": [_node_to_data(l) for l in node.condition],
        }
    if isinstance(node, AggregateAtom):
        return {
            "type": "aggregate_atom",
            "function": node.function.value,
            "elements": [_node_to_data(e) for e in node.elements],
            "left_guard": _node_to_data(node.left_guard) if node.left_guard else None,
            "right_guard": _node_to_data(node.right_guard) if node.right_guard else None,
        }
    if isinstance(node, Guard):
        return {"relation": node.relation.value, "term": _node_to_data(node.term)}
    if isinstance(node, ChoiceElement):
        return {
            "type": "choice_element",
            "atom": _node_to_data(node.atom),
            "condition": [_node_to_data(l) for l in node.condition],
        }
    if isinstance(node, ChoiceAtom):
        return {
            "type": "choice_atom",
            "elements": [_node_to_data(e) for e in node.elements],
            "left_guard": _node_to_data(node.left_guard) if node.left_guard else None,
            "right_guard": _node_to_data(node.right_guard) if node.right_guard else None,
        }
    if isinstance(node, Rule):
        head: object
        if isinstance(node.head, ChoiceAtom):
            head = _node_to_data(node.head)
        else:
            head = [_node_to_data(a) for a in node.head]
        return {"type": "rule", "head": head, "body": [_node_to_data(l) for l in node.body]}
    if isinstance(node, WeakConstraint):
        return {
            "type": "weak_constraint",
            "body": [_node_to_data(l) for l in node.body],
            "weight": _node_to_data(node.weight),
            "level": _node_to_data(node.level),
            "terms": [_node_to_data(t) for t in node.terms],
        }
    if isinstance(node, Query):
        return {"type": "query", "atom": _node_to_data(node.atom)}
    if isinstance(node, Program):
        return {
            "type": "program",
            "rules": [_node_to_data(r) for r in node.rules],
            "weak_constraints": [_node_to_data(w) for w in node.weak_constraints],
            "query": _node_to_data(node.query) if node.query else None,
        }
    raise TypeError(f"not an AST node: {node!r}")


def program_to_json(program: Program, indent: int = 2) -> str:
    return json.dumps(_node_to_data(program), indent=indent)
