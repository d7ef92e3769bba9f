"""Static restriction checks on desugared programs.

Covers the language's three hard restrictions (safety, aggregate
non-recursiveness via the predicate dependency graph, finite groundability is
the grounder's job) and the two advisory lints (mixed arities, possibly
undefined division).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .syntax import (
    AggregateLiteral,
    ArithmeticTerm,
    ArithOp,
    BodyLiteral,
    BuiltinAtom,
    ChoiceAtom,
    ClassicalAtom,
    FunctionalTerm,
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
    iter_statement_terms,
    iter_subterms,
    statement_to_text,
    term_to_text,
)

# Signed predicate signature: (strong_negation, name, arity).
Signature = tuple[bool, str, int]


def atom_signature(atom: ClassicalAtom) -> Signature:
    return (atom.strong_negation, atom.predicate, len(atom.args))


def signature_to_text(sig: Signature) -> str:
    negation, name, arity = sig
    prefix = "-" if negation else ""
    return f"{prefix}{name}/{arity}"


def _require_desugared(statement: Statement) -> None:
    if isinstance(statement, Rule) and isinstance(statement.head, ChoiceAtom):
        raise ValueError("statement must be desugared before analysis")


# --------------------------------------------------------------------------
# Safety


def _vars_outside_arithmetic(term: Term) -> set[str]:
    """Variables of `term` not nested inside any arithmetic subterm."""
    if isinstance(term, Variable):
        return {term.name}
    if isinstance(term, FunctionalTerm):
        out: set[str] = set()
        for arg in term.args:
            out |= _vars_outside_arithmetic(arg)
        return out
    return set()


def _all_vars(term: Term) -> set[str]:
    return {t.name for t in iter_subterms(term) if isinstance(t, Variable)}


def _atom_vars_outside_arithmetic(atom: Union[ClassicalAtom, BuiltinAtom]) -> set[str]:
    out: set[str] = set()
    if isinstance(atom, ClassicalAtom):
        for arg in atom.args:
            out |= _vars_outside_arithmetic(arg)
    else:
        out |= _vars_outside_arithmetic(atom.left)
        out |= _vars_outside_arithmetic(atom.right)
    return out


def bound_variables(
    literals: tuple[Union[BodyLiteral, NafLiteral], ...], scope: frozenset[str]
) -> frozenset[str]:
    """The subset of `scope` bound by `literals` under the safety induction.

    A variable is bound if it occurs outside arithmetic subterms in a
    positive classical atom; in one side of a `=` builtin whose other side
    has all its scope variables bound; or in a positive `aggr{...} = u`
    literal whose elements have all their scope variables bound.
    """
    bound: set[str] = set()
    for _ in range(len(scope) + 1):
        changed = False
        for literal in literals:
            for name in _literal_bindings(literal, bound, scope):
                if name not in bound:
                    bound.add(name)
                    changed = True
        if not changed:
            break
    return frozenset(bound)


def _literal_bindings(
    literal: Union[BodyLiteral, NafLiteral], bound: set[str], scope: frozenset[str]
) -> set[str]:
    if isinstance(literal, NafLiteral):
        if literal.naf:
            return set()
        atom = literal.atom
        if isinstance(atom, ClassicalAtom):
            return _atom_vars_outside_arithmetic(atom) & scope
        if atom.relation is not Relation.EQ:
            return set()
        out: set[str] = set()
        for side, other in ((atom.left, atom.right), (atom.right, atom.left)):
            if _all_vars(other) & scope <= bound:
                out |= _vars_outside_arithmetic(side) & scope
        return out
    if literal.naf:
        return set()
    atom = literal.atom
    guard = atom.right_guard
    if guard is None or guard.relation is not Relation.EQ or atom.left_guard is not None:
        return set()
    element_vars: set[str] = set()
    outside: set[str] = set()
    for element in atom.elements:
        for term in element.terms:
            element_vars |= _all_vars(term)
            outside |= _vars_outside_arithmetic(term)
        for cond in element.condition:
            element_vars |= _atom_all_vars(cond.atom)
            outside |= _atom_vars_outside_arithmetic(cond.atom)
    if element_vars & scope <= bound:
        return (outside | _vars_outside_arithmetic(guard.term)) & scope
    return set()


def _atom_all_vars(atom: Union[ClassicalAtom, BuiltinAtom]) -> set[str]:
    out: set[str] = set()
    if isinstance(atom, ClassicalAtom):
        for arg in atom.args:
            out |= _all_vars(arg)
    else:
        out |= _all_vars(atom.left)
        out |= _all_vars(atom.right)
    return out


def global_variables(statement: Statement) -> frozenset[str]:
    """Variables appearing outside aggregate elements."""
    out: set[str] = set()
    if isinstance(statement, Rule):
        for atom in statement.head_atoms():
            out |= _atom_all_vars(atom)
        literals: tuple[BodyLiteral, ...] = statement.body
    elif isinstance(statement, WeakConstraint):
        out |= _all_vars(statement.weight)
        out |= _all_vars(statement.level)
        for term in statement.terms:
            out |= _all_vars(term)
        literals = statement.body
    else:
        return frozenset(_atom_all_vars(statement.atom))
    for literal in literals:
        if isinstance(literal, AggregateLiteral):
            for guard in (literal.atom.left_guard, literal.atom.right_guard):
                if guard is not None:
                    out |= _all_vars(guard.term)
        else:
            out |= _atom_all_vars(literal.atom)
    return frozenset(out)


@dataclass(frozen=True)
class UnboundVariable:
    name: str
    scope: str  # "global" or "element-local"
    condition: str  # failed binding clause: "(i)", "(ii)" or "(iii)"


def _diagnose_unbound(
    name: str, literals: tuple[Union[BodyLiteral, NafLiteral], ...]
) -> str:
    """Which binding clause was the nearest miss for an unbound variable.

    (i) positive classical atom, (ii) equality builtin, (iii) aggregate with
    an `=` guard.  An equality or aggregate that merely mentions the variable
    failed its side condition; otherwise only clause (i) could have applied.
    """
    aggregate_hit = False
    for literal in literals:
        if isinstance(literal, NafLiteral):
            atom = literal.atom
            if (
                isinstance(atom, BuiltinAtom)
                and atom.relation is Relation.EQ
                and name in _atom_all_vars(atom)
            ):
                return "(ii)"
        else:
            for guard in (literal.atom.left_guard, literal.atom.right_guard):
                if guard is not None and name in _all_vars(guard.term):
                    aggregate_hit = True
            for element in literal.atom.elements:
                for term in element.terms:
                    if name in _all_vars(term):
                        aggregate_hit = True
                for cond in element.condition:
                    if name in _atom_all_vars(cond.atom):
                        aggregate_hit = True
    return "(iii)" if aggregate_hit else "(i)"


@dataclass(frozen=True)
class SafetyReport:
    statement: Statement
    unbound: tuple[UnboundVariable, ...] = ()

    @property
    def safe(self) -> bool:
        return not self.unbound

    def describe(self) -> str:
        if self.safe:
            return "safe"
        names = ", ".join(
            f"variable {u.name} ({u.scope}, condition {u.condition} unsatisfied)"
            for u in self.unbound
        )
        return f"unsafe: {names} in `{statement_to_text(self.statement)}`"


def check_safety(statement: Statement) -> SafetyReport:
    """Safety per the inductive binding definition, on a desugared statement."""
    _require_desugared(statement)
    scope = global_variables(statement)
    unbound: list[UnboundVariable] = []
    if isinstance(statement, Query):
        body: tuple[Union[BodyLiteral, NafLiteral], ...] = (NafLiteral(statement.atom),)
    else:
        body = statement.body
    bound = bound_variables(body, scope)
    for name in sorted(scope - bound):
        unbound.append(UnboundVariable(name, "global", _diagnose_unbound(name, body)))
    for literal in body:
        if not isinstance(literal, AggregateLiteral):
            continue
        for element in literal.atom.elements:
            element_vars: set[str] = set()
            for term in element.terms:
                element_vars |= _all_vars(term)
            for cond in element.condition:
                element_vars |= _atom_all_vars(cond.atom)
            local = frozenset(element_vars - scope)
            bound_local = bound_variables(element.condition, local)
            for name in sorted(local - bound_local):
                unbound.append(
                    UnboundVariable(
                        name,
                        "element-local",
                        _diagnose_unbound(name, element.condition),
                    )
                )
    return SafetyReport(statement, tuple(unbound))


# --------------------------------------------------------------------------
# Predicate dependency graph


@dataclass(frozen=True)
class DependencyGraph:
    vertices: frozenset[Signature]
    edges: frozenset[tuple[Signature, Signature]]
    _successors: dict = field(compare=False, repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        for source, target in sorted(self.edges):
            self._successors.setdefault(source, []).append(target)

    def successors(self, vertex: Signature) -> list[Signature]:
        return self._successors.get(vertex, [])

    def find_path(self, source: Signature, target: Signature) -> Optional[list[Signature]]:
        """Shortest path with at least one edge, as a vertex list."""
        from collections import deque

        queue = deque([source])
        parents: dict[Signature, Signature] = {}
        seen: set[Signature] = set()
        while queue:
            vertex = queue.popleft()
            for succ in self.successors(vertex):
                if succ == target:
                    path = [target, vertex]
                    while vertex != source:
                        vertex = parents[vertex]
                        path.append(vertex)
                    return path[::-1]
                if succ not in seen:
                    seen.add(succ)
                    parents[succ] = vertex
                    queue.append(succ)
        return None


def _body_classical_atoms(literal: BodyLiteral) -> Iterator[ClassicalAtom]:
    if isinstance(literal, AggregateLiteral):
        for element in literal.atom.elements:
            for cond in element.condition:
                if isinstance(cond.atom, ClassicalAtom):
                    yield cond.atom
    elif isinstance(literal.atom, ClassicalAtom):
        yield literal.atom


def build_dependency_graph(program: Program) -> DependencyGraph:
    """Vertices for every signed predicate occurrence, edges head-to-head
    (including self) and head-to-body-atom per rule."""
    vertices: set[Signature] = set()
    edges: set[tuple[Signature, Signature]] = set()
    for statement in program.statements():
        if isinstance(statement, Query):
            vertices.add(atom_signature(statement.atom))
            continue
        _require_desugared(statement)
        body = statement.body
        body_sigs = [atom_signature(a) for l in body for a in _body_classical_atoms(l)]
        vertices.update(body_sigs)
        if isinstance(statement, Rule):
            head_sigs = [atom_signature(a) for a in statement.head_atoms()]
            vertices.update(head_sigs)
            for head in head_sigs:
                for other in head_sigs:
                    edges.add((head, other))
                for body_sig in body_sigs:
                    edges.add((head, body_sig))
    return DependencyGraph(frozenset(vertices), frozenset(edges))


# --------------------------------------------------------------------------
# Aggregate recursion


@dataclass(frozen=True)
class RecursiveAggregate:
    rule: Rule
    aggregate_atom: Signature
    head_atom: Signature
    path: tuple[Signature, ...]

    def describe(self) -> str:
        route = " -> ".join(signature_to_text(v) for v in self.path)
        return (
            f"aggregate over {signature_to_text(self.aggregate_atom)} is recursive with "
            f"head {signature_to_text(self.head_atom)} via {route} in "
            f"`{rule_text(self.rule)}`"
        )


def rule_text(rule: Rule) -> str:
    return statement_to_text(rule)


def check_aggregates_nonrecursive(
    program: Program, graph: Optional[DependencyGraph] = None
) -> list[RecursiveAggregate]:
    """Every atom inside an aggregate must not reach any head atom of its rule."""
    if graph is None:
        graph = build_dependency_graph(program)
    violations: list[RecursiveAggregate] = []
    for rule in program.rules:
        _require_desugared(rule)
        head_sigs = [atom_signature(a) for a in rule.head_atoms()]
        if not head_sigs:
            continue
        seen: set[tuple[Signature, Signature]] = set()
        for literal in rule.body:
            if not isinstance(literal, AggregateLiteral):
                continue
            for element in literal.atom.elements:
                for cond in element.condition:
                    if not isinstance(cond.atom, ClassicalAtom):
                        continue
                    source = atom_signature(cond.atom)
                    for head in head_sigs:
                        if (source, head) in seen:
                            continue
                        path = graph.find_path(source, head)
                        if path is not None:
                            seen.add((source, head))
                            violations.append(
                                RecursiveAggregate(rule, source, head, tuple(path))
                            )
    return violations


# --------------------------------------------------------------------------
# Lints


@dataclass(frozen=True)
class ArityWarning:
    name: str
    arities: tuple[int, ...]

    def describe(self) -> str:
        arities = ", ".join(str(a) for a in self.arities)
        return f"predicate name '{self.name}' is used with arities {arities}"


def _statement_classical_atoms(statement: Statement) -> Iterator[ClassicalAtom]:
    if isinstance(statement, Query):
        yield statement.atom
        return
    if isinstance(statement, Rule):
        yield from statement.head_atoms()
        if isinstance(statement.head, ChoiceAtom):
            for element in statement.head.elements:
                yield element.atom
                for cond in element.condition:
                    if isinstance(cond.atom, ClassicalAtom):
                        yield cond.atom
    for literal in statement.body:
        yield from _body_classical_atoms(literal)


def check_arities(program: Program) -> list[ArityWarning]:
    """Warn once per predicate name used with multiple arities (strong
    negation does not separate names)."""
    arities: dict[str, set[int]] = {}
    for statement in program.statements():
        for atom in _statement_classical_atoms(statement):
            arities.setdefault(atom.predicate, set()).add(len(atom.args))
    return [
        ArityWarning(name, tuple(sorted(seen)))
        for name, seen in sorted(arities.items())
        if len(seen) > 1
    ]


@dataclass(frozen=True)
class ArithmeticWarning:
    statement: Statement
    term: Term

    def describe(self) -> str:
        return (
            f"division `{term_to_text(self.term)}` may be undefined in "
            f"`{statement_to_text(self.statement)}`; a guard excluding zero "
            f"divisors may discharge this"
        )


def _is_nonzero_integer_constant(term: Term) -> bool:
    if isinstance(term, IntegerConstant):
        return term.value != 0
    if isinstance(term, ArithmeticTerm) and term.op is ArithOp.NEG:
        inner = term.args[0]
        return isinstance(inner, IntegerConstant) and inner.value != 0
    return False


def lint_undefined_arithmetic(program: Program) -> list[ArithmeticWarning]:
    """Warn on any division whose divisor is not a nonzero integer constant."""
    warnings: list[ArithmeticWarning] = []
    for statement in program.statements():
        for top in iter_statement_terms(statement):
            for sub in iter_subterms(top):
                if (
                    isinstance(sub, ArithmeticTerm)
                    and sub.op is ArithOp.DIV
                    and not _is_nonzero_integer_constant(sub.args[1])
                ):
                    warnings.append(ArithmeticWarning(statement, sub))
    return warnings


# --------------------------------------------------------------------------
# Combined report


@dataclass(frozen=True)
class AnalysisResult:
    safety: tuple[SafetyReport, ...]
    recursive_aggregates: tuple[RecursiveAggregate, ...]
    arity_warnings: tuple[ArityWarning, ...]
    arithmetic_warnings: tuple[ArithmeticWarning, ...]

    @property
    def ok(self) -> bool:
        return all(r.safe for r in self.safety) and not self.recursive_aggregates

    def violations(self) -> list[str]:
        out = [r.describe() for r in self.safety if not r.safe]
        out.extend(v.describe() for v in self.recursive_aggregates)
        return out

    def warnings(self) -> list[str]:
        out = [w.describe() for w in self.arity_warnings]
        out.extend(w.describe() for w in self.arithmetic_warnings)
        return out


def check_program(program: Program) -> AnalysisResult:
    """Run every restriction check and lint on a desugared program."""
    graph = build_dependency_graph(program)
    return AnalysisResult(
        tuple(check_safety(s) for s in program.statements()),
        tuple(check_aggregates_nonrecursive(program, graph)),
        tuple(check_arities(program)),
        tuple(lint_undefined_arithmetic(program)),
    )
