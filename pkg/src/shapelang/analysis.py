"""Static schema analysis.

Well-formedness (unique labels, no dangling references), the label
dependency graph, the set of shapes that need refutation evidence
("negshapes"), and the well-definedness check that keeps refutation
well-founded: no negshape may sit on, or reach, a dependency cycle
within its own dependency subgraph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotWellFormed, UnknownLabel, UnknownNode
from .syntax import (
    Close,
    Constraint,
    DirectedTripleConstraint,
    EmptyShape,
    Group,
    Inv,
    Nand,
    Nop,
    Nor,
    OneOf,
    Open,
    Repetition,
    Rule,
    Schema,
    ShapeExpr,
    SomeOf,
    TripleConstraint,
    CARD_ONE,
    constraint_labels,
    schema_to_json,
)

# ------------------------------------------------------------------ label sets

def defs(s: Schema) -> set[str]:
    """Labels defined by the schema's rules."""
    return {r.label for r in s.rules}


def refs_constraint(c: Constraint) -> set[str]:
    return set(constraint_labels(c))


def refs_dtc(dtc: DirectedTripleConstraint) -> set[str]:
    return refs_constraint(dtc.constraint)


def refs_shape_expr(e: ShapeExpr) -> set[str]:
    if isinstance(e, EmptyShape):
        return set()
    if isinstance(e, TripleConstraint):
        return refs_dtc(e.dtc)
    if isinstance(e, Repetition):
        return refs_shape_expr(e.expr)
    out: set[str] = set()
    for sub in e.exprs:
        out |= refs_shape_expr(sub)
    return out


def refs_rule(r: Rule) -> set[str]:
    return refs_shape_expr(r.definition.expr)


def refs(s: Schema) -> set[str]:
    out: set[str] = set()
    for r in s.rules:
        out |= refs_rule(r)
    return out


def duplicate_labels(s: Schema) -> set[str]:
    seen: set[str] = set()
    dups: set[str] = set()
    for r in s.rules:
        (dups if r.label in seen else seen).add(r.label)
    return dups


def undefined_refs(s: Schema) -> set[str]:
    return refs(s) - defs(s)


def is_well_formed(s: Schema) -> bool:
    """Unique labels and every referenced label defined."""
    return not duplicate_labels(s) and not undefined_refs(s)


def _require_wf(s: Schema):
    if duplicate_labels(s):
        raise NotWellFormed(f"duplicate labels: {sorted(duplicate_labels(s))}")
    if undefined_refs(s):
        raise NotWellFormed(f"undefined references: {sorted(undefined_refs(s))}")


def shapes(s: Schema) -> set[str]:
    _require_wf(s)
    return defs(s)


def rule(label: str, s: Schema) -> Rule:
    if duplicate_labels(s):
        raise NotWellFormed(f"duplicate labels: {sorted(duplicate_labels(s))}")
    for r in s.rules:
        if r.label == label:
            return r
    raise UnknownLabel(label)


def expr(label: str, s: Schema) -> ShapeExpr:
    return rule(label, s).definition.expr


def incl(label: str, s: Schema) -> frozenset[str]:
    """Tolerated unmatched outgoing predicates; empty for closed shapes and
    for open shapes without an inclusion set."""
    d = rule(label, s).definition
    if isinstance(d, Open) and d.incl is not None:
        return d.incl
    return frozenset()


# ----------------------------------------------------------- predicate fields

def properties(e: ShapeExpr) -> set[str]:
    """Predicates of forward triple constraints (inverse ones contribute
    nothing here, and vice versa)."""
    if isinstance(e, TripleConstraint):
        return {e.dtc.pred.predicate} if isinstance(e.dtc.pred, Nop) else set()
    if isinstance(e, Repetition):
        return properties(e.expr)
    if isinstance(e, (SomeOf, OneOf, Group)):
        out: set[str] = set()
        for sub in e.exprs:
            out |= properties(sub)
        return out
    return set()


def invproperties(e: ShapeExpr) -> set[str]:
    """Predicates of inverse triple constraints."""
    if isinstance(e, TripleConstraint):
        return {e.dtc.pred.predicate} if isinstance(e.dtc.pred, Inv) else set()
    if isinstance(e, Repetition):
        return invproperties(e.expr)
    if isinstance(e, (SomeOf, OneOf, Group)):
        out: set[str] = set()
        for sub in e.exprs:
            out |= invproperties(sub)
        return out
    return set()


def triple_constraints(e: ShapeExpr) -> set[DirectedTripleConstraint]:
    """All directed triple constraints occurring in the expression."""
    if isinstance(e, TripleConstraint):
        return {e.dtc}
    if isinstance(e, Repetition):
        return triple_constraints(e.expr)
    if isinstance(e, (SomeOf, OneOf, Group)):
        out: set[DirectedTripleConstraint] = set()
        for sub in e.exprs:
            out |= triple_constraints(sub)
        return out
    return set()


# ------------------------------------------------------------------- digraphs

@dataclass(frozen=True)
class DiGraph:
    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        for a, b in self.edges:
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge endpoint outside node set: {(a, b)}")

    def successors(self, u: str) -> set[str]:
        return {b for a, b in self.edges if a == u}


def digraph(nodes, edges) -> DiGraph:
    return DiGraph(frozenset(nodes), frozenset(edges))


def reachable(g: DiGraph, t: str) -> set[str]:
    """Nodes reachable from t through one or more edges (t itself only when
    it lies on a cycle)."""
    if t not in g.nodes:
        raise UnknownNode(t)
    seen: set[str] = set()
    frontier = g.successors(t)
    while frontier:
        seen |= frontier
        frontier = {v for u in frontier for v in g.successors(u)} - seen
    return seen


def is_dag(g: DiGraph) -> bool:
    return all(u not in reachable(g, u) for u in g.nodes)


def dot_digraph(g: DiGraph, name: str = "deps") -> str:
    lines = [f"digraph {name} {{"]
    for n in sorted(g.nodes):
        lines.append(f'  "{n}";')
    for a, b in sorted(g.edges):
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dep_graph(s: Schema) -> DiGraph:
    """Label dependency graph: an edge T1 -> T2 whenever T2 is referenced
    inside the expression defining T1."""
    _require_wf(s)
    nodes = defs(s)
    edges = {
        (r.label, t) for r in s.rules for t in refs_shape_expr(r.definition.expr)
    }
    return DiGraph(frozenset(nodes), frozenset(edges))


def dep_subgraph(t: str, s: Schema) -> DiGraph:
    """Restriction of the dependency graph to what t reaches; t belongs to
    it only if t is on a cycle."""
    g = dep_graph(s)
    if t not in g.nodes:
        raise UnknownLabel(t)
    keep = reachable(g, t)
    return DiGraph(frozenset(keep), frozenset((a, b) for a, b in g.edges if a in keep and b in keep))


# ------------------------------------------------------------------ negshapes

def _in_neg_constraint(c: Constraint) -> set[str]:
    if isinstance(c, (Nor, Nand)):
        return set(c.labels)
    return set()


def _in_neg_expr(e: ShapeExpr) -> set[str]:
    if isinstance(e, TripleConstraint):
        return _in_neg_constraint(e.dtc.constraint)
    if isinstance(e, Repetition):
        return _in_neg_expr(e.expr)
    if isinstance(e, (SomeOf, OneOf, Group)):
        out: set[str] = set()
        for sub in e.exprs:
            out |= _in_neg_expr(sub)
        return out
    return set()


def in_neg(s: Schema) -> set[str]:
    """Labels under an explicit negation (nor/nand constraints)."""
    out: set[str] = set()
    for r in s.rules:
        out |= _in_neg_expr(r.definition.expr)
    return out


def _under_alternation(e: ShapeExpr, alternation: type) -> set[str]:
    # Deliberately non-recursive: only a top-level alternation counts.
    return refs_shape_expr(e) if isinstance(e, alternation) else set()


def under_one_of(s: Schema) -> set[str]:
    """Labels referenced inside a top-level some-of expression.  (Yes,
    some-of: the AlternationReadingMismatch diagnostic compares this
    against the literal one-of reading.)"""
    out: set[str] = set()
    for r in s.rules:
        out |= _under_alternation(r.definition.expr, SomeOf)
    return out


def _in_triple_constr_expr(e: ShapeExpr) -> set[str]:
    if isinstance(e, TripleConstraint):
        return refs_dtc(e.dtc) if e.card == CARD_ONE else set()
    if isinstance(e, Repetition):
        return _in_triple_constr_expr(e.expr)
    if isinstance(e, (SomeOf, OneOf, Group)):
        out: set[str] = set()
        for sub in e.exprs:
            out |= _in_triple_constr_expr(sub)
        return out
    return set()


def in_triple_constr(s: Schema) -> set[str]:
    """Labels referenced by a cardinality-[1;1] triple constraint."""
    out: set[str] = set()
    for r in s.rules:
        out |= _in_triple_constr_expr(r.definition.expr)
    return out


def negshapes(s: Schema) -> set[str]:
    """Shapes whose violation must be certifiable.  Union of the three
    syntactic sources; every member needs an acyclic dependency subgraph
    for validation to be well-founded."""
    _require_wf(s)
    return in_neg(s) | under_one_of(s) | in_triple_constr(s)


def is_well_defined(s: Schema) -> bool:
    """Well-formed and every negshape's dependency subgraph is a DAG."""
    if not is_well_formed(s):
        return False
    g = dep_graph(s)
    for t in negshapes(s):
        keep = reachable(g, t)
        sub = DiGraph(
            frozenset(keep),
            frozenset((a, b) for a, b in g.edges if a in keep and b in keep),
        )
        if not is_dag(sub):
            return False
    return True


def _require_wd(s: Schema):
    _require_wf(s)
    if not is_well_defined(s):
        from .errors import NotWellDefined

        bad = sorted(
            t for t in negshapes(s) if not is_dag(dep_subgraph(t, s))
        )
        raise NotWellDefined(f"cyclic negshapes: {bad}")


def replace_shape(s: Schema, t: str, e: ShapeExpr) -> Schema:
    """Same schema with t's expression swapped; open/close flavour, the
    inclusion set and extension conditions survive."""
    _require_wf(s)
    if t not in defs(s):
        raise UnknownLabel(t)
    new_rules = []
    for r in s.rules:
        if r.label != t:
            new_rules.append(r)
            continue
        d = r.definition
        new_def = Close(e) if isinstance(d, Close) else Open(e, d.incl)
        new_rules.append(Rule(r.label, new_def, r.ext_conds))
    return Schema(tuple(new_rules))


# ---------------------------------------------------------------- diagnostics

@dataclass(frozen=True)
class Diagnostic:
    code: str
    severity: str  # "error" | "warning"
    message: str
    labels: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "code": self.code,
            "severity": self.severity,
            "message": self.message,
            "labels": list(self.labels),
        }


@dataclass(frozen=True)
class SchemaAnalysis:
    """One-stop report: label sets, dependency graph, negshapes, verdicts
    and diagnostics.  dep/negshapes are only populated when well-formed."""

    schema: Schema
    defs: frozenset[str]
    refs: frozenset[str]
    well_formed: bool
    dep: DiGraph | None
    negshapes: frozenset[str]
    well_defined: bool
    diagnostics: tuple[Diagnostic, ...]

    def to_json(self) -> dict:
        return {
            "defs": sorted(self.defs),
            "refs": sorted(self.refs),
            "well_formed": self.well_formed,
            "dep_graph": None
            if self.dep is None
            else {
                "nodes": sorted(self.dep.nodes),
                "edges": sorted([a, b] for a, b in self.dep.edges),
            },
            "negshapes": sorted(self.negshapes),
            "well_defined": self.well_defined,
            "diagnostics": [d.to_json() for d in self.diagnostics],
            "schema": schema_to_json(self.schema),
        }


def analyze_schema(s: Schema) -> SchemaAnalysis:
    diags: list[Diagnostic] = []
    dups = duplicate_labels(s)
    dangling = undefined_refs(s)
    for label in sorted(dups):
        diags.append(
            Diagnostic("DuplicateLabel", "error", f"label {label} defined more than once", (label,))
        )
    for label in sorted(dangling):
        diags.append(
            Diagnostic("UndefinedRef", "error", f"label {label} referenced but never defined", (label,))
        )
    wf = not dups and not dangling
    if not wf:
        return SchemaAnalysis(
            schema=s,
            defs=frozenset(defs(s)),
            refs=frozenset(refs(s)),
            well_formed=False,
            dep=None,
            negshapes=frozenset(),
            well_defined=False,
            diagnostics=tuple(diags),
        )

    g = dep_graph(s)
    neg = negshapes(s)
    wd = True
    for t in sorted(neg):
        if not is_dag(dep_subgraph(t, s)):
            wd = False
            diags.append(
                Diagnostic(
                    "CyclicNegation",
                    "error",
                    f"negshape {t} reaches a dependency cycle; refutation would not be well-founded",
                    (t,),
                )
            )
    if not is_dag(g):
        diags.append(
            Diagnostic(
                "GlobalCycle",
                "warning",
                "dependency graph has a cycle (fine unless a negshape reaches it)",
            )
        )
    some_reading = under_one_of(s)
    one_reading: set[str] = set()
    for r in s.rules:
        one_reading |= _under_alternation(r.definition.expr, OneOf)
    if some_reading != one_reading:
        delta = sorted(some_reading ^ one_reading)
        diags.append(
            Diagnostic(
                "AlternationReadingMismatch",
                "warning",
                "negshapes from top-level alternations differ between the "
                f"some-of reading {sorted(some_reading)} and the one-of reading {sorted(one_reading)}",
                tuple(delta),
            )
        )
    only_via_card_one = in_triple_constr(s) - in_neg(s) - some_reading
    if only_via_card_one:
        diags.append(
            Diagnostic(
                "NegshapeViaExactlyOneRef",
                "warning",
                f"labels {sorted(only_via_card_one)} enter negshapes only via a [1;1] "
                "triple-constraint reference (no negation involved)",
                tuple(sorted(only_via_card_one)),
            )
        )
    return SchemaAnalysis(
        schema=s,
        defs=frozenset(defs(s)),
        refs=frozenset(refs(s)),
        well_formed=True,
        dep=g,
        negshapes=frozenset(neg),
        well_defined=wd,
        diagnostics=tuple(diags),
    )
