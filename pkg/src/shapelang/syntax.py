"""Abstract syntax of shape schemas.

A schema is a non-empty sequence of rules.  Each rule binds a label to a
shape definition (open or closed) plus optional extension conditions.
Shape expressions combine triple constraints with alternation (some-of),
exclusive alternation (one-of), grouping and repetition.

All nodes are frozen dataclasses: structural equality and hashing come for
free, and every operation in the engine builds new trees instead of
mutating old ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import InvalidInverseConstraint
from .rdf import Blank, Facet, NodeKind, Term

LABEL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def check_label(name: str) -> str:
    if not LABEL_RE.fullmatch(name):
        raise ValueError(f"bad shape label {name!r}")
    return name


# ------------------------------------------------------------- cardinalities

@dataclass(frozen=True)
class Cardinality:
    """Closed interval [min; max]; max None means unbounded."""

    min: int
    max: int | None

    def __post_init__(self):
        if self.min < 0 or (self.max is not None and self.max < 0):
            raise ValueError("cardinality bounds must be naturals")


CARD_ONE = Cardinality(1, 1)
CARD_NONE = Cardinality(0, 0)


def in_bounds(k: int, card: Cardinality) -> bool:
    """min <= k and (unbounded or k <= max)."""
    return card.min <= k and (card.max is None or k <= card.max)


def format_card(card: Cardinality) -> str:
    hi = "*" if card.max is None else str(card.max)
    return f"[{card.min};{hi}]"


# ------------------------------------------------------- directed predicates

@dataclass(frozen=True)
class Nop:
    """Forward direction: constrain outgoing p-edges."""

    predicate: str


@dataclass(frozen=True)
class Inv:
    """Inverse direction: constrain incoming p-edges."""

    predicate: str


DirectedPredicate = Nop | Inv


# ------------------------------------------------------------------ constraints

@dataclass(frozen=True)
class ValueSet:
    """Object must be one of the listed terms (IRIs/literals only)."""

    values: frozenset[Term]

    def __post_init__(self):
        for v in self.values:
            if isinstance(v, Blank):
                raise ValueError("blank nodes cannot appear in value sets")


@dataclass(frozen=True)
class DatatypeConstraint:
    datatype: str
    facet: Facet | None = None


@dataclass(frozen=True)
class KindConstraint:
    kind: NodeKind


def _labels_tuple(labels) -> tuple[str, ...]:
    out = tuple(sorted({check_label(l) for l in labels}))
    if not out:
        raise ValueError("shape constraint needs at least one label")
    return out


@dataclass(frozen=True)
class Or:
    """Neighbour must be asserted to satisfy at least one listed shape."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", _labels_tuple(self.labels))


@dataclass(frozen=True)
class And:
    """Neighbour must be asserted to satisfy every listed shape."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", _labels_tuple(self.labels))


@dataclass(frozen=True)
class Nor:
    """Neighbour must be negated at every listed shape."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", _labels_tuple(self.labels))


@dataclass(frozen=True)
class Nand:
    """Neighbour must be negated at some listed shape."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", _labels_tuple(self.labels))


ValueConstraint = ValueSet | DatatypeConstraint | KindConstraint
ShapeConstraint = Or | And | Nor | Nand
Constraint = ValueConstraint | ShapeConstraint


def is_shape_constraint(c: Constraint) -> bool:
    return isinstance(c, (Or, And, Nor, Nand))


def constraint_labels(c: Constraint) -> tuple[str, ...]:
    """Labels referenced by a constraint (empty for value constraints)."""
    return c.labels if is_shape_constraint(c) else ()


# --------------------------------------------------------- triple constraints

@dataclass(frozen=True)
class DirectedTripleConstraint:
    """Direction + predicate + constraint.  Inverse direction only makes
    sense with shape constraints (an edge's subject is never a literal, so
    value constraints on it are ruled out syntactically)."""

    pred: DirectedPredicate
    constraint: Constraint

    def __post_init__(self):
        if isinstance(self.pred, Inv) and not is_shape_constraint(self.constraint):
            raise InvalidInverseConstraint(
                "inverse triple constraints require a shape constraint"
            )


DTC = DirectedTripleConstraint


# ------------------------------------------------------------ shape expressions

@dataclass(frozen=True)
class EmptyShape:
    """Satisfied by the empty neighbourhood only."""


@dataclass(frozen=True)
class TripleConstraint:
    dtc: DirectedTripleConstraint
    card: Cardinality = CARD_ONE


def _exprs_tuple(exprs) -> tuple["ShapeExpr", ...]:
    out = tuple(exprs)
    if not out:
        raise ValueError("compound expressions need at least one component")
    return out


@dataclass(frozen=True)
class SomeOf:
    """Inclusive alternation: the neighbourhood satisfies some component."""

    exprs: tuple["ShapeExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "exprs", _exprs_tuple(self.exprs))


@dataclass(frozen=True)
class OneOf:
    """Exclusive alternation: exactly one component may be satisfiable."""

    exprs: tuple["ShapeExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "exprs", _exprs_tuple(self.exprs))


@dataclass(frozen=True)
class Group:
    """Split the neighbourhood into one block per component."""

    exprs: tuple["ShapeExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "exprs", _exprs_tuple(self.exprs))


@dataclass(frozen=True)
class Repetition:
    """Split the neighbourhood into k blocks of the inner expression,
    k within the cardinality interval."""

    expr: "ShapeExpr"
    card: Cardinality


ShapeExpr = EmptyShape | TripleConstraint | SomeOf | OneOf | Group | Repetition


# ------------------------------------------------------------------- schemas

@dataclass(frozen=True)
class Close:
    expr: ShapeExpr


@dataclass(frozen=True)
class Open:
    """incl=None means no inclusion set was written; both None and an
    explicit set restrict which unmatched outgoing predicates are tolerated
    (None behaves as the empty set)."""

    expr: ShapeExpr
    incl: frozenset[str] | None = None


ShapeDefinition = Close | Open


@dataclass(frozen=True)
class ExtensionCondition:
    language: str
    definition: str


@dataclass(frozen=True)
class Rule:
    label: str
    definition: ShapeDefinition
    ext_conds: tuple[ExtensionCondition, ...] = ()

    def __post_init__(self):
        check_label(self.label)
        object.__setattr__(self, "ext_conds", tuple(self.ext_conds))


@dataclass(frozen=True)
class Schema:
    rules: tuple[Rule, ...]

    def __post_init__(self):
        rules = tuple(self.rules)
        if not rules:
            raise ValueError("a schema needs at least one rule")
        object.__setattr__(self, "rules", rules)


def schema(*rules: Rule) -> Schema:
    return Schema(tuple(rules))


# ------------------------------------------------------------------- verdicts

@dataclass(frozen=True)
class Assert:
    """The node is claimed to satisfy the shape."""

    label: str


@dataclass(frozen=True)
class Negate:
    """The node is claimed to violate the shape."""

    label: str


ShapeVerdict = Assert | Negate


def format_verdict(v: ShapeVerdict) -> str:
    return v.label if isinstance(v, Assert) else "!" + v.label


# ------------------------------------------------------------------ JSON views
#
# Stable, language-neutral field names so fixtures can be consumed by other
# implementations.  Sets serialize sorted.

def term_to_json(t: Term) -> dict:
    from .rdf import Iri, Literal  # local import keeps module init cheap

    if isinstance(t, Iri):
        return {"kind": "iri", "value": t.value}
    if isinstance(t, Blank):
        return {"kind": "blank", "label": t.label}
    assert isinstance(t, Literal)
    return {"kind": "literal", "lexical": t.lexical, "datatype": t.datatype}


def card_to_json(card: Cardinality) -> dict:
    return {"min": card.min, "max": card.max}


def constraint_to_json(c: Constraint) -> dict:
    from .rdf import term_key

    if isinstance(c, ValueSet):
        return {
            "kind": "value_set",
            "values": [term_to_json(v) for v in sorted(c.values, key=term_key)],
        }
    if isinstance(c, DatatypeConstraint):
        facet = None
        if c.facet is not None:
            facet = {"facet": c.facet.kind, "value": c.facet.value}
        return {"kind": "datatype", "datatype": c.datatype, "facet": facet}
    if isinstance(c, KindConstraint):
        return {"kind": "node_kind", "node_kind": c.kind.value}
    tag = {Or: "or", And: "and", Nor: "nor", Nand: "nand"}[type(c)]
    return {"kind": tag, "labels": list(c.labels)}


def dtc_to_json(dtc: DirectedTripleConstraint) -> dict:
    return {
        "direction": "inv" if isinstance(dtc.pred, Inv) else "nop",
        "predicate": dtc.pred.predicate,
        "constraint": constraint_to_json(dtc.constraint),
    }


def expr_to_json(e: ShapeExpr) -> dict:
    if isinstance(e, EmptyShape):
        return {"kind": "empty"}
    if isinstance(e, TripleConstraint):
        return {
            "kind": "triple_constraint",
            "dtc": dtc_to_json(e.dtc),
            "cardinality": card_to_json(e.card),
        }
    if isinstance(e, SomeOf):
        return {"kind": "some_of", "exprs": [expr_to_json(x) for x in e.exprs]}
    if isinstance(e, OneOf):
        return {"kind": "one_of", "exprs": [expr_to_json(x) for x in e.exprs]}
    if isinstance(e, Group):
        return {"kind": "group", "exprs": [expr_to_json(x) for x in e.exprs]}
    assert isinstance(e, Repetition)
    return {
        "kind": "repetition",
        "expr": expr_to_json(e.expr),
        "cardinality": card_to_json(e.card),
    }


def definition_to_json(d: ShapeDefinition) -> dict:
    if isinstance(d, Close):
        return {"kind": "close", "expr": expr_to_json(d.expr)}
    incl = None if d.incl is None else sorted(d.incl)
    return {"kind": "open", "incl": incl, "expr": expr_to_json(d.expr)}


def schema_to_json(s: Schema) -> dict:
    return {
        "rules": [
            {
                "label": r.label,
                "definition": definition_to_json(r.definition),
                "ext_conds": [
                    {"language": c.language, "definition": c.definition}
                    for c in r.ext_conds
                ],
            }
            for r in s.rules
        ]
    }
