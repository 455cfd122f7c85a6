"""Canonical concrete syntax emitter.

The printer is deterministic and emits the canonical surface form: implicit
[1;1] cardinalities are dropped, [0;0] triple constraints print with the
``!`` prefix, IRIs shrink to bare identifiers or the xsd: shorthand when
unambiguous, and singleton shape constraints print as a bare label (the
parser reads that back as an or-constraint, which is what it produces for
singletons in the first place).  On parser output, parse(print(s)) == s.
"""

from __future__ import annotations

from .rdf import XSD, Facet, Iri, Literal, Term, XSD_STRING, term_key
from .syntax import (
    And,
    Cardinality,
    CARD_NONE,
    CARD_ONE,
    Close,
    Constraint,
    DatatypeConstraint,
    DirectedTripleConstraint,
    EmptyShape,
    Group,
    Inv,
    KindConstraint,
    LABEL_RE,
    Nand,
    Nor,
    OneOf,
    Open,
    Or,
    Repetition,
    Rule,
    Schema,
    ShapeExpr,
    SomeOf,
    TripleConstraint,
    ValueSet,
    format_card,
)

KEYWORDS = frozenset(
    "open close incl empty dt iri blank literal nonliteral or and "
    "minlength maxlength pattern ext".split()
)


def format_iri(iri: str) -> str:
    if iri.startswith(XSD) and LABEL_RE.fullmatch(iri[len(XSD) :]):
        return "xsd:" + iri[len(XSD) :]
    if LABEL_RE.fullmatch(iri) and iri not in KEYWORDS:
        return iri
    return f"<{iri}>"


def format_string(s: str) -> str:
    s = s.replace("\\", "\\\\").replace('"', '\\"')
    s = s.replace("\n", "\\n").replace("\t", "\\t")
    return f'"{s}"'


def format_value(t: Term) -> str:
    if isinstance(t, Iri):
        return format_iri(t.value)
    assert isinstance(t, Literal)
    if t.datatype == XSD_STRING:
        return format_string(t.lexical)
    return f"{format_string(t.lexical)}^^{format_iri(t.datatype)}"


def format_facet(f: Facet) -> str:
    if f.kind == "pattern":
        return f"pattern {format_string(str(f.value))}"
    return f"{f.kind} {f.value}"


def format_constraint(c: Constraint) -> str:
    if isinstance(c, ValueSet):
        if not c.values:
            return "{ }"
        return "{ " + ", ".join(format_value(v) for v in sorted(c.values, key=term_key)) + " }"
    if isinstance(c, DatatypeConstraint):
        facet = "" if c.facet is None else " " + format_facet(c.facet)
        return f"dt {format_iri(c.datatype)}{facet}"
    if isinstance(c, KindConstraint):
        return c.kind.value
    if isinstance(c, Or):
        if len(c.labels) == 1:
            return c.labels[0]
        return "(" + " or ".join(c.labels) + ")"
    if isinstance(c, And):
        if len(c.labels) == 1:
            return c.labels[0]
        return "(" + " and ".join(c.labels) + ")"
    if isinstance(c, Nor):
        return "!(" + " or ".join(c.labels) + ")"
    assert isinstance(c, Nand)
    if len(c.labels) == 1:
        return "!(" + c.labels[0] + ")"
    return "!(" + " and ".join(c.labels) + ")"


def format_dtc(dtc: DirectedTripleConstraint, card: Cardinality = CARD_ONE) -> str:
    arrow = "^" if isinstance(dtc.pred, Inv) else ""
    body = f"{arrow}{format_iri(dtc.pred.predicate)}::{format_constraint(dtc.constraint)}"
    if card == CARD_NONE:
        return "!" + body
    if card == CARD_ONE:
        return body
    return body + " " + format_card(card)


# precedence levels: some-of 1 < one-of 2 < group 3 < atoms 4
_LEVEL = {SomeOf: 1, OneOf: 2, Group: 3}
_JOINER = {SomeOf: " | ", OneOf: " @ ", Group: " , "}


def _format_expr(e: ShapeExpr, ambient: int) -> str:
    if isinstance(e, EmptyShape):
        return "empty"
    if isinstance(e, TripleConstraint):
        return format_dtc(e.dtc, e.card)
    if isinstance(e, Repetition):
        return f"({_format_expr(e.expr, 1)}) {format_card(e.card)}"
    own = _LEVEL[type(e)]
    if len(e.exprs) == 1:
        return _format_expr(e.exprs[0], ambient)
    body = _JOINER[type(e)].join(_format_expr(x, own + 1) for x in e.exprs)
    return f"({body})" if ambient > own else body


def format_expr(e: ShapeExpr) -> str:
    return _format_expr(e, 1)


def format_rule(r: Rule) -> str:
    d = r.definition
    if isinstance(d, Close):
        head = "close"
    else:
        assert isinstance(d, Open)
        head = "open"
        if d.incl is not None:
            inner = ", ".join(format_iri(i) for i in sorted(d.incl))
            head += " incl { " + inner + " }" if inner else " incl { }"
    ext = "".join(
        f" ext {format_string(c.language)} {format_string(c.definition)}" for c in r.ext_conds
    )
    return f"{r.label} = {head} {{ {format_expr(d.expr)} }}{ext}"


def format_schema(s: Schema) -> str:
    return "".join(format_rule(r) + "\n" for r in s.rules)
