"""Parser and canonical printer.

The sugar table is pinned by exact AST equality: a forward constraint
defaults to cardinality [1;1], a negated one to [0;0], and an inverse one
to [1;1] with the direction flipped.
"""

import pytest
from hypothesis import given, settings

from shapelang.errors import (
    EmptyAlternation,
    InvalidInverseConstraint,
    SchemaSyntaxError,
)
from shapelang.parser import parse_expr, parse_schema
from shapelang.printer import format_expr, format_schema
from shapelang.rdf import XSD_INTEGER, XSD_STRING, Facet, Iri, Literal, NodeKind
from shapelang.syntax import (
    CARD_NONE,
    CARD_ONE,
    And,
    Cardinality,
    Close,
    DatatypeConstraint,
    DirectedTripleConstraint,
    EmptyShape,
    ExtensionCondition,
    Group,
    Inv,
    KindConstraint,
    Nand,
    Nop,
    Nor,
    OneOf,
    Open,
    Or,
    Repetition,
    Rule,
    Schema,
    SomeOf,
    TripleConstraint,
    ValueSet,
)

import strategies


IRI_KIND = KindConstraint(NodeKind.IRI)


def tc(pred, constraint, card=CARD_ONE, inv=False):
    direction = Inv(pred) if inv else Nop(pred)
    return TripleConstraint(DirectedTripleConstraint(direction, constraint), card)


# --- sugar table ---------------------------------------------------------------

def test_forward_constraint_defaults_to_card_one():
    assert parse_expr("a::iri") == tc("a", IRI_KIND, Cardinality(1, 1))


def test_negated_constraint_is_card_zero_zero():
    assert parse_expr("! a::iri") == tc("a", IRI_KIND, Cardinality(0, 0))


def test_inverse_constraint_defaults_to_card_one():
    assert parse_expr("^a::(T)") == tc("a", Or(frozenset({"T"})), Cardinality(1, 1), inv=True)


def test_negated_constraint_rejects_explicit_card():
    with pytest.raises(SchemaSyntaxError):
        parse_expr("! a::iri [0;1]")


def test_inverse_requires_shape_constraint():
    with pytest.raises(InvalidInverseConstraint):
        parse_expr("^a::iri")


# --- precedence and grouping ----------------------------------------------------

def test_precedence_someof_loosest():
    e = parse_expr("a::iri | b::iri @ c::iri , d::iri")
    assert isinstance(e, SomeOf)
    assert isinstance(e.exprs[1], OneOf)
    assert isinstance(e.exprs[1].exprs[1], Group)


def test_no_singleton_wrappers():
    assert isinstance(parse_expr("a::iri"), TripleConstraint)


def test_parens_group_only():
    e = parse_expr("(a::iri | b::iri) , c::iri")
    assert isinstance(e, Group)
    assert isinstance(e.exprs[0], SomeOf)


def test_parens_with_card_are_repetition():
    e = parse_expr("(a::iri) [0;*]")
    assert e == Repetition(tc("a", IRI_KIND), Cardinality(0, None))


def test_nested_repetition():
    e = parse_expr("((a::iri) [1;2]) [0;1]")
    assert isinstance(e, Repetition) and isinstance(e.expr, Repetition)


def test_empty_keyword():
    assert parse_expr("empty") == EmptyShape()


# --- constraints ------------------------------------------------------------------

def test_value_set_terms():
    e = parse_expr('a::{ b, "lit", "5"^^xsd:integer }')
    assert e.dtc.constraint == ValueSet(
        frozenset({Iri("b"), Literal("lit", XSD_STRING), Literal("5", XSD_INTEGER)})
    )


def test_empty_value_set():
    assert parse_expr("a::{ }").dtc.constraint == ValueSet(frozenset())


def test_datatype_with_facet():
    e = parse_expr("a::dt xsd:string pattern \"x+\"")
    assert e.dtc.constraint == DatatypeConstraint(XSD_STRING, Facet("pattern", "x+"))


def test_full_iri_datatype():
    e = parse_expr("a::dt <%s>" % XSD_INTEGER)
    assert e.dtc.constraint == DatatypeConstraint(XSD_INTEGER)


@pytest.mark.parametrize("kw,kind", [
    ("iri", NodeKind.IRI),
    ("blank", NodeKind.BLANK),
    ("literal", NodeKind.LITERAL),
    ("nonliteral", NodeKind.NONLITERAL),
])
def test_kind_keywords(kw, kind):
    assert parse_expr(f"a::{kw}").dtc.constraint == KindConstraint(kind)


def test_label_sets():
    assert parse_expr("a::(T or U)").dtc.constraint == Or(frozenset({"T", "U"}))
    assert parse_expr("a::(T and U)").dtc.constraint == And(frozenset({"T", "U"}))
    assert parse_expr("a::!(T or U)").dtc.constraint == Nor(frozenset({"T", "U"}))
    assert parse_expr("a::!(T and U)").dtc.constraint == Nand(frozenset({"T", "U"}))


def test_bare_label_is_singleton_or():
    assert parse_expr("a::T").dtc.constraint == Or(frozenset({"T"}))
    assert parse_expr("a::!(T)").dtc.constraint == Nor(frozenset({"T"}))


def test_mixed_label_set_rejected():
    with pytest.raises(SchemaSyntaxError):
        parse_expr("a::(T or U and V)")


def test_empty_alternations_rejected():
    with pytest.raises(EmptyAlternation):
        parse_expr("a::()")
    with pytest.raises(EmptyAlternation):
        parse_expr("a::!()")


# --- cardinalities ---------------------------------------------------------------

@pytest.mark.parametrize("text,lo,hi", [
    ("[0;1]", 0, 1),
    ("[2;2]", 2, 2),
    ("[1;*]", 1, None),
    ("[0;*]", 0, None),
])
def test_cardinality_forms(text, lo, hi):
    assert parse_expr(f"a::iri {text}").card == Cardinality(lo, hi)


def test_empty_interval_is_a_parse_error_by_default():
    with pytest.raises(SchemaSyntaxError):
        parse_expr("a::iri [2;1]")


def test_empty_interval_admitted_behind_flag():
    e = parse_expr("a::iri [2;1]", allow_empty_card=True)
    assert e.card == Cardinality(2, 1)


# --- rules and schemas ------------------------------------------------------------

def test_close_and_open_definitions():
    s = parse_schema("T = close { a::iri }\nU = open { b::iri }")
    assert isinstance(s.rules[0].definition, Close)
    assert isinstance(s.rules[1].definition, Open)
    assert s.rules[1].definition.incl is None


def test_open_with_inclusion_list():
    s = parse_schema("T = open incl { p, q } { a::iri }")
    assert s.rules[0].definition.incl == frozenset({"p", "q"})


def test_ext_conditions():
    s = parse_schema('T = open { empty } ext "const" "true" ext "l2" "x"')
    assert s.rules[0].ext_conds == (
        ExtensionCondition("const", "true"),
        ExtensionCondition("l2", "x"),
    )


def test_keywords_rejected_as_labels():
    with pytest.raises(SchemaSyntaxError):
        parse_schema("open = close { a::iri }")


def test_error_positions_are_one_based():
    with pytest.raises(SchemaSyntaxError) as exc:
        parse_schema("T = close { a:: }")
    assert exc.value.line == 1 and exc.value.column == 17


def test_xsd_prefix_expansion():
    e = parse_expr("a::{ xsd:integer }")
    assert e.dtc.constraint == ValueSet(frozenset({Iri(XSD_INTEGER)}))


def test_unknown_prefix_rejected():
    with pytest.raises(SchemaSyntaxError):
        parse_expr("a::{ foaf:name }")


# --- canonical printing ------------------------------------------------------------

def test_print_examples():
    cases = [
        "T = close { a::iri }",
        "T = open { a::{ b, c } [0;2] }",
        "T = open incl { p } { !a::literal }",
        "T = open { (a::iri) [1;*] | b::U , ^c::!(U and V) }",
    ]
    for text in cases:
        assert format_schema(parse_schema(text + "\nU = open { empty }\nV = open { empty }")).splitlines()[0] == text


@settings(max_examples=250)
@given(strategies.shape_exprs())
def test_expr_round_trip(e):
    assert parse_expr(format_expr(e)) == e


@settings(max_examples=150)
@given(strategies.schemas())
def test_schema_round_trip(s):
    assert parse_schema(format_schema(s)) == s


@settings(max_examples=150)
@given(strategies.schemas())
def test_printing_is_idempotent(s):
    text = format_schema(s)
    assert format_schema(parse_schema(text)) == text
