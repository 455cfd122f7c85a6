import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shapelang.errors import GraphSyntaxError, InvalidTriple, UnknownDatatype, UnsupportedFacet
from shapelang.rdf import (
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_INTEGER,
    XSD_STRING,
    Blank,
    Facet,
    Graph,
    Inc,
    Iri,
    Literal,
    NodeKind,
    Out,
    PointedGraph,
    Triple,
    graph,
    inc_neigh,
    literal_in_datatype,
    literal_in_facet,
    neighbourhood,
    nodes,
    out_neigh,
    parse_graph,
    parse_term,
    serialize_graph,
    term_is_kind,
    triple,
)

import strategies


def test_triple_rejects_literal_subject():
    with pytest.raises(InvalidTriple):
        Triple(Literal("x"), Iri("p"), Iri("o"))


def test_triple_rejects_non_iri_predicate():
    with pytest.raises(InvalidTriple):
        Triple(Iri("s"), Blank("p"), Iri("o"))


def test_blank_predicate_position_is_fine_elsewhere():
    t = triple(Blank("s"), "p", Blank("o"))
    assert t.subject == Blank("s") and t.object == Blank("o")


def test_graph_deduplicates():
    t = triple(Iri("a"), "p", Iri("b"))
    assert len(graph(t, t)) == 1


def test_nodes_excludes_predicates():
    g = graph(triple(Iri("a"), "p", Iri("b")))
    assert nodes(g) == {Iri("a"), Iri("b")}


def test_pointed_graph_requires_membership():
    g = graph(triple(Iri("a"), "p", Iri("b")))
    PointedGraph(g, Iri("a"))
    with pytest.raises(Exception):
        PointedGraph(g, Iri("zzz"))


def test_neighbourhood_directions():
    g = parse_graph("<a> <p> <b> .\n<c> <q> <a> .\n<b> <r> <c> .")
    a = Iri("a")
    assert out_neigh(g, a) == {Out(triple(Iri("a"), "p", Iri("b")))}
    assert inc_neigh(g, a) == {Inc(triple(Iri("c"), "q", Iri("a")))}
    assert neighbourhood(g, a) == out_neigh(g, a) | inc_neigh(g, a)


def test_self_loop_is_both_directions():
    g = parse_graph("<a> <p> <a> .")
    n = neighbourhood(g, Iri("a"))
    assert {type(lt) for lt in n} == {Out, Inc}


# --- datatypes and facets ----------------------------------------------------

@pytest.mark.parametrize(
    "lex,dt,ok",
    [
        ("anything at all", XSD_STRING, True),
        ("", XSD_STRING, True),
        ("42", XSD_INTEGER, True),
        ("-7", XSD_INTEGER, True),
        ("4.2", XSD_INTEGER, False),
        ("", XSD_INTEGER, False),
        ("true", XSD_BOOLEAN, True),
        ("false", XSD_BOOLEAN, True),
        ("0", XSD_BOOLEAN, True),
        ("1", XSD_BOOLEAN, True),
        ("TRUE", XSD_BOOLEAN, False),
        ("3.14", XSD_DECIMAL, True),
        ("-3", XSD_DECIMAL, True),
        (".5", XSD_DECIMAL, False),
    ],
)
def test_datatype_membership_table(lex, dt, ok):
    assert literal_in_datatype(dt, Literal(lex, dt)) is ok


def test_datatype_membership_is_lexical():
    # same datatype required; an integer literal is not "in" xsd:string
    assert not literal_in_datatype(XSD_STRING, Literal("42", XSD_INTEGER))


def test_non_literals_never_in_a_datatype():
    assert not literal_in_datatype(XSD_STRING, Iri("a"))


def test_unknown_datatype_raises():
    with pytest.raises(UnknownDatatype):
        literal_in_datatype("http://example.org/dt", Literal("x", "http://example.org/dt"))


@pytest.mark.parametrize(
    "facet,lex,ok",
    [
        (Facet("minlength", 2), "ab", True),
        (Facet("minlength", 3), "ab", False),
        (Facet("maxlength", 2), "ab", True),
        (Facet("maxlength", 1), "ab", False),
        (Facet("pattern", "a+b"), "aab", True),
        (Facet("pattern", "a+b"), "xaab", False),  # anchored, not a search
    ],
)
def test_facet_table(facet, lex, ok):
    assert literal_in_facet(XSD_STRING, facet, Literal(lex, XSD_STRING)) is ok


def test_facet_requires_datatype_membership():
    assert not literal_in_facet(XSD_INTEGER, Facet("minlength", 0), Literal("hi", XSD_STRING))


def test_unsupported_facet_kind():
    with pytest.raises(UnsupportedFacet):
        literal_in_facet(XSD_STRING, Facet("totaldigits", 3), Literal("abc", XSD_STRING))


# --- node kinds ---------------------------------------------------------------

def test_node_kinds():
    assert term_is_kind(Iri("a"), NodeKind.IRI)
    assert term_is_kind(Blank("b"), NodeKind.BLANK)
    assert term_is_kind(Literal("x"), NodeKind.LITERAL)
    assert term_is_kind(Iri("a"), NodeKind.NONLITERAL)
    assert term_is_kind(Blank("b"), NodeKind.NONLITERAL)
    assert not term_is_kind(Literal("x"), NodeKind.NONLITERAL)


# --- text format ---------------------------------------------------------------

def test_parse_graph_basics():
    g = parse_graph('# comment\n<a> <p> "hi" .\n\n_:b <q> <a> .\n')
    assert len(g) == 2
    assert Literal("hi", XSD_STRING) in nodes(g)


def test_parse_graph_typed_literal_and_escapes():
    g = parse_graph('<a> <p> "line\\nbreak\\t\\"q\\"" .\n<a> <q> "5"^^<%s> .' % XSD_INTEGER)
    objs = {t.object for t in g}
    assert Literal('line\nbreak\t"q"', XSD_STRING) in objs
    assert Literal("5", XSD_INTEGER) in objs


@pytest.mark.parametrize(
    "line",
    [
        "<a> <p> <b>",          # missing dot
        "<a> <p> .",            # missing object
        '"lit" <p> <b> .',      # literal subject
        "<a> _:p <b> .",        # blank predicate
        "<a> <p> <b> . extra",  # trailing garbage
    ],
)
def test_parse_graph_rejects(line):
    with pytest.raises((GraphSyntaxError, InvalidTriple)):
        parse_graph(line)


def test_parse_graph_reports_line_numbers():
    with pytest.raises(GraphSyntaxError) as exc:
        parse_graph("<a> <p> <b> .\n<broken\n")
    assert "line 2" in str(exc.value)


def test_parse_term_forms():
    assert parse_term("<a>") == Iri("a")
    assert parse_term("_:x") == Blank("x")
    assert parse_term('"s"') == Literal("s", XSD_STRING)
    assert parse_term('"5"^^<%s>' % XSD_INTEGER) == Literal("5", XSD_INTEGER)


@settings(max_examples=200, deadline=None)
@given(st.frozensets(strategies.labelled_triples(), max_size=5))
def test_serialize_parse_round_trip(neigh):
    g = Graph(frozenset(lt.triple for lt in neigh))
    assert parse_graph(serialize_graph(g)) == g


@settings(max_examples=100, deadline=None)
@given(st.frozensets(strategies.labelled_triples(), max_size=5))
def test_serialization_is_canonical(neigh):
    g = Graph(frozenset(lt.triple for lt in neigh))
    text = serialize_graph(g)
    assert serialize_graph(parse_graph(text)) == text
    assert text == "".join(sorted(text.splitlines(keepends=True)))
