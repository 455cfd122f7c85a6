"""Terms, triples and graphs.

A graph is a finite set of triples over three disjoint term sorts (IRIs,
blank nodes, literals).  Subjects are never literals and predicates are
always IRIs.  Graphs are read and written in a one-triple-per-line format::

    <s> <p> <o> .
    <s> <p> "lexical"^^<datatype> .
    _:b <p> "plain" .
    # comment

IRI contents between the angle brackets are taken verbatim: there is no
resolution, normalization or escaping.  Literals compare by lexical form
plus datatype ("1" and "01" are different terms).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import GraphSyntaxError, InvalidTriple, UnknownDatatype, UnsupportedFacet

XSD = "http://www.w3.org/2001/XMLSchema#"
XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_BOOLEAN = XSD + "boolean"
XSD_DECIMAL = XSD + "decimal"


@dataclass(frozen=True)
class Iri:
    value: str


@dataclass(frozen=True)
class Blank:
    label: str


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING


Term = Iri | Blank | Literal


def format_term(t: Term) -> str:
    """Serialize a term the way the graph format spells it."""
    if isinstance(t, Iri):
        return f"<{t.value}>"
    if isinstance(t, Blank):
        return f"_:{t.label}"
    if isinstance(t, Literal):
        lex = t.lexical.replace("\\", "\\\\").replace('"', '\\"')
        lex = lex.replace("\n", "\\n").replace("\t", "\\t")
        return f'"{lex}"^^<{t.datatype}>'
    raise TypeError(f"not a term: {t!r}")


def term_key(t: Term) -> str:
    """Canonical sort key; total order used everywhere determinism matters."""
    return format_term(t)


@dataclass(frozen=True)
class Triple:
    """One edge.  Subjects must be IRI/blank, predicates must be IRIs."""

    subject: Term
    predicate: Iri
    object: Term

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise InvalidTriple("literal subject")
        if not isinstance(self.predicate, Iri):
            raise InvalidTriple("predicate must be an IRI")


def triple(s: Term, p: str | Iri, o: Term) -> Triple:
    """Convenience constructor accepting a bare IRI string as predicate."""
    return Triple(s, p if isinstance(p, Iri) else Iri(p), o)


def format_triple(t: Triple) -> str:
    return f"{format_term(t.subject)} {format_term(t.predicate)} {format_term(t.object)} ."


@dataclass(frozen=True)
class Graph:
    triples: frozenset[Triple]

    def __iter__(self):
        return iter(self.triples)

    def __len__(self):
        return len(self.triples)

    def __contains__(self, t: Triple):
        return t in self.triples


def graph(*triples_: Triple) -> Graph:
    return Graph(frozenset(triples_))


EMPTY_GRAPH = Graph(frozenset())


def subjects(g: Graph) -> set[Term]:
    return {t.subject for t in g}


def predicates(g: Graph) -> set[Iri]:
    return {t.predicate for t in g}


def objects(g: Graph) -> set[Term]:
    return {t.object for t in g}


def nodes(g: Graph) -> set[Term]:
    """Subjects and objects; predicates are edge labels, not nodes."""
    return subjects(g) | objects(g)


@dataclass(frozen=True)
class PointedGraph:
    """A graph together with a focus node taken from it."""

    graph: Graph
    focus: Term

    def __post_init__(self):
        if self.focus not in nodes(self.graph):
            raise InvalidTriple(f"focus {format_term(self.focus)} not a node of the graph")


# Labelled triples tag an edge with the direction it is seen from a focus
# node: Out for edges leaving it, Inc for edges arriving at it.  Inc carries
# the actual graph triple (subject, predicate, focus).

@dataclass(frozen=True)
class Out:
    triple: Triple


@dataclass(frozen=True)
class Inc:
    triple: Triple


LabelledTriple = Out | Inc


def format_labelled(lt: LabelledTriple) -> str:
    tag = "out" if isinstance(lt, Out) else "inc"
    return f"{tag} {format_triple(lt.triple)}"


def labelled_key(lt: LabelledTriple) -> str:
    return format_labelled(lt)


def out_neigh(g: Graph, n: Term) -> set[LabelledTriple]:
    """Edges leaving n, tagged Out."""
    return {Out(t) for t in g if t.subject == n}


def inc_neigh(g: Graph, n: Term) -> set[LabelledTriple]:
    """Edges arriving at n, tagged Inc."""
    return {Inc(t) for t in g if t.object == n}


def neighbourhood(g: Graph, n: Term) -> set[LabelledTriple]:
    return out_neigh(g, n) | inc_neigh(g, n)


class NodeKind(Enum):
    IRI = "iri"
    BLANK = "blank"
    LITERAL = "literal"
    NONLITERAL = "nonliteral"


def term_is_kind(t: Term, kind: NodeKind) -> bool:
    if kind is NodeKind.IRI:
        return isinstance(t, Iri)
    if kind is NodeKind.BLANK:
        return isinstance(t, Blank)
    if kind is NodeKind.LITERAL:
        return isinstance(t, Literal)
    return not isinstance(t, Literal)


# ------------------------------------------------------------------ datatypes

_DATATYPE_LEXICAL = {
    XSD_STRING: re.compile(r".*", re.DOTALL),
    XSD_INTEGER: re.compile(r"-?[0-9]+"),
    XSD_BOOLEAN: re.compile(r"true|false|0|1"),
    XSD_DECIMAL: re.compile(r"-?[0-9]+(\.[0-9]+)?"),
}

REGISTERED_DATATYPES = tuple(sorted(_DATATYPE_LEXICAL))


def literal_in_datatype(dt: str, t: Term) -> bool:
    """Is t a literal of datatype dt with a well-formed lexical form?"""
    if dt not in _DATATYPE_LEXICAL:
        raise UnknownDatatype(dt)
    if not isinstance(t, Literal) or t.datatype != dt:
        return False
    return _DATATYPE_LEXICAL[dt].fullmatch(t.lexical) is not None


FACET_KINDS = ("minlength", "maxlength", "pattern")


@dataclass(frozen=True)
class Facet:
    """Restriction on the lexical form: minlength/maxlength take an int,
    pattern an anchored regular expression."""

    kind: str
    value: int | str


def literal_in_facet(dt: str, facet: Facet, t: Term) -> bool:
    """Facet membership; always a subset of literal_in_datatype(dt, ·)."""
    if not literal_in_datatype(dt, t):
        return False
    assert isinstance(t, Literal)
    if facet.kind == "minlength":
        return len(t.lexical) >= int(facet.value)
    if facet.kind == "maxlength":
        return len(t.lexical) <= int(facet.value)
    if facet.kind == "pattern":
        return re.fullmatch(str(facet.value), t.lexical) is not None
    raise UnsupportedFacet(facet.kind)


# -------------------------------------------------------------------- parsing

class _LineScanner:
    """Cursor over one line of graph text."""

    def __init__(self, text: str, lineno: int):
        self.text = text
        self.pos = 0
        self.lineno = lineno

    def error(self, reason: str):
        raise GraphSyntaxError(self.lineno, reason)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take_iriref(self) -> str:
        if self.peek() != "<":
            self.error("expected '<'")
        end = self.text.find(">", self.pos + 1)
        if end < 0:
            self.error("unterminated IRI")
        value = self.text[self.pos + 1 : end]
        if any(c in value for c in '<"') or any(c.isspace() for c in value):
            self.error("whitespace or quote inside IRI")
        self.pos = end + 1
        return value

    def take_blank(self) -> str:
        # caller has already seen '_'
        m = re.match(r"_:([A-Za-z0-9_]+)", self.text[self.pos :])
        if not m:
            self.error("malformed blank node label")
        self.pos += m.end()
        return m.group(1)

    def take_literal(self) -> Literal:
        assert self.peek() == '"'
        self.pos += 1
        out = []
        while True:
            if self.pos >= len(self.text):
                self.error("unterminated literal")
            c = self.text[self.pos]
            if c == "\\":
                esc = self.text[self.pos + 1 : self.pos + 2]
                mapped = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}.get(esc)
                if mapped is None:
                    self.error(f"bad escape \\{esc}")
                out.append(mapped)
                self.pos += 2
                continue
            if c == '"':
                self.pos += 1
                break
            out.append(c)
            self.pos += 1
        datatype = XSD_STRING
        if self.text[self.pos : self.pos + 2] == "^^":
            self.pos += 2
            datatype = self.take_iriref()
        return Literal("".join(out), datatype)

    def take_term(self) -> Term:
        c = self.peek()
        if c == "<":
            return Iri(self.take_iriref())
        if c == "_":
            return Blank(self.take_blank())
        if c == '"':
            return self.take_literal()
        self.error(f"expected a term, found {self.text[self.pos:][:10]!r}")


def parse_graph(text: str) -> Graph:
    """Parse line-triple text; duplicate lines collapse (set semantics)."""
    triples_: set[Triple] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        sc = _LineScanner(raw, lineno)
        s = sc.take_term()
        p = sc.take_term()
        o = sc.take_term()
        if sc.peek() != ".":
            sc.error("expected '.' after object")
        sc.pos += 1
        if not sc.at_end():
            sc.error("trailing content after '.'")
        if not isinstance(p, Iri):
            raise InvalidTriple("predicate must be an IRI", line=lineno)
        if isinstance(s, Literal):
            raise InvalidTriple("literal subject", line=lineno)
        triples_.add(Triple(s, p, o))
    return Graph(frozenset(triples_))


def parse_term(text: str) -> Term:
    """Parse one standalone term (used for --focus on the command line)."""
    sc = _LineScanner(text, 1)
    t = sc.take_term()
    if not sc.at_end():
        sc.error("trailing content after term")
    return t


def serialize_graph(g: Graph) -> str:
    """Canonical text: one triple per line, sorted by serialized form."""
    return "".join(format_triple(t) + "\n" for t in sorted(g, key=format_triple))
