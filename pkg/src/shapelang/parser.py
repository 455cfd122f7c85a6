"""Recursive-descent parser for the schema surface syntax.

Grammar (authoritative copy in the README):

    schema      : rule+
    rule        : LABEL '=' ('open' inclspec? | 'close') '{' expr '}' extcond*
    inclspec    : 'incl' '{' (iri (',' iri)*)? '}'
    extcond     : 'ext' STRING STRING            # language, definition
    expr        : someof
    someof      : oneof  ('|' oneof)*            # loosest
    oneof       : grouped ('@' grouped)*
    grouped     : atom   (',' atom)*             # tightest
    atom        : 'empty'
                | '!' tconstr                    # cardinality [0;0]
                | tconstr
                | '(' expr ')' card?             # card -> repetition, bare -> grouping
    tconstr     : '^'? iri '::' constr card?
    constr      : '{' (value (',' value)*)? '}'
                | 'dt' iri facet?
                | 'iri' | 'blank' | 'literal' | 'nonliteral'
                | labelset | '(' labelset ')' | '!' '(' labelset ')'
    labelset    : LABEL (('or' LABEL)* | ('and' LABEL)+)
    value       : iri | STRING ('^^' iri)?
    facet       : 'minlength' NAT | 'maxlength' NAT | 'pattern' STRING
    card        : '[' NAT ';' (NAT | '*') ']'
    iri         : '<'...'>' | 'xsd:' LABEL | LABEL        # bare LABEL names itself

Sugar: a triple constraint without a cardinality means [1;1]; the '!'
prefix means [0;0]; '^' flips the direction and then only shape constraints
are legal.  A single label in constraint position canonicalizes to an
or-constraint; '!(A)' canonicalizes to a nor-constraint.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import (
    EmptyAlternation,
    InvalidInverseConstraint,
    SchemaSyntaxError,
)
from .printer import KEYWORDS
from .rdf import XSD, Facet, Iri, Literal, NodeKind, Term, XSD_STRING
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
    ExtensionCondition,
    Group,
    Inv,
    is_shape_constraint,
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
    ShapeDefinition,
    ShapeExpr,
    SomeOf,
    TripleConstraint,
    ValueSet,
)

_KINDS = {k.value: k for k in NodeKind}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<iriref><[^<>"\s]*>)
  | (?P<string>"(\\.|[^"\\])*")
  | (?P<prefixed>[A-Za-z_][A-Za-z0-9_]*:[A-Za-z_][A-Za-z0-9_]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>[0-9]+)
  | (?P<punct>::|\^\^|[={}()\[\];|@,^!*])
    """,
    re.VERBOSE,
)

_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}


@dataclass(frozen=True)
class _Token:
    kind: str  # iriref | string | prefixed | ident | number | punct | eof
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos, line, bol = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise SchemaSyntaxError(line, pos - bol + 1, f"stray character {text[pos]!r}")
        kind = m.lastgroup
        assert kind is not None
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, m.group(), line, pos - bol + 1))
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            bol = pos + m.group().rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, len(text) - bol + 1))
    return tokens


def _unescape(raw: str, tok: _Token) -> str:
    # raw includes the surrounding quotes
    out, i = [], 1
    while i < len(raw) - 1:
        c = raw[i]
        if c == "\\":
            mapped = _ESCAPES.get(raw[i + 1])
            if mapped is None:
                raise SchemaSyntaxError(tok.line, tok.column, f"bad escape \\{raw[i + 1]}")
            out.append(mapped)
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


class _Parser:
    def __init__(self, tokens: list[_Token], allow_empty_card: bool):
        self.tokens = tokens
        self.pos = 0
        self.allow_empty_card = allow_empty_card

    # -- token plumbing ------------------------------------------------------

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        t = self.tok
        self.pos += 1
        return t

    def error(self, reason: str, tok: _Token | None = None):
        t = tok or self.tok
        raise SchemaSyntaxError(t.line, t.column, reason)

    def at_punct(self, text: str) -> bool:
        return self.tok.kind == "punct" and self.tok.text == text

    def at_word(self, word: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text == word

    def eat_punct(self, text: str) -> _Token:
        if not self.at_punct(text):
            self.error(f"expected {text!r}")
        return self.advance()

    def eat_word(self, word: str) -> _Token:
        if not self.at_word(word):
            self.error(f"expected {word!r}")
        return self.advance()

    def eat_label(self) -> str:
        if self.tok.kind != "ident":
            self.error("expected a shape label")
        if self.tok.text in KEYWORDS:
            self.error(f"keyword {self.tok.text!r} cannot be a shape label")
        return self.advance().text

    def eat_nat(self) -> int:
        if self.tok.kind != "number":
            self.error("expected a number")
        return int(self.advance().text)

    def eat_string(self) -> str:
        if self.tok.kind != "string":
            self.error("expected a string")
        t = self.advance()
        return _unescape(t.text, t)

    # -- terminals -----------------------------------------------------------

    def at_iri(self) -> bool:
        return self.tok.kind in ("iriref", "prefixed") or (
            self.tok.kind == "ident" and self.tok.text not in KEYWORDS
        )

    def eat_iri(self) -> str:
        t = self.tok
        if t.kind == "iriref":
            return self.advance().text[1:-1]
        if t.kind == "prefixed":
            prefix, suffix = self.advance().text.split(":", 1)
            if prefix != "xsd":
                self.error(f"unknown prefix {prefix!r}", t)
            return XSD + suffix
        if t.kind == "ident" and t.text not in KEYWORDS:
            return self.advance().text
        self.error("expected an IRI")
        raise AssertionError  # unreachable

    def parse_value(self) -> Term:
        if self.tok.kind == "string":
            lex = self.eat_string()
            if self.at_punct("^^"):
                self.advance()
                return Literal(lex, self.eat_iri())
            return Literal(lex, XSD_STRING)
        return Iri(self.eat_iri())

    # -- cardinalities -------------------------------------------------------

    def at_card(self) -> bool:
        return self.at_punct("[")

    def parse_card(self) -> Cardinality:
        start = self.eat_punct("[")
        lo = self.eat_nat()
        self.eat_punct(";")
        if self.at_punct("*"):
            self.advance()
            hi: int | None = None
        else:
            hi = self.eat_nat()
        self.eat_punct("]")
        if hi is not None and hi < lo and not self.allow_empty_card:
            self.error(f"empty cardinality interval [{lo};{hi}]", start)
        return Cardinality(lo, hi)

    # -- constraints ----------------------------------------------------------

    def parse_labelset(self, closing: str | None) -> tuple[str, tuple[str, ...]]:
        """Parse LABEL (('or'|'and') LABEL)*; returns (connective, labels).
        A single label reports the connective 'or' (canonical form)."""
        labels = [self.eat_label()]
        connective = None
        while self.at_word("or") or self.at_word("and"):
            word = self.advance().text
            if connective is not None and word != connective:
                self.error("cannot mix 'or' and 'and' in one constraint")
            connective = word
            labels.append(self.eat_label())
        if closing is not None:
            self.eat_punct(closing)
        return connective or "or", tuple(labels)

    def parse_constraint(self) -> Constraint:
        t = self.tok
        if self.at_punct("{"):
            self.advance()
            values: list[Term] = []
            if not self.at_punct("}"):
                values.append(self.parse_value())
                while self.at_punct(","):
                    self.advance()
                    values.append(self.parse_value())
            self.eat_punct("}")
            return ValueSet(frozenset(values))
        if self.at_word("dt"):
            self.advance()
            dt = self.eat_iri()
            facet = None
            if self.at_word("minlength") or self.at_word("maxlength"):
                facet = Facet(self.advance().text, self.eat_nat())
            elif self.at_word("pattern"):
                self.advance()
                facet = Facet("pattern", self.eat_string())
            return DatatypeConstraint(dt, facet)
        if t.kind == "ident" and t.text in _KINDS:
            self.advance()
            return KindConstraint(_KINDS[t.text])
        if self.at_punct("!"):
            self.advance()
            self.eat_punct("(")
            if self.at_punct(")"):
                raise EmptyAlternation(t.line, t.column, "empty negated constraint")
            connective, labels = self.parse_labelset(")")
            return Nor(labels) if connective == "or" else Nand(labels)
        if self.at_punct("("):
            self.advance()
            if self.at_punct(")"):
                raise EmptyAlternation(t.line, t.column, "empty shape constraint")
            connective, labels = self.parse_labelset(")")
            return Or(labels) if connective == "or" else And(labels)
        if t.kind == "ident" and t.text not in KEYWORDS:
            connective, labels = self.parse_labelset(None)
            return Or(labels) if connective == "or" else And(labels)
        self.error("expected a constraint")
        raise AssertionError  # unreachable

    # -- expressions -----------------------------------------------------------

    def parse_tconstr(self, negated: bool) -> TripleConstraint:
        t = self.tok
        inverse = False
        if self.at_punct("^"):
            self.advance()
            inverse = True
        pred = self.eat_iri()
        self.eat_punct("::")
        constraint = self.parse_constraint()
        if inverse and not is_shape_constraint(constraint):
            raise InvalidInverseConstraint(
                "inverse triple constraints require a shape constraint",
                line=t.line,
                column=t.column,
            )
        dp = Inv(pred) if inverse else Nop(pred)
        if negated:
            if self.at_card():
                self.error("negated triple constraint cannot carry a cardinality")
            return TripleConstraint(DirectedTripleConstraint(dp, constraint), CARD_NONE)
        card = self.parse_card() if self.at_card() else CARD_ONE
        return TripleConstraint(DirectedTripleConstraint(dp, constraint), card)

    def parse_atom(self) -> ShapeExpr:
        if self.at_punct("}") or self.at_punct(")"):
            raise EmptyAlternation(
                self.tok.line, self.tok.column, "expression with no components"
            )
        if self.at_word("empty"):
            self.advance()
            return EmptyShape()
        if self.at_punct("!"):
            self.advance()
            return self.parse_tconstr(negated=True)
        if self.at_punct("("):
            self.advance()
            inner = self.parse_expr()
            self.eat_punct(")")
            if self.at_card():
                return Repetition(inner, self.parse_card())
            return inner
        if self.at_punct("^") or self.at_iri():
            return self.parse_tconstr(negated=False)
        self.error("expected a shape expression")
        raise AssertionError  # unreachable

    def _parse_seq(self, sep: str, sub, build):
        first = sub()
        if not self.at_punct(sep):
            return first
        exprs = [first]
        while self.at_punct(sep):
            self.advance()
            exprs.append(sub())
        return build(tuple(exprs))

    def parse_group(self) -> ShapeExpr:
        return self._parse_seq(",", self.parse_atom, Group)

    def parse_oneof(self) -> ShapeExpr:
        return self._parse_seq("@", self.parse_group, OneOf)

    def parse_expr(self) -> ShapeExpr:
        return self._parse_seq("|", self.parse_oneof, SomeOf)

    # -- rules -----------------------------------------------------------------

    def parse_definition(self) -> ShapeDefinition:
        if self.at_word("close"):
            self.advance()
            self.eat_punct("{")
            expr = self.parse_expr()
            self.eat_punct("}")
            return Close(expr)
        self.eat_word("open")
        incl: frozenset[str] | None = None
        if self.at_word("incl"):
            self.advance()
            self.eat_punct("{")
            iris: list[str] = []
            if not self.at_punct("}"):
                iris.append(self.eat_iri())
                while self.at_punct(","):
                    self.advance()
                    iris.append(self.eat_iri())
            self.eat_punct("}")
            incl = frozenset(iris)
        self.eat_punct("{")
        expr = self.parse_expr()
        self.eat_punct("}")
        return Open(expr, incl)

    def parse_rule(self) -> Rule:
        label = self.eat_label()
        self.eat_punct("=")
        definition = self.parse_definition()
        ext = []
        while self.at_word("ext"):
            self.advance()
            lang = self.eat_string()
            ext.append(ExtensionCondition(lang, self.eat_string()))
        return Rule(label, definition, tuple(ext))

    def parse_schema(self) -> Schema:
        rules = [self.parse_rule()]
        while self.tok.kind != "eof":
            rules.append(self.parse_rule())
        return Schema(tuple(rules))


def parse_schema(text: str, *, allow_empty_card: bool = False) -> Schema:
    """Parse schema text; positions in errors are 1-based line:column."""
    parser = _Parser(_tokenize(text), allow_empty_card)
    return parser.parse_schema()


def parse_expr(text: str, *, allow_empty_card: bool = False) -> ShapeExpr:
    """Parse one shape expression (handy in tests and the REPL)."""
    parser = _Parser(_tokenize(text), allow_empty_card)
    e = parser.parse_expr()
    if parser.tok.kind != "eof":
        parser.error("trailing content after expression")
    return e
