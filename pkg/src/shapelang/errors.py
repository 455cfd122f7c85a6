"""Exception hierarchy for the whole engine.

Every error the public API can raise lives here so callers can catch one
base class (`ShapeLangError`) or pick the precise failure they care about.
"""


class ShapeLangError(Exception):
    """Base class for all engine errors."""


# ---------------------------------------------------------------- graph layer

class GraphSyntaxError(ShapeLangError):
    """Malformed line in the line-triple graph format."""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class InvalidTriple(ShapeLangError):
    """Structural triple violation: literal subject or non-IRI predicate."""

    def __init__(self, reason: str, line: int | None = None):
        self.line = line
        self.reason = reason
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{reason}")


class UnknownDatatype(ShapeLangError):
    """Datatype IRI is not in the registry."""

    def __init__(self, iri: str):
        self.iri = iri
        super().__init__(f"unknown datatype <{iri}>")


class UnsupportedFacet(ShapeLangError):
    """Facet kind outside the supported set (minlength/maxlength/pattern)."""

    def __init__(self, kind: str):
        self.kind = kind
        super().__init__(f"unsupported facet {kind!r}")


# --------------------------------------------------------------- schema layer

class SchemaSyntaxError(ShapeLangError):
    """Malformed schema text; carries a 1-based line/column position."""

    def __init__(self, line: int, column: int, reason: str):
        self.line = line
        self.column = column
        self.reason = reason
        super().__init__(f"{line}:{column}: {reason}")


class InvalidInverseConstraint(ShapeLangError):
    """Inverse triple constraints may only carry shape constraints."""

    def __init__(self, reason: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        self.reason = reason
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{where}{reason}")


class EmptyAlternation(SchemaSyntaxError):
    """An alternation/group/constraint list ended up with no components."""


# ------------------------------------------------------------- analysis layer

class NotWellFormed(ShapeLangError):
    """Operation requires unique labels and refs ⊆ defs."""


class UnknownLabel(ShapeLangError):
    """Shape label is not defined by the schema."""


class UnknownNode(ShapeLangError):
    """Node is not part of the graph / digraph / typing domain."""


# ----------------------------------------------------------- proof-tree layer

class SearchBudgetExceeded(ShapeLangError):
    """Proof search visited more subgoals than the configured budget."""


class InvalidPath(ShapeLangError):
    """Path does not address a node of the proof tree."""


class InvalidChildIndex(ShapeLangError):
    """Child index outside 1..max_child(tree)."""


class NotOneOf(ShapeLangError):
    """Expression is not a one-of alternation."""


class SingletonOneOf(ShapeLangError):
    """One-of elimination needs more than one component."""


class IndexOutOfRange(ShapeLangError):
    """Component index outside 1..|components|."""


class NotOneOfAtPath(ShapeLangError):
    """Proof-tree node at the given path is not a one-of application."""


# -------------------------------------------------------------- typing layer

class NotWellDefined(ShapeLangError):
    """Operation requires a well-defined schema (acyclic negation shapes)."""


class InvalidTyping(ShapeLangError):
    """Candidate typing violates the typing-map invariants."""


class NotNegatedHere(ShapeLangError):
    """assert_shape needs Negate(label) present at the node."""


class BudgetExceeded(ShapeLangError):
    """Graph/schema size exceeds the configured enumeration caps."""
