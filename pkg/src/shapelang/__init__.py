"""shapelang: a shape-expression schema engine for RDF-style graphs.

Parse schemas and graphs, analyze schemas statically (well-formedness,
dependency graph, negshapes, well-definedness), prove that neighbourhoods
satisfy shape expressions, and enumerate valid typings with certificates.
"""

from .analysis import (
    analyze_schema,
    defs,
    dep_graph,
    dep_subgraph,
    expr,
    incl,
    invproperties,
    is_dag,
    is_well_defined,
    is_well_formed,
    negshapes,
    properties,
    reachable,
    refs,
    replace_shape,
    rule,
    shapes,
    triple_constraints,
)
from .config import EngineConfig, config_from_env
from .errors import (
    BudgetExceeded,
    GraphSyntaxError,
    InvalidTyping,
    NotWellDefined,
    NotWellFormed,
    SchemaSyntaxError,
    SearchBudgetExceeded,
    ShapeLangError,
    UnknownLabel,
    UnknownNode,
)
from .parser import parse_expr, parse_schema
from .printer import format_expr, format_schema
from .rdf import (
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
    triple,
)
from .satisfaction import (
    check_proof,
    elim_expr,
    matches,
    node_paths,
    nullable,
    proof_to_json,
    proof_tree_id,
    prove,
    reduce_expr,
    rule_paths,
    satisfies,
    witness,
)
from .semantics import (
    typing_key,
    typing_to_json,
    ReturnCode,
    Validator,
    allowed,
    assert_shape,
    builtin_oracle,
    enumerate_typings,
    is_valid_typing,
    matching,
    recheck_certificate,
    typing_satisfies,
    valid_typings,
)
from .syntax import (
    CARD_NONE,
    CARD_ONE,
    And,
    Assert,
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
    Negate,
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
    in_bounds,
    schema,
)

__version__ = "0.1.0"
