"""Graph validation: typings, their validity conditions, certificates.

A typing assigns every graph node a set of shape verdicts: Assert(T) ("the
node satisfies T") and, for negshapes only, Negate(T) ("the node violates
T", with the variant typing asserting T required to be invalid).  A typing
is valid when

  * every Negate(T) at n refutes: flipping it to Assert(T) yields an
    invalid typing (well-founded because each flip removes one Negate);
  * every Assert(T) at n passes seven conditions: the neighbourhood splits
    into the matched triples, the tolerated-open triples and the rest
    (1-3); closed shapes tolerate nothing extra (4); open shapes tolerate
    only inclusion-listed outgoing predicates (5); some proof tree over the
    matched triples has a witness whose triples really belong to the
    matching sets of their constraints, shape-witnessed triples are not
    also claimable by a value constraint on the same predicate, and each
    eliminable one-of branch is exclusive — the schema with that branch
    dropped admits no valid typing still asserting T at n (6); every
    extension condition returns true or undefined (7).

Everything is enumerated exhaustively under desk-scale budgets; results are
memoized per (schema, typing) and instrumented, since the recursion depth
bound is part of the engine's contract.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Callable, Iterator, Mapping

from .analysis import (
    expr,
    incl,
    invproperties,
    is_well_defined,
    negshapes,
    properties,
    replace_shape,
    rule,
    shapes,
    triple_constraints,
)
from .config import EngineConfig
from .errors import (
    BudgetExceeded,
    InvalidTyping,
    NotNegatedHere,
    NotWellDefined,
    UnknownNode,
)
from .printer import format_dtc, format_expr, format_schema
from .rdf import (
    Graph,
    Inc,
    LabelledTriple,
    Out,
    Term,
    format_labelled,
    format_term,
    inc_neigh,
    nodes,
    out_neigh,
    serialize_graph,
    term_key,
)
from .satisfaction import (
    ProofTree,
    RRepeat,
    check_proof,
    one_of_applications,
    proof_to_json,
    proof_tree_id,
    prove,
    reduce_expr,
    tree_at,
    value_allowed,
    witness,
)
from .syntax import (
    And,
    Assert,
    Close,
    DirectedTripleConstraint,
    Nand,
    Negate,
    Nop,
    Nor,
    Or,
    Schema,
    ShapeConstraint,
    ShapeVerdict,
    ValueConstraint,
    format_verdict,
    is_shape_constraint,
)

Typing = Mapping[Term, frozenset[ShapeVerdict]]

allowed = value_allowed  # value-constraint membership, re-exported under its contract name


# ------------------------------------------------------------- typing plumbing

def typing_key(t: Typing) -> tuple:
    """Canonical hashable form (sorted by node, then verdict)."""
    return tuple(
        (term_key(n), tuple(sorted(format_verdict(v) for v in t[n])))
        for n in sorted(t, key=term_key)
    )


def typing_to_json(t: Typing) -> dict:
    return {
        format_term(n): sorted(format_verdict(v) for v in t[n])
        for n in sorted(t, key=term_key)
    }


def schema_key(s: Schema) -> str:
    return format_schema(s)


def validate_typing_map(g: Graph, s: Schema, t: Typing) -> None:
    """Raise InvalidTyping unless t is a typing map for (g, s): domain is
    nodes(g); asserted labels are shapes; negated labels are negshapes;
    every negshape gets exactly one of Assert/Negate at every node."""
    shape_set = shapes(s)
    neg = negshapes(s)
    if set(t) != nodes(g):
        raise InvalidTyping("typing domain differs from the graph's node set")
    for n, verdicts in t.items():
        asserted = {v.label for v in verdicts if isinstance(v, Assert)}
        negated = {v.label for v in verdicts if isinstance(v, Negate)}
        if not asserted <= shape_set:
            raise InvalidTyping(f"asserted labels {sorted(asserted - shape_set)} are not shapes")
        if not negated <= neg:
            raise InvalidTyping(f"negated labels {sorted(negated - neg)} are not negshapes")
        if asserted & negated:
            raise InvalidTyping(
                f"{format_term(n)} both asserts and negates {sorted(asserted & negated)}"
            )
        missing = neg - asserted - negated
        if missing:
            raise InvalidTyping(
                f"{format_term(n)} lacks a verdict for negshapes {sorted(missing)}"
            )


def _check_budgets(g: Graph, s: Schema, config: EngineConfig):
    n_nodes, n_shapes = len(nodes(g)), len(shapes(s))
    if n_nodes > config.max_graph_nodes:
        raise BudgetExceeded(f"{n_nodes} graph nodes exceed the cap of {config.max_graph_nodes}")
    if n_shapes > config.max_shapes:
        raise BudgetExceeded(f"{n_shapes} shapes exceed the cap of {config.max_shapes}")


def enumerate_typings(g: Graph, s: Schema, config: EngineConfig | None = None) -> Iterator[dict]:
    """Every typing map for (g, s), deterministically: nodes in canonical
    order; per label the choices are (absent, Assert) for plain shapes and
    (Assert, Negate) for negshapes.  2^|shapes| per node."""
    config = config or EngineConfig()
    if not is_well_defined(s):
        raise NotWellDefined("typing enumeration requires a well-defined schema")
    _check_budgets(g, s, config)
    neg = negshapes(s)
    labels = sorted(shapes(s))
    node_list = sorted(nodes(g), key=term_key)
    per_label: list[tuple[tuple[ShapeVerdict, ...], ...]] = [
        ((Assert(l),), (Negate(l),)) if l in neg else ((), (Assert(l),))
        for l in labels
    ]
    per_node = [
        frozenset(v for choice in combo for v in choice)
        for combo in product(*per_label)
    ] or [frozenset()]
    for assignment in product(per_node, repeat=len(node_list)):
        yield dict(zip(node_list, assignment))


def assert_shape(t: Typing, n: Term, label: str) -> dict:
    """Flip Negate(label) at n to Assert(label)."""
    if n not in t:
        raise UnknownNode(format_term(n))
    if Negate(label) not in t[n]:
        raise NotNegatedHere(f"{label} is not negated at {format_term(n)}")
    new = dict(t)
    new[n] = (t[n] - {Negate(label)}) | {Assert(label)}
    return new


# ------------------------------------------------------ satisfaction of shapes

def typing_satisfies(t: Typing, u: Term, c: ShapeConstraint) -> bool:
    """Does the typing's verdict set at u satisfy the shape constraint?"""
    if u not in t:
        raise UnknownNode(format_term(u))
    verdicts = t[u]
    if isinstance(c, And):
        return all(Assert(l) in verdicts for l in c.labels)
    if isinstance(c, Or):
        return any(Assert(l) in verdicts for l in c.labels)
    if isinstance(c, Nand):
        return any(Negate(l) in verdicts for l in c.labels)
    assert isinstance(c, Nor)
    return all(Negate(l) in verdicts for l in c.labels)


def matching(g: Graph, n: Term, t: Typing, x: DirectedTripleConstraint) -> set[LabelledTriple]:
    """Neighbourhood triples that satisfy the constraint under the typing:
    forward value constraints test the object's value, forward/inverse
    shape constraints test the far end's verdicts."""
    if n not in nodes(g):
        raise UnknownNode(format_term(n))
    out: set[LabelledTriple] = set()
    if isinstance(x.pred, Nop):
        for lt in out_neigh(g, n):
            if lt.triple.predicate.value != x.pred.predicate:
                continue
            if isinstance(x.constraint, ValueConstraint):
                if value_allowed(x.constraint, lt.triple.object):
                    out.add(lt)
            elif typing_satisfies(t, lt.triple.object, x.constraint):
                out.add(lt)
    else:
        assert is_shape_constraint(x.constraint)
        for lt in inc_neigh(g, n):
            if lt.triple.predicate.value != x.pred.predicate:
                continue
            if typing_satisfies(t, lt.triple.subject, x.constraint):
                out.add(lt)
    return out


# ------------------------------------------------------------ extension oracle

class ReturnCode(Enum):
    TRUE = "true"
    FALSE = "false"
    ERROR = "error"
    UNDEFINED = "undefined"


ExtensionOracle = Callable[[str, Graph, Term, str], ReturnCode]

_CONST_CODES = {rc.value: rc for rc in ReturnCode}

BUILTIN_LANGUAGES = ("const", "degree-min")


def _run_builtin(builtin: str, g: Graph, n: Term, definition: str) -> ReturnCode:
    if builtin == "const":
        return _CONST_CODES.get(definition.strip(), ReturnCode.ERROR)
    if builtin == "degree-min":
        try:
            k = int(definition.strip())
        except ValueError:
            return ReturnCode.ERROR
        return ReturnCode.TRUE if len(out_neigh(g, n)) >= k else ReturnCode.FALSE
    return ReturnCode.UNDEFINED


def builtin_oracle(registry: Mapping[str, object] | None = None) -> ExtensionOracle:
    """Oracle dispatching on the condition language.  The registry maps a
    language name to a builtin interpreter ("const" or "degree-min"), as a
    bare string or {"builtin": name}; unregistered languages come back
    UNDEFINED.  Builtins are total, so no timeout machinery is needed."""
    table: dict[str, str] = {lang: lang for lang in BUILTIN_LANGUAGES}
    for lang, entry in (registry or {}).items():
        builtin = entry.get("builtin") if isinstance(entry, Mapping) else entry
        if builtin not in BUILTIN_LANGUAGES:
            raise ValueError(f"unknown builtin {builtin!r} for language {lang!r}")
        table[lang] = str(builtin)

    def oracle(language: str, g: Graph, n: Term, definition: str) -> ReturnCode:
        builtin = table.get(language)
        if builtin is None:
            return ReturnCode.UNDEFINED
        return _run_builtin(builtin, g, n, definition)

    return oracle


# ----------------------------------------------------------------- certificates

@dataclass(frozen=True)
class OneOfRefutation:
    path: tuple[int, ...]
    reduced_schema: Schema
    typings_checked: int
    through_repeat: bool  # the eliminated branch sits under a repetition block

    def to_json(self) -> dict:
        text = format_schema(self.reduced_schema)
        return {
            "path": list(self.path),
            "reduced_schema": text,
            "reduced_schema_hash": hashlib.sha256(text.encode()).hexdigest()[:16],
            "typings_checked": self.typings_checked,
            "through_repeat": self.through_repeat,
        }


@dataclass(frozen=True)
class AssertionEvidence:
    node: Term
    label: str
    matching_neigh: frozenset[LabelledTriple]
    open_props: frozenset[LabelledTriple]
    rest_out: frozenset[LabelledTriple]
    rest_inc: frozenset[LabelledTriple]
    tree: ProofTree
    witness_map: tuple[tuple[LabelledTriple, DirectedTripleConstraint], ...]
    one_of_refutations: tuple[OneOfRefutation, ...]
    ext_results: tuple[tuple[str, str, ReturnCode], ...]

    def to_json(self) -> dict:
        return {
            "node": format_term(self.node),
            "label": self.label,
            "partition": {
                "matching": sorted(map(format_labelled, self.matching_neigh)),
                "open": sorted(map(format_labelled, self.open_props)),
                "rest_out": sorted(map(format_labelled, self.rest_out)),
                "rest_inc": sorted(map(format_labelled, self.rest_inc)),
            },
            "proof_tree": proof_to_json(self.tree),
            "proof_tree_id": proof_tree_id(self.tree),
            "witness": sorted(
                [format_labelled(lt), format_dtc(dtc)] for lt, dtc in self.witness_map
            ),
            "one_of_refutations": [r.to_json() for r in self.one_of_refutations],
            "ext_conditions": [
                {"language": lang, "definition": d, "return_code": rc.value}
                for lang, d, rc in self.ext_results
            ],
        }


@dataclass(frozen=True)
class NegationEvidence:
    node: Term
    label: str  # the asserted variant was found invalid

    def to_json(self) -> dict:
        return {"node": format_term(self.node), "label": self.label, "asserted_variant_valid": False}


@dataclass(frozen=True)
class Failure:
    node: Term | None
    label: str | None
    condition: str
    detail: str

    def to_json(self) -> dict:
        return {
            "node": None if self.node is None else format_term(self.node),
            "label": self.label,
            "condition": self.condition,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class ValidationOutcome:
    valid: bool
    assertions: tuple[AssertionEvidence, ...] = ()
    negations: tuple[NegationEvidence, ...] = ()
    failure: Failure | None = None

    def __bool__(self) -> bool:
        return self.valid

    def certificate(self, g: Graph, s: Schema, t: Typing) -> dict:
        return {
            "schema": format_schema(s),
            "graph": serialize_graph(g),
            "typing": typing_to_json(t),
            "valid": self.valid,
            "assertions": [a.to_json() for a in self.assertions],
            "negations": [n.to_json() for n in self.negations],
            "failure": None if self.failure is None else self.failure.to_json(),
        }


@dataclass
class ValidationStats:
    calls: int = 0
    recursive_calls: int = 0
    max_depth: int = 0
    memo_hits: int = 0


_IN_PROGRESS = object()


# -------------------------------------------------------------------- validator

class Validator:
    """Exhaustive validity checker for one (graph, schema, oracle, config).

    Memoizes outcomes on the canonical (schema, typing) pair: the negation
    recursion strictly removes Negate verdicts and the one-of recursion
    strictly removes alternation components, so the measure grounds out.
    """

    def __init__(
        self,
        g: Graph,
        s: Schema,
        oracle: ExtensionOracle | None = None,
        config: EngineConfig | None = None,
    ):
        self.graph = g
        self.schema = s
        self.oracle = oracle or builtin_oracle()
        self.config = config or EngineConfig()
        if not is_well_defined(s):
            raise NotWellDefined("validation requires a well-defined schema")
        _check_budgets(g, s, self.config)
        self.stats = ValidationStats()
        self._memo: dict[tuple[str, tuple], object] = {}

    # public entry points ----------------------------------------------------

    def is_valid_typing(self, t: Typing) -> ValidationOutcome:
        validate_typing_map(self.graph, self.schema, t)
        return self._check(self.schema, dict(t), 0)

    def valid_typings(self) -> Iterator[tuple[dict, ValidationOutcome]]:
        for t in enumerate_typings(self.graph, self.schema, self.config):
            outcome = self._check(self.schema, t, 0)
            if outcome.valid:
                yield t, outcome

    # internals ----------------------------------------------------------------

    def _check(self, s: Schema, t: dict, depth: int) -> ValidationOutcome:
        self.stats.calls += 1
        if depth:
            self.stats.recursive_calls += 1
        self.stats.max_depth = max(self.stats.max_depth, depth)
        key = (schema_key(s), typing_key(t))
        cached = self._memo.get(key)
        if cached is _IN_PROGRESS:
            raise AssertionError("validity recursion revisited an open subproblem")
        if cached is not None:
            self.stats.memo_hits += 1
            assert isinstance(cached, ValidationOutcome)
            return cached
        self._memo[key] = _IN_PROGRESS
        try:
            outcome = self._evaluate(s, t, depth)
        except BaseException:
            del self._memo[key]
            raise
        self._memo[key] = outcome
        return outcome

    def _evaluate(self, s: Schema, t: dict, depth: int) -> ValidationOutcome:
        negations: list[NegationEvidence] = []
        for n in sorted(t, key=term_key):
            for label in sorted(v.label for v in t[n] if isinstance(v, Negate)):
                variant = assert_shape(t, n, label)
                if self._check(s, variant, depth + 1).valid:
                    return ValidationOutcome(
                        valid=False,
                        failure=Failure(
                            n,
                            label,
                            "negated-shape",
                            "the variant typing asserting the negated shape is valid",
                        ),
                    )
                negations.append(NegationEvidence(n, label))
        assertions: list[AssertionEvidence] = []
        for n in sorted(t, key=term_key):
            for label in sorted(v.label for v in t[n] if isinstance(v, Assert)):
                result = self._check_assertion(s, t, n, label, depth)
                if isinstance(result, Failure):
                    return ValidationOutcome(valid=False, failure=result)
                assertions.append(result)
        return ValidationOutcome(True, tuple(assertions), tuple(negations))

    def _check_assertion(
        self, s: Schema, t: dict, n: Term, label: str, depth: int
    ) -> AssertionEvidence | Failure:
        g = self.graph
        ex = expr(label, s)
        xs = triple_constraints(ex)
        outs = out_neigh(g, n)
        incs = inc_neigh(g, n)

        matched: set[LabelledTriple] = set()
        for x in xs:
            matched |= matching(g, n, t, x)
        props = properties(ex)
        invprops = invproperties(ex)
        rest_out = {lt for lt in outs if lt.triple.predicate.value not in props}
        rest_inc = {lt for lt in incs if lt.triple.predicate.value not in invprops}
        rest = rest_out | rest_inc
        if matched & rest:
            return Failure(
                n, label, "partition",
                "matched triples overlap the rest block; no partition exists",
            )
        open_props = (outs | incs) - matched - rest

        definition = rule(label, s).definition
        if isinstance(definition, Close):
            if rest_out or open_props:
                extra = sorted(map(format_labelled, rest_out | open_props))
                return Failure(
                    n, label, "closed-shape",
                    f"closed shape leaves outgoing triples unmatched: {extra}",
                )
        else:
            tolerated = incl(label, s)
            for lt in sorted(open_props, key=format_labelled):
                if isinstance(lt, Inc):
                    return Failure(
                        n, label, "open-shape",
                        f"unmatched incoming triple {format_labelled(lt)} on a mentioned predicate",
                    )
                if lt.triple.predicate.value not in tolerated:
                    return Failure(
                        n, label, "open-shape",
                        f"unmatched triple {format_labelled(lt)} outside the inclusion set",
                    )

        found = self._find_proof(s, t, n, label, ex, xs, frozenset(matched), depth)
        if isinstance(found, Failure):
            return found
        tree, refutations = found

        ext_results: list[tuple[str, str, ReturnCode]] = []
        for cond in rule(label, s).ext_conds:
            rc = self.oracle(cond.language, g, n, cond.definition)
            if rc in (ReturnCode.FALSE, ReturnCode.ERROR):
                return Failure(
                    n, label, "extension",
                    f"condition in language {cond.language!r} returned {rc.value}",
                )
            ext_results.append((cond.language, cond.definition, rc))

        return AssertionEvidence(
            node=n,
            label=label,
            matching_neigh=frozenset(matched),
            open_props=frozenset(open_props),
            rest_out=frozenset(rest_out),
            rest_inc=frozenset(rest_inc),
            tree=tree,
            witness_map=tuple(sorted(witness(tree).items(), key=lambda kv: format_labelled(kv[0]))),
            one_of_refutations=tuple(refutations),
            ext_results=tuple(ext_results),
        )

    def _find_proof(self, s, t, n, label, ex, xs, matched, depth):
        """Condition 6: a proof over the matched triples whose witness and
        one-of clauses hold (every proof, under forall_proof_trees)."""
        chosen: tuple[ProofTree, list[OneOfRefutation]] | None = None
        any_tree = False
        last_reason = ""
        for tree in prove(matched, ex, self.config):
            any_tree = True
            verdict = self._tree_clauses(s, t, n, label, tree, xs, depth)
            if isinstance(verdict, str):
                if self.config.forall_proof_trees:
                    return Failure(n, label, "proof-witness", verdict)
                last_reason = verdict
                continue
            if chosen is None:
                chosen = (tree, verdict)
            if not self.config.forall_proof_trees:
                break
        if chosen is not None:
            return chosen
        if not any_tree:
            return Failure(
                n, label, "proof-witness",
                "no proof tree over the matched neighbourhood",
            )
        return Failure(n, label, "proof-witness", last_reason)

    def _tree_clauses(self, s, t, n, label, tree, xs, depth) -> list[OneOfRefutation] | str:
        """Witness clauses + one-of exclusivity for one candidate tree.
        Returns the refutation evidence, or a reason string on failure."""
        g = self.graph
        wm = witness(tree)
        for lt in sorted(wm, key=format_labelled):
            x = wm[lt]
            if lt not in matching(g, n, t, x):
                return (
                    f"witnessed triple {format_labelled(lt)} is not in the "
                    f"matching set of {format_dtc(x)}"
                )
            if isinstance(lt, Out) and is_shape_constraint(x.constraint):
                p = lt.triple.predicate.value
                for other in xs:
                    if (
                        isinstance(other.pred, Nop)
                        and other.pred.predicate == p
                        and isinstance(other.constraint, ValueConstraint)
                        and lt in matching(g, n, t, other)
                    ):
                        return (
                            f"shape-witnessed triple {format_labelled(lt)} is also "
                            f"claimed by the value constraint {format_dtc(other)}"
                        )
        refutations: list[OneOfRefutation] = []
        for path in sorted(one_of_applications(tree)):
            reduced = reduce_expr(tree, path, duplicate_left=self.config.reduce_duplicates_left)
            s_ri = replace_shape(s, label, reduced)
            through_repeat = any(
                isinstance(tree_at(tree, path[:i]), RRepeat) for i in range(len(path))
            )
            checked = 0
            for t1 in enumerate_typings(self.graph, s_ri, self.config):
                if Assert(label) not in t1[n]:
                    continue
                checked += 1
                if self._check(s_ri, t1, depth + 1).valid:
                    return (
                        f"one-of branch at path {list(path)} is not exclusive: the "
                        "reduced schema still admits a valid typing asserting "
                        f"{label} at {format_term(n)}"
                    )
            refutations.append(OneOfRefutation(tuple(path), s_ri, checked, through_repeat))
        return refutations


# ------------------------------------------------------------- module-level API

def is_valid_typing(
    g: Graph,
    s: Schema,
    t: Typing,
    oracle: ExtensionOracle | None = None,
    config: EngineConfig | None = None,
) -> ValidationOutcome:
    return Validator(g, s, oracle, config).is_valid_typing(t)


def valid_typings(
    g: Graph,
    s: Schema,
    oracle: ExtensionOracle | None = None,
    config: EngineConfig | None = None,
) -> Iterator[dict]:
    """Stream the valid typings (certificates via Validator.valid_typings)."""
    for t, _ in Validator(g, s, oracle, config).valid_typings():
        yield t


# ------------------------------------------------------- certificate rechecking

def recheck_certificate(
    g: Graph,
    s: Schema,
    t: Typing,
    outcome: ValidationOutcome,
    config: EngineConfig | None = None,
) -> list[str]:
    """Independently re-verify a valid outcome's evidence: the partition
    recomputes to the stated blocks, the proof tree passes check_proof over
    the matched triples, the witness clauses hold, and each one-of
    refutation names a real application path whose reduction rebuilds the
    recorded schema.  Returns problems (empty = certificate confirmed)."""
    config = config or EngineConfig()
    problems: list[str] = []
    if not outcome.valid:
        return ["certificate does not claim validity"]
    for ev in outcome.assertions:
        n, label = ev.node, ev.label
        where = f"{format_term(n)}:{label}"
        ex = expr(label, s)
        xs = triple_constraints(ex)
        matched: set[LabelledTriple] = set()
        for x in xs:
            matched |= matching(g, n, t, x)
        outs, incs = out_neigh(g, n), inc_neigh(g, n)
        props, invprops = properties(ex), invproperties(ex)
        rest_out = {lt for lt in outs if lt.triple.predicate.value not in props}
        rest_inc = {lt for lt in incs if lt.triple.predicate.value not in invprops}
        open_props = (outs | incs) - matched - rest_out - rest_inc
        if frozenset(matched) != ev.matching_neigh:
            problems.append(f"{where}: matched block does not recompute")
        if frozenset(open_props) != ev.open_props:
            problems.append(f"{where}: open block does not recompute")
        if frozenset(rest_out) != ev.rest_out or frozenset(rest_inc) != ev.rest_inc:
            problems.append(f"{where}: rest blocks do not recompute")
        for problem in check_proof(
            ev.tree, ex, ev.matching_neigh, strict_value_match=config.strict_value_match
        ):
            problems.append(f"{where}: proof tree: {problem}")
        wm = dict(ev.witness_map)
        if wm != witness(ev.tree):
            problems.append(f"{where}: witness does not recompute from the tree")
        for lt, x in wm.items():
            if lt not in matching(g, n, t, x):
                problems.append(
                    f"{where}: witnessed triple {format_labelled(lt)} fails its matching set"
                )
            if isinstance(lt, Out) and is_shape_constraint(x.constraint):
                p = lt.triple.predicate.value
                for other in xs:
                    if (
                        isinstance(other.pred, Nop)
                        and other.pred.predicate == p
                        and isinstance(other.constraint, ValueConstraint)
                        and lt in matching(g, n, t, other)
                    ):
                        problems.append(
                            f"{where}: value constraint {format_dtc(other)} also claims "
                            f"{format_labelled(lt)}"
                        )
        paths = one_of_applications(ev.tree)
        for ref in ev.one_of_refutations:
            if ref.path not in paths:
                problems.append(f"{where}: refutation path {list(ref.path)} is not a one-of application")
                continue
            rebuilt = replace_shape(
                s, label, reduce_expr(ev.tree, ref.path, duplicate_left=config.reduce_duplicates_left)
            )
            if rebuilt != ref.reduced_schema:
                problems.append(f"{where}: reduced schema at {list(ref.path)} does not recompute")
        if set(paths) != {ref.path for ref in ev.one_of_refutations}:
            problems.append(f"{where}: refutations do not cover every one-of application")
    return problems
