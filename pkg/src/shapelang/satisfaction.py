"""Neighbourhood satisfaction via proof trees.

A neighbourhood (finite set of direction-tagged triples around a focus
node) satisfies a shape expression when a proof tree exists: leaves consume
triples under a single triple constraint, alternation nodes pick a branch,
group/repetition nodes split the neighbourhood into disjoint (possibly
empty) blocks.  `prove` enumerates every tree up to the block-count bound,
deterministically and without duplicates; `satisfies` asks for the first.

Matching a triple against a triple constraint looks only at direction and
predicate.  A forward constraint never matches an incoming triple, an
inverse constraint never matches an outgoing one, and the constraint part
is deliberately ignored (value checks happen at typing level; the
strict_value_match config flag makes matching enforce value constraints
here as well, for comparison runs).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import product
from typing import Iterator

from .config import EngineConfig
from .errors import (
    IndexOutOfRange,
    InvalidChildIndex,
    InvalidPath,
    NotOneOf,
    NotOneOfAtPath,
    SearchBudgetExceeded,
    SingletonOneOf,
)
from .printer import format_expr
from .rdf import (
    Inc,
    LabelledTriple,
    Out,
    Term,
    format_labelled,
    labelled_key,
    literal_in_datatype,
    literal_in_facet,
    term_is_kind,
)
from .syntax import (
    Cardinality,
    DatatypeConstraint,
    DirectedTripleConstraint,
    EmptyShape,
    Group,
    Inv,
    KindConstraint,
    Nop,
    OneOf,
    Repetition,
    ShapeExpr,
    SomeOf,
    TripleConstraint,
    ValueConstraint,
    ValueSet,
    in_bounds,
)

Neigh = frozenset[LabelledTriple]
Path = tuple[int, ...]


def value_allowed(c: ValueConstraint, t: Term) -> bool:
    """Does the term satisfy a value constraint?"""
    if isinstance(c, ValueSet):
        return t in c.values
    if isinstance(c, DatatypeConstraint):
        if c.facet is None:
            return literal_in_datatype(c.datatype, t)
        return literal_in_facet(c.datatype, c.facet, t)
    assert isinstance(c, KindConstraint)
    return term_is_kind(t, c.kind)


def matches(lt: LabelledTriple, dtc: DirectedTripleConstraint, *, strict_value_match: bool = False) -> bool:
    """Direction and predicate agree (and, under the strict flag, value
    constraints hold for the object)."""
    if isinstance(lt, Out) and isinstance(dtc.pred, Nop):
        if lt.triple.predicate.value != dtc.pred.predicate:
            return False
        if strict_value_match and isinstance(dtc.constraint, ValueConstraint):
            return value_allowed(dtc.constraint, lt.triple.object)
        return True
    if isinstance(lt, Inc) and isinstance(dtc.pred, Inv):
        return lt.triple.predicate.value == dtc.pred.predicate
    return False


def nullable(e: ShapeExpr) -> bool:
    """Exactly: does the empty neighbourhood satisfy e?  Computed without
    search; used to bound repetition block counts."""
    if isinstance(e, EmptyShape):
        return True
    if isinstance(e, TripleConstraint):
        return in_bounds(0, e.card)
    if isinstance(e, (SomeOf, OneOf)):
        return any(nullable(x) for x in e.exprs)
    if isinstance(e, Group):
        return all(nullable(x) for x in e.exprs)
    assert isinstance(e, Repetition)
    nonempty_interval = e.card.max is None or e.card.max >= e.card.min
    return in_bounds(0, e.card) or (nullable(e.expr) and nonempty_interval)


# ------------------------------------------------------------------ proof trees

@dataclass(frozen=True)
class REmpty:
    neigh: Neigh


@dataclass(frozen=True)
class RTriple:
    neigh: Neigh
    dtc: DirectedTripleConstraint
    card: Cardinality


@dataclass(frozen=True)
class RInvTriple:
    neigh: Neigh
    dtc: DirectedTripleConstraint
    card: Cardinality


@dataclass(frozen=True)
class RSomeOf:
    neigh: Neigh
    exprs: tuple[ShapeExpr, ...]
    index: int  # 1-based chosen branch
    child: "ProofTree"


@dataclass(frozen=True)
class ROneOf:
    neigh: Neigh
    exprs: tuple[ShapeExpr, ...]
    index: int  # 1-based chosen branch
    child: "ProofTree"


@dataclass(frozen=True)
class RGroup:
    neigh: Neigh
    exprs: tuple[ShapeExpr, ...]
    parts: tuple[Neigh, ...]
    children: tuple["ProofTree", ...]


@dataclass(frozen=True)
class RRepeat:
    neigh: Neigh
    expr: ShapeExpr  # the repeated expression
    card: Cardinality
    parts: tuple[Neigh, ...]
    children: tuple["ProofTree", ...]


ProofTree = REmpty | RTriple | RInvTriple | RSomeOf | ROneOf | RGroup | RRepeat


def base_neigh(t: ProofTree) -> Neigh:
    return t.neigh


def base_expr(t: ProofTree) -> ShapeExpr:
    """The expression the tree proves."""
    if isinstance(t, REmpty):
        return EmptyShape()
    if isinstance(t, (RTriple, RInvTriple)):
        return TripleConstraint(t.dtc, t.card)
    if isinstance(t, RSomeOf):
        return SomeOf(t.exprs)
    if isinstance(t, ROneOf):
        return OneOf(t.exprs)
    if isinstance(t, RGroup):
        return Group(t.exprs)
    assert isinstance(t, RRepeat)
    return Repetition(t.expr, t.card)


# ------------------------------------------------------------------- search

class _Budget:
    __slots__ = ("left",)

    def __init__(self, nodes: int):
        self.left = nodes

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise SearchBudgetExceeded("proof search exceeded the node budget")


def _partitions(neigh: Neigh, k: int) -> Iterator[tuple[Neigh, ...]]:
    """All ways to spread the neighbourhood over k ordered, possibly empty
    blocks, in lexicographic order of the block-index assignment over the
    canonically sorted triples."""
    ts = sorted(neigh, key=labelled_key)
    if k == 0:
        if not ts:
            yield ()
        return
    for assignment in product(range(k), repeat=len(ts)):
        blocks: list[set[LabelledTriple]] = [set() for _ in range(k)]
        for lt, j in zip(ts, assignment):
            blocks[j].add(lt)
        yield tuple(frozenset(b) for b in blocks)


class _Searcher:
    def __init__(self, config: EngineConfig):
        self.config = config
        self.budget = _Budget(config.budget_nodes)

    def search(self, neigh: Neigh, e: ShapeExpr) -> Iterator[ProofTree]:
        self.budget.tick()
        if isinstance(e, EmptyShape):
            if not neigh:
                yield REmpty(neigh)
            return
        if isinstance(e, TripleConstraint):
            ok = all(
                matches(lt, e.dtc, strict_value_match=self.config.strict_value_match)
                for lt in neigh
            ) and in_bounds(len(neigh), e.card)
            if ok:
                cls = RInvTriple if isinstance(e.dtc.pred, Inv) else RTriple
                yield cls(neigh, e.dtc, e.card)
            return
        if isinstance(e, (SomeOf, OneOf)):
            cls = RSomeOf if isinstance(e, SomeOf) else ROneOf
            for i, sub in enumerate(e.exprs, start=1):
                for child in self.search(neigh, sub):
                    yield cls(neigh, e.exprs, i, child)
            return
        if isinstance(e, Group):
            for parts in _partitions(neigh, len(e.exprs)):
                for children in self._prove_blocks(parts, e.exprs):
                    yield RGroup(neigh, e.exprs, parts, children)
            return
        assert isinstance(e, Repetition)
        lo = e.card.min
        cap = max(len(neigh), lo) if nullable(e.expr) else len(neigh)
        hi = cap if e.card.max is None else min(e.card.max, cap)
        for k in range(lo, hi + 1):
            for parts in _partitions(neigh, k):
                for children in self._prove_blocks(parts, (e.expr,) * k):
                    yield RRepeat(neigh, e.expr, e.card, parts, children)

    def _prove_blocks(
        self, parts: tuple[Neigh, ...], exprs: tuple[ShapeExpr, ...]
    ) -> Iterator[tuple[ProofTree, ...]]:
        if not parts:
            yield ()
            return
        for head in self.search(parts[0], exprs[0]):
            for rest in self._prove_blocks(parts[1:], exprs[1:]):
                yield (head,) + rest


def prove(neigh: Neigh | set, e: ShapeExpr, config: EngineConfig | None = None) -> Iterator[ProofTree]:
    """Enumerate proof trees for (neigh, e): deterministic order, no
    duplicates, complete up to the repetition block-count bound."""
    return _Searcher(config or EngineConfig()).search(frozenset(neigh), e)


def satisfies(neigh: Neigh | set, e: ShapeExpr, config: EngineConfig | None = None) -> bool:
    """Does some proof tree exist?"""
    return next(prove(neigh, e, config), None) is not None


# ---------------------------------------------------------------- tree walking

def max_child(t: ProofTree) -> int:
    if isinstance(t, (REmpty, RTriple, RInvTriple)):
        return 0
    if isinstance(t, (RSomeOf, ROneOf)):
        return 1
    return len(t.children)


def child_at(t: ProofTree, i: int) -> ProofTree:
    if not 1 <= i <= max_child(t):
        raise InvalidChildIndex(f"child {i} of a node with {max_child(t)} children")
    if isinstance(t, (RSomeOf, ROneOf)):
        return t.child
    assert isinstance(t, (RGroup, RRepeat))
    return t.children[i - 1]


def rule_paths(t: ProofTree) -> set[Path]:
    """Root-to-leaf child-index paths (the literal equations: a tree with
    children contributes no empty path of its own)."""
    if max_child(t) == 0:
        return {()}
    out: set[Path] = set()
    for ci in range(1, max_child(t) + 1):
        for p in rule_paths(child_at(t, ci)):
            out.add((ci,) + p)
    return out


def node_paths(t: ProofTree) -> set[Path]:
    """Every node-addressing path: the prefix closure of rule_paths."""
    out: set[Path] = {()}
    for ci in range(1, max_child(t) + 1):
        for p in node_paths(child_at(t, ci)):
            out.add((ci,) + p)
    return out


def tree_at(t: ProofTree, path: Path) -> ProofTree:
    """Subtree at a path (valid along rule_paths and all their prefixes)."""
    node = t
    for depth, ci in enumerate(path):
        try:
            node = child_at(node, ci)
        except InvalidChildIndex:
            raise InvalidPath(f"no child {ci} at depth {depth} of {tuple(path)}")
    return node


def one_of_applications(t: ProofTree) -> set[Path]:
    """Paths of one-of applications eligible for branch elimination (more
    than one component)."""
    return {
        p
        for p in node_paths(t)
        if isinstance(tree_at(t, p), ROneOf) and len(tree_at(t, p).exprs) > 1
    }


def witness(t: ProofTree) -> dict[LabelledTriple, DirectedTripleConstraint]:
    """Map each leaf-consumed triple to the triple constraint that consumed
    it.  Blocks are disjoint, so the union over children is a function."""
    if isinstance(t, REmpty):
        return {}
    if isinstance(t, (RTriple, RInvTriple)):
        return {lt: t.dtc for lt in t.neigh}
    if isinstance(t, (RSomeOf, ROneOf)):
        return witness(t.child)
    out: dict[LabelledTriple, DirectedTripleConstraint] = {}
    for child in t.children:
        out.update(witness(child))
    return out


# ------------------------------------------------------- branch elimination

def elim_expr(e: ShapeExpr, i: int) -> OneOf:
    """Drop the i-th (1-based) component of a one-of with >1 components."""
    if not isinstance(e, OneOf):
        raise NotOneOf(f"cannot eliminate a branch of {type(e).__name__}")
    if len(e.exprs) == 1:
        raise SingletonOneOf("one-of with a single component")
    if not 1 <= i <= len(e.exprs):
        raise IndexOutOfRange(f"component {i} of {len(e.exprs)}")
    return OneOf(e.exprs[: i - 1] + e.exprs[i:])


def reduce_expr(t: ProofTree, path: Path, *, duplicate_left: bool = False) -> ShapeExpr:
    """Rebuild the proved expression with the one-of at `path` reduced by
    the branch this proof took.  Along the way each alternation keeps only
    the proof's own branch position spliced with the reduction; group
    blocks splice at the child index; a repetition reduces its single inner
    expression (so every block is assumed to drop the same branch).

    duplicate_left=True keeps a second copy of the left segment in place
    of the right one — a deliberately quirky variant kept behind a flag
    so the two rebuild disciplines can be compared.
    """
    if not path:
        node = t
        if not isinstance(node, ROneOf):
            raise NotOneOfAtPath(f"node at () is {type(node).__name__}")
        return elim_expr(OneOf(node.exprs), node.index)
    ci, tail = path[0], path[1:]

    def splice(exprs: tuple[ShapeExpr, ...], at: int, reduced: ShapeExpr) -> tuple[ShapeExpr, ...]:
        left, right = exprs[: at - 1], exprs[at:]
        return left + (reduced,) + (left if duplicate_left else right)

    if isinstance(t, (RSomeOf, ROneOf)):
        if ci != 1:
            raise InvalidPath(f"alternation nodes have a single child, got {ci}")
        reduced = reduce_expr(t.child, tail, duplicate_left=duplicate_left)
        rebuilt = splice(t.exprs, t.index, reduced)
        return SomeOf(rebuilt) if isinstance(t, RSomeOf) else OneOf(rebuilt)
    if isinstance(t, RGroup):
        if not 1 <= ci <= len(t.children):
            raise InvalidPath(f"no child {ci} of a {len(t.children)}-block group")
        reduced = reduce_expr(t.children[ci - 1], tail, duplicate_left=duplicate_left)
        return Group(splice(t.exprs, ci, reduced))
    if isinstance(t, RRepeat):
        if not 1 <= ci <= len(t.children):
            raise InvalidPath(f"no child {ci} of a {len(t.children)}-block repetition")
        reduced = reduce_expr(t.children[ci - 1], tail, duplicate_left=duplicate_left)
        return Repetition(reduced, t.card)
    raise InvalidPath(f"leaf reached with {tuple(path)} left")


# ----------------------------------------------------------------- validation

def check_proof(
    t: ProofTree,
    expected_expr: ShapeExpr | None = None,
    expected_neigh: Neigh | None = None,
    *,
    strict_value_match: bool = False,
) -> list[str]:
    """Re-verify every node invariant; returns human-readable violations
    (empty list = valid proof).  Independent of how the tree was produced."""
    problems: list[str] = []
    if expected_expr is not None and base_expr(t) != expected_expr:
        problems.append("root proves a different expression than expected")
    if expected_neigh is not None and base_neigh(t) != frozenset(expected_neigh):
        problems.append("root covers a different neighbourhood than expected")

    def walk(node: ProofTree, at: Path):
        where = f"at {at}" if at else "at root"
        if isinstance(node, REmpty):
            if node.neigh:
                problems.append(f"{where}: empty-shape node with a non-empty neighbourhood")
            return
        if isinstance(node, (RTriple, RInvTriple)):
            if isinstance(node, RTriple) and not isinstance(node.dtc.pred, Nop):
                problems.append(f"{where}: forward leaf with an inverse constraint")
            if isinstance(node, RInvTriple) and not isinstance(node.dtc.pred, Inv):
                problems.append(f"{where}: inverse leaf with a forward constraint")
            for lt in node.neigh:
                if not matches(lt, node.dtc, strict_value_match=strict_value_match):
                    problems.append(f"{where}: {format_labelled(lt)} does not match the leaf constraint")
            if not in_bounds(len(node.neigh), node.card):
                problems.append(f"{where}: {len(node.neigh)} triples outside {node.card}")
            return
        if isinstance(node, (RSomeOf, ROneOf)):
            if not 1 <= node.index <= len(node.exprs):
                problems.append(f"{where}: branch index {node.index} out of range")
                return
            if base_neigh(node.child) != node.neigh:
                problems.append(f"{where}: child covers a different neighbourhood")
            if base_expr(node.child) != node.exprs[node.index - 1]:
                problems.append(f"{where}: child proves a different component than branch {node.index}")
            walk(node.child, at + (1,))
            return
        assert isinstance(node, (RGroup, RRepeat))
        exprs = node.exprs if isinstance(node, RGroup) else (node.expr,) * len(node.children)
        if isinstance(node, RGroup) and len(node.parts) != len(node.exprs):
            problems.append(f"{where}: {len(node.parts)} blocks for {len(node.exprs)} components")
            return
        if isinstance(node, RRepeat) and not in_bounds(len(node.parts), node.card):
            problems.append(f"{where}: {len(node.parts)} blocks outside {node.card}")
        if len(node.parts) != len(node.children):
            problems.append(f"{where}: blocks and children differ in number")
            return
        union: set[LabelledTriple] = set()
        total = 0
        for part in node.parts:
            union |= part
            total += len(part)
        if total != len(union):
            problems.append(f"{where}: blocks are not pairwise disjoint")
        if union != set(node.neigh):
            problems.append(f"{where}: blocks do not cover the neighbourhood exactly")
        for j, (part, child) in enumerate(zip(node.parts, node.children), start=1):
            if base_neigh(child) != part:
                problems.append(f"{where}: child {j} covers a different block")
            if base_expr(child) != exprs[j - 1]:
                problems.append(f"{where}: child {j} proves a different component")
            walk(child, at + (j,))

    walk(t, ())
    return problems


# ------------------------------------------------------------------- JSON view

def proof_to_json(t: ProofTree) -> dict:
    """Stable JSON rendering: rule tag, covered triples (sorted), the
    pretty-printed sub-expression, and the variant payload."""
    out: dict = {
        "rule": {
            REmpty: "empty",
            RTriple: "triple_constraint",
            RInvTriple: "inv_triple_constraint",
            RSomeOf: "some_of",
            ROneOf: "one_of",
            RGroup: "group",
            RRepeat: "repeat",
        }[type(t)],
        "neigh": sorted(format_labelled(lt) for lt in t.neigh),
        "expr": format_expr(base_expr(t)),
    }
    if isinstance(t, (RSomeOf, ROneOf)):
        out["index"] = t.index
        out["children"] = [proof_to_json(t.child)]
    elif isinstance(t, (RGroup, RRepeat)):
        out["parts"] = [sorted(format_labelled(lt) for lt in part) for part in t.parts]
        out["children"] = [proof_to_json(c) for c in t.children]
    return out


def proof_tree_id(t: ProofTree) -> str:
    """Content hash of the canonical JSON form."""
    blob = json.dumps(proof_to_json(t), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]
