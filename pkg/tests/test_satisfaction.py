"""Proof search over neighbourhoods.

The load-bearing property here is three-way agreement: the boolean
`satisfies`, the existence of a proof tree from `prove`, and the
brute-force evaluator in oracles.py (direct recursion over subset
enumeration, no trees) must say the same thing on every generated input.
"""

import pytest
from hypothesis import given, settings

from shapelang.config import EngineConfig
from shapelang.errors import (
    IndexOutOfRange,
    InvalidChildIndex,
    InvalidPath,
    NotOneOf,
    NotOneOfAtPath,
    SearchBudgetExceeded,
    SingletonOneOf,
)
from shapelang.parser import parse_expr
from shapelang.printer import format_expr
from shapelang.rdf import Inc, Iri, Literal, Out, Triple, triple
from shapelang.satisfaction import (
    ROneOf,
    RRepeat,
    RTriple,
    base_expr,
    base_neigh,
    check_proof,
    child_at,
    elim_expr,
    matches,
    node_paths,
    nullable,
    one_of_applications,
    proof_to_json,
    proof_tree_id,
    prove,
    reduce_expr,
    rule_paths,
    satisfies,
    tree_at,
    witness,
)
from shapelang.syntax import Inv, Nop

import strategies
from oracles import brute_satisfies

CFG = EngineConfig()
FOCUS = strategies.FOCUS


def out(pred, obj=Iri("b")):
    return Out(triple(FOCUS, pred, obj))


def inc(pred, subj=Iri("c")):
    return Inc(triple(subj, pred, FOCUS))


def dtc_of(text):
    return parse_expr(text).dtc


# --- matches ---------------------------------------------------------------------

def test_matches_direction_and_predicate():
    fwd = dtc_of("p::iri")
    assert matches(out("p"), fwd)
    assert not matches(out("q"), fwd)
    assert not matches(inc("p"), fwd)
    rev = dtc_of("^p::(T)")
    assert matches(inc("p"), rev)
    assert not matches(out("p"), rev)


def test_matches_ignores_values_by_default():
    # the object is a literal, the constraint wants an IRI: still a match
    assert matches(out("p", Literal("x")), dtc_of("p::iri"))


def test_matches_strict_mode_consults_value_constraints():
    lt = out("p", Literal("x"))
    assert not matches(lt, dtc_of("p::iri"), strict_value_match=True)
    assert matches(lt, dtc_of("p::literal"), strict_value_match=True)
    # shape constraints are out of scope even in strict mode
    assert matches(lt, dtc_of("p::(T)"), strict_value_match=True)


# --- nullable ---------------------------------------------------------------------

@pytest.mark.parametrize("text,expected", [
    ("empty", True),
    ("a::iri", False),
    ("a::iri [0;2]", True),
    ("!a::iri", True),
    ("a::iri | b::iri [0;1]", True),
    ("a::iri , b::iri [0;1]", False),
    ("(a::iri) [0;*]", True),
    ("(a::iri) [2;3]", False),
])
def test_nullable_table(text, expected):
    assert nullable(parse_expr(text)) is expected


@settings(max_examples=300)
@given(strategies.shape_exprs())
def test_nullable_is_exact(e):
    assert nullable(e) is brute_satisfies(frozenset(), e)


# --- the agreement property --------------------------------------------------------

@settings(max_examples=400)
@given(strategies.neighbourhoods(), strategies.shape_exprs())
def test_three_way_agreement(neigh, e):
    trees = list(prove(neigh, e, CFG))
    assert satisfies(neigh, e, CFG) is bool(trees)
    assert bool(trees) is brute_satisfies(neigh, e)


@settings(max_examples=200)
@given(strategies.neighbourhoods(), strategies.shape_exprs())
def test_proofs_are_distinct_checkable_and_rooted(neigh, e):
    trees = list(prove(neigh, e, CFG))
    assert len({proof_tree_id(t) for t in trees}) == len(trees)
    for t in trees:
        assert base_neigh(t) == neigh
        assert base_expr(t) == e
        assert check_proof(t, e, neigh) == []


@settings(max_examples=100)
@given(strategies.neighbourhoods(), strategies.shape_exprs())
def test_prove_is_deterministic(neigh, e):
    first = [proof_to_json(t) for t in prove(neigh, e, CFG)]
    second = [proof_to_json(t) for t in prove(neigh, e, CFG)]
    assert first == second


@settings(max_examples=200)
@given(strategies.neighbourhoods(), strategies.shape_exprs())
def test_witness_maps_leaf_triples_to_their_constraints(neigh, e):
    for t in prove(neigh, e, CFG):
        wm = witness(t)
        consumed = set()
        for path in rule_paths(t):
            leaf = tree_at(t, path)
            consumed |= set(leaf.neigh)
        assert set(wm) == consumed
        for lt, dtc in wm.items():
            assert matches(lt, dtc)
            assert isinstance(dtc.pred, Nop if isinstance(lt, Out) else Inv)


# --- worked proofs ------------------------------------------------------------------

def test_empty_repetition_proof_has_no_blocks():
    e = parse_expr("(a::iri) [0;0]")
    trees = list(prove(frozenset(), e, CFG))
    assert len(trees) == 1
    assert isinstance(trees[0], RRepeat) and trees[0].parts == ()


def test_twin_branches_give_two_proofs():
    neigh = frozenset({out("a")})
    e = parse_expr("a::iri | a::iri")
    assert len(list(prove(neigh, e, CFG))) == 2


def test_unbounded_repetition_splits_blocks():
    neigh = frozenset({out("a"), out("a", Iri("c"))})
    e = parse_expr("(a::iri) [0;*]")
    trees = list(prove(neigh, e, CFG))
    assert len(trees) == 2  # the two orders of the two singleton blocks
    assert all(len(t.parts) == 2 for t in trees)


def test_group_must_cover_everything():
    neigh = frozenset({out("a"), out("b"), out("c")})
    e = parse_expr("a::iri , b::iri")
    assert not satisfies(neigh, e, CFG)  # the c-triple is left over


def test_negated_constraint_forbids_matches():
    e = parse_expr("!a::iri")
    assert satisfies(frozenset(), e, CFG)
    assert not satisfies(frozenset({out("a")}), e, CFG)
    assert not satisfies(frozenset({out("b")}), e, CFG)  # wrong predicate, still unmatched


# --- paths, children, reductions ----------------------------------------------------

def proof_of(neigh, text):
    trees = list(prove(neigh, parse_expr(text), CFG))
    assert trees, "fixture should be satisfiable"
    return trees[0]


def test_node_paths_are_prefix_closed():
    t = proof_of(frozenset({out("a")}), "(a::iri | b::iri) , empty")
    paths = node_paths(t)
    assert () in paths
    for p in paths:
        assert p[:-1] in paths or p == ()
    assert rule_paths(t) <= paths


def test_child_bounds():
    t = proof_of(frozenset({out("a")}), "a::iri | b::iri")
    child_at(t, 1)
    with pytest.raises(InvalidChildIndex):
        child_at(t, 2)
    with pytest.raises(InvalidPath):
        tree_at(t, (1, 1))


def test_one_of_applications_ignores_someof_and_singletons():
    t = proof_of(frozenset({out("a")}), "a::iri | b::iri")
    assert one_of_applications(t) == set()
    t2 = proof_of(frozenset({out("a")}), "a::iri @ b::iri")
    assert one_of_applications(t2) == {()}


def test_elim_expr():
    e = parse_expr("a::iri @ b::iri @ c::iri")
    assert format_expr(elim_expr(e, 2)) == "a::iri @ c::iri"
    with pytest.raises(NotOneOf):
        elim_expr(parse_expr("a::iri | b::iri"), 1)
    with pytest.raises(SingletonOneOf):
        elim_expr(elim_expr(elim_expr(e, 1), 1), 1)
    with pytest.raises(IndexOutOfRange):
        elim_expr(e, 4)


def test_reduce_at_root_drops_the_used_branch():
    t = proof_of(frozenset({out("a")}), "a::iri @ b::iri")
    assert format_expr(reduce_expr(t, ())) == "b::iri"


def test_reduce_inside_group():
    neigh = frozenset({out("a"), out("b")})
    t = proof_of(neigh, "(a::iri @ c::iri) , b::iri")
    assert isinstance(tree_at(t, (1,)), ROneOf)
    reduced = reduce_expr(t, (1,))
    assert format_expr(reduced) == "c::iri , b::iri"


def test_reduce_through_repetition():
    neigh = frozenset({out("a")})
    t = proof_of(neigh, "(a::iri @ b::iri) [1;1]")
    [path] = one_of_applications(t)
    assert any(isinstance(tree_at(t, path[:i]), RRepeat) for i in range(len(path)))
    reduced = reduce_expr(t, path)
    assert format_expr(reduced) == "(b::iri) [1;1]"


def test_reduce_requires_a_one_of_node():
    t = proof_of(frozenset({out("a")}), "a::iri | b::iri")
    with pytest.raises(NotOneOfAtPath):
        reduce_expr(t, ())


def test_duplicate_left_reduce_keeps_two_left_copies():
    neigh = frozenset({out("a"), out("b")})
    t = proof_of(neigh, "a::iri , (b::iri @ c::iri)")
    corrected = reduce_expr(t, (2,))
    literal = reduce_expr(t, (2,), duplicate_left=True)
    assert format_expr(corrected) == "a::iri , c::iri"
    assert format_expr(literal) == "a::iri , c::iri , a::iri"


# --- check_proof as an adversarial checker ------------------------------------------

def test_check_proof_flags_wrong_neighbourhood():
    t = proof_of(frozenset({out("a")}), "a::iri")
    assert check_proof(t, parse_expr("a::iri"), frozenset()) != []


def test_check_proof_flags_wrong_expression():
    t = proof_of(frozenset({out("a")}), "a::iri")
    assert check_proof(t, parse_expr("b::iri"), frozenset({out("a")})) != []


def test_check_proof_flags_tampered_cardinality():
    neigh = frozenset({out("a")})
    t = proof_of(neigh, "a::iri")
    assert isinstance(t, RTriple)
    bad = RTriple(t.neigh, t.dtc, parse_expr("a::iri [2;3]").card)
    assert check_proof(bad, parse_expr("a::iri [2;3]"), neigh) != []


# --- budget ------------------------------------------------------------------------

def test_budget_exhaustion_raises():
    neigh = frozenset({out("a", Iri(f"o{i}")) for i in range(4)})
    e = parse_expr("(a::iri) [0;*] , (a::iri) [0;*]")
    with pytest.raises(SearchBudgetExceeded):
        list(prove(neigh, e, EngineConfig(budget_nodes=5)))


def test_first_proof_comes_lazily():
    # plenty of proofs exist; asking for one must not exhaust the budget
    neigh = frozenset({out("a", Iri(f"o{i}")) for i in range(4)})
    e = parse_expr("(a::iri) [0;*]")
    first = next(prove(neigh, e, EngineConfig(budget_nodes=200)))
    assert check_proof(first, e, neigh) == []
