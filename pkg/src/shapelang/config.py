"""Engine configuration.

One frozen dataclass threaded through proof search and typing validation.
Defaults are desk-scale: the engine enumerates exhaustively, so the caps
exist to fail fast (with a budget error, never a wrong verdict) instead of
grinding on inputs it was not meant for.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

DEFAULT_BUDGET_NODES = 100_000
DEFAULT_MAX_GRAPH_NODES = 6
DEFAULT_MAX_SHAPES = 4

BUDGET_ENV_VAR = "SHAPELANG_BUDGET"


@dataclass(frozen=True)
class EngineConfig:
    # proof-search subgoal budget (SearchBudgetExceeded beyond it)
    budget_nodes: int = DEFAULT_BUDGET_NODES
    # typing enumeration caps (BudgetExceeded beyond them)
    max_graph_nodes: int = DEFAULT_MAX_GRAPH_NODES
    max_shapes: int = DEFAULT_MAX_SHAPES
    # stricter triple/constraint matching: value constraints must hold for
    # a triple to count as matched (default keeps matching by direction and
    # predicate alone)
    strict_value_match: bool = False
    # require every proof tree (not just one) to satisfy the witness and
    # one-of clauses of the validation conditions
    forall_proof_trees: bool = False
    # rebuild reduced alternations with the left component list duplicated,
    # reproducing the original equations' evident typo
    reduce_duplicates_left: bool = False

    def with_budget(self, budget: int | None) -> "EngineConfig":
        return self if budget is None else replace(self, budget_nodes=budget)


def config_from_env(base: EngineConfig | None = None) -> EngineConfig:
    """Apply the SHAPELANG_BUDGET override (proof-search budget)."""
    cfg = base or EngineConfig()
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is not None:
        try:
            cfg = cfg.with_budget(int(raw))
        except ValueError:
            raise ValueError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}")
    return cfg
