"""Command-line front end: parse, analyze, satisfies, validate.

JSON is the machine interface (byte-identical given fixed inputs and
flags); the human-readable text is derived from the same data.  Exit codes
are a total function of the verdicts:

    0  success / well-defined / satisfied / some valid typing
    1  input error (syntax, unknown label or node, bad oracle config)
    2  schema is well-formed but not well-defined   (analyze)
    3  schema is not well-formed                    (analyze)
    4  unsatisfied / no valid typing
    5  a search budget or enumeration cap was exceeded
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .analysis import analyze_schema, dot_digraph, expr
from .config import BUDGET_ENV_VAR, EngineConfig, config_from_env
from .errors import BudgetExceeded, SearchBudgetExceeded, ShapeLangError
from .parser import parse_schema
from .printer import format_schema
from .rdf import (
    Graph,
    format_term,
    neighbourhood,
    nodes,
    parse_graph,
    parse_term,
    serialize_graph,
)
from .satisfaction import proof_to_json, proof_tree_id, prove
from .semantics import Validator, builtin_oracle, typing_to_json
from .syntax import Assert, Negate, Schema, format_verdict, schema_to_json

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_WELL_DEFINED = 2
EXIT_NOT_WELL_FORMED = 3
EXIT_UNSATISFIED = 4
EXIT_BUDGET = 5


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _load_schema(path: str, allow_empty_card: bool) -> Schema:
    return parse_schema(Path(path).read_text(), allow_empty_card=allow_empty_card)


def _load_graph(path: str) -> Graph:
    return parse_graph(Path(path).read_text())


def _engine_config(args: argparse.Namespace) -> EngineConfig:
    cfg = config_from_env()
    cfg = cfg.with_budget(getattr(args, "budget_nodes", None))
    return dataclasses.replace(
        cfg,
        strict_value_match=getattr(args, "strict_value_match", False),
        forall_proof_trees=getattr(args, "forall_proof_trees", False),
        reduce_duplicates_left=getattr(args, "reduce_duplicates_left", False),
    )


# ------------------------------------------------------------------- commands

def cmd_parse(args: argparse.Namespace) -> int:
    if not args.schema and not args.graph:
        return _fail("parse needs --schema and/or --graph")
    payload: dict = {}
    text_parts: list[str] = []
    if args.schema:
        s = _load_schema(args.schema, args.allow_empty_card)
        payload["schema"] = schema_to_json(s)
        payload["schema_text"] = format_schema(s)
        text_parts.append(format_schema(s).rstrip("\n"))
    if args.graph:
        g = _load_graph(args.graph)
        payload["graph"] = serialize_graph(g).splitlines()
        text_parts.append(serialize_graph(g).rstrip("\n"))
    if args.json:
        _emit_json(payload)
    else:
        print("\n".join(part for part in text_parts if part or len(text_parts) == 1))
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    s = _load_schema(args.schema, args.allow_empty_card)
    analysis = analyze_schema(s)
    if args.dot is not None:
        dot = dot_digraph(analysis.dep) if analysis.dep is not None else "digraph deps {\n}\n"
        if args.dot == "-":
            sys.stdout.write(dot)
        else:
            Path(args.dot).write_text(dot)
    if args.json:
        _emit_json(analysis.to_json())
    else:
        print(f"well-formed: {'yes' if analysis.well_formed else 'no'}")
        print(f"well-defined: {'yes' if analysis.well_defined else 'no'}")
        for d in analysis.diagnostics:
            print(f"{d.severity.upper()} {d.code}: {d.message}")
    if not analysis.well_formed:
        return EXIT_NOT_WELL_FORMED
    if not analysis.well_defined:
        return EXIT_NOT_WELL_DEFINED
    return EXIT_OK


def cmd_satisfies(args: argparse.Namespace) -> int:
    s = _load_schema(args.schema, args.allow_empty_card)
    g = _load_graph(args.graph)
    focus = parse_term(args.focus)
    if focus not in nodes(g):
        return _fail(f"focus {format_term(focus)} does not occur in the graph")
    config = _engine_config(args)
    e = expr(args.label, s)
    neigh = neighbourhood(g, focus)
    try:
        first = next(prove(neigh, e, config), None)
    except SearchBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if first is None:
        if args.json:
            _emit_json({"satisfies": False})
        else:
            print("unsatisfied")
        return EXIT_UNSATISFIED
    if args.json:
        _emit_json(
            {
                "satisfies": True,
                "proof": proof_to_json(first),
                "proof_tree_id": proof_tree_id(first),
            }
        )
    else:
        print(f"satisfied (proof {proof_tree_id(first)})")
    return EXIT_OK


def _verdict_at(t: dict, focus, label: str) -> str:
    if Assert(label) in t[focus]:
        return format_verdict(Assert(label))
    if Negate(label) in t[focus]:
        return format_verdict(Negate(label))
    return "absent"


def cmd_validate(args: argparse.Namespace) -> int:
    s = _load_schema(args.schema, args.allow_empty_card)
    g = _load_graph(args.graph)
    config = _engine_config(args)
    oracle = None
    if args.oracle_config:
        try:
            registry = json.loads(Path(args.oracle_config).read_text())
            oracle = builtin_oracle(registry)
        except (ValueError, OSError) as exc:
            return _fail(f"oracle config: {exc}")
    focus = parse_term(args.focus) if args.focus else None
    if focus is not None and focus not in nodes(g):
        return _fail(f"focus {format_term(focus)} does not occur in the graph")
    try:
        validator = Validator(g, s, oracle, config)
        results = list(validator.valid_typings())
    except (BudgetExceeded, SearchBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET

    payload: dict = {
        "schema": format_schema(s),
        "graph": serialize_graph(g),
        "count": len(results),
        "typings": [
            {"typing": typing_to_json(t), "certificate": outcome.certificate(g, s, t)}
            for t, outcome in results
        ],
        "stats": {
            "calls": validator.stats.calls,
            "recursive_calls": validator.stats.recursive_calls,
            "max_depth": validator.stats.max_depth,
        },
    }
    if focus is not None and args.label:
        payload["focus_report"] = {
            "focus": format_term(focus),
            "label": args.label,
            "verdicts": [_verdict_at(t, focus, args.label) for t, _ in results],
        }
    if args.json:
        _emit_json(payload)
    else:
        print(f"valid typings: {len(results)}")
        for i, (t, _) in enumerate(results):
            cells = [
                f"{node}: {' '.join(verdicts) if verdicts else '-'}"
                for node, verdicts in typing_to_json(t).items()
            ]
            print(f"  [{i}] " + "; ".join(cells))
        if focus is not None and args.label:
            verdicts = payload["focus_report"]["verdicts"]
            print(f"verdicts for {args.label} at {format_term(focus)}: {' '.join(verdicts) or '-'}")
    return EXIT_OK if results else EXIT_UNSATISFIED


# ------------------------------------------------------------------ arg parsing

def _add_schema_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--schema", required=required, help="schema file")
    p.add_argument(
        "--allow-empty-card",
        action="store_true",
        help="admit unsatisfiable cardinality intervals like [2;1]",
    )


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--budget-nodes",
        type=int,
        default=None,
        metavar="N",
        help=f"proof-search node budget (default from ${BUDGET_ENV_VAR} or built-in)",
    )
    p.add_argument(
        "--strict-value-match",
        action="store_true",
        help="triple-constraint matching also tests value constraints",
    )
    p.add_argument(
        "--forall-proof-trees",
        action="store_true",
        help="require the witness clauses on every proof tree, not just one",
    )
    p.add_argument(
        "--reduce-duplicates-left",
        action="store_true",
        help="rebuild eliminated one-of contexts with the left segment duplicated",
    )


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="shapelang",
        description="Shape-expression schema engine: parse, analyze, satisfies, validate.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p_parse = sub.add_parser("parse", help="parse and canonically reprint a schema/graph")
    _add_schema_flags(p_parse, required=False)
    p_parse.add_argument("--graph", help="graph file (line-oriented triples)")
    p_parse.add_argument("--json", action="store_true")
    p_parse.set_defaults(func=cmd_parse)

    p_an = sub.add_parser("analyze", help="static analysis: defs/refs, dependency graph, diagnostics")
    _add_schema_flags(p_an)
    p_an.add_argument("--json", action="store_true")
    p_an.add_argument("--dot", metavar="FILE", help="write the dependency graph as DOT ('-' = stdout)")
    p_an.set_defaults(func=cmd_analyze)

    p_sat = sub.add_parser("satisfies", help="prove a focus node's neighbourhood against a shape")
    _add_schema_flags(p_sat)
    p_sat.add_argument("--graph", required=True)
    p_sat.add_argument("--focus", required=True, help="focus term, e.g. '<a>' or '_:b'")
    p_sat.add_argument("--label", required=True, help="shape label")
    p_sat.add_argument("--json", action="store_true")
    _add_engine_flags(p_sat)
    p_sat.set_defaults(func=cmd_satisfies)

    p_val = sub.add_parser("validate", help="enumerate valid typings with certificates")
    _add_schema_flags(p_val)
    p_val.add_argument("--graph", required=True)
    p_val.add_argument("--focus", help="report the verdicts at this term (with --label)")
    p_val.add_argument("--label", help="shape label for the focus report")
    p_val.add_argument("--json", action="store_true")
    p_val.add_argument("--oracle-config", metavar="FILE", help="JSON mapping language -> builtin")
    _add_engine_flags(p_val)
    p_val.set_defaults(func=cmd_validate)

    return top


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ShapeLangError as exc:
        return _fail(str(exc))
    except OSError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
