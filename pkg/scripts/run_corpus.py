#!/usr/bin/env python3
"""Drive the bundled fixture corpus end to end and print a summary table.

For every schema fixture: parse, analyze, and report well-formedness and
well-definedness plus diagnostic counts.  For every well-defined schema the
script then validates each graph fixture, counts candidate and valid
typings, and re-checks every emitted certificate.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from shapelang import (
    BudgetExceeded,
    EngineConfig,
    Validator,
    analyze_schema,
    enumerate_typings,
    is_well_defined,
    parse_graph,
    parse_schema,
    recheck_certificate,
)
from shapelang.semantics import typing_to_json

ROOT = Path(__file__).resolve().parent.parent


@dataclass
class CorpusConfig:
    fixtures: Path = ROOT / "fixtures"
    engine: EngineConfig = field(default_factory=EngineConfig)
    as_json: bool = False
    verbose: bool = False


def analyze_schemas(cfg: CorpusConfig) -> list[dict]:
    rows = []
    for path in sorted((cfg.fixtures / "schemas").glob("*.shape")):
        try:
            s = parse_schema(path.read_text())
        except Exception as exc:  # noqa: BLE001 - corpus rows must not abort the run
            rows.append({"schema": path.name, "parse_error": str(exc)})
            continue
        a = analyze_schema(s)
        rows.append(
            {
                "schema": path.name,
                "well_formed": a.well_formed,
                "well_defined": a.well_defined,
                "diagnostics": [f"{d.severity} {d.code}" for d in a.diagnostics],
            }
        )
    return rows


def validate_pairs(cfg: CorpusConfig) -> list[dict]:
    rows = []
    for spath in sorted((cfg.fixtures / "schemas").glob("*.shape")):
        try:
            s = parse_schema(spath.read_text())
        except Exception:  # noqa: BLE001
            continue
        if not is_well_defined(s):
            continue
        for gpath in sorted((cfg.fixtures / "graphs").glob("*.nt")):
            g = parse_graph(gpath.read_text())
            row = {"schema": spath.name, "graph": gpath.name}
            try:
                row["candidates"] = sum(1 for _ in enumerate_typings(g, s, cfg.engine))
                v = Validator(g, s, config=cfg.engine)
                results = list(v.valid_typings())
            except BudgetExceeded as exc:
                row["skipped"] = str(exc)
                rows.append(row)
                continue
            row["valid"] = len(results)
            problems = []
            for t, outcome in results:
                problems.extend(recheck_certificate(g, s, t, outcome, cfg.engine))
            row["certificate_problems"] = problems
            if cfg.verbose:
                row["typings"] = [typing_to_json(t) for t, _ in results]
            rows.append(row)
    return rows


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fixtures", type=Path, default=None, help="fixture corpus root")
    ap.add_argument("--json", action="store_true", help="emit one JSON document")
    ap.add_argument("--verbose", action="store_true", help="include typings per pair")
    args = ap.parse_args(argv)

    cfg = CorpusConfig(as_json=args.json, verbose=args.verbose)
    if args.fixtures is not None:
        cfg.fixtures = args.fixtures

    schema_rows = analyze_schemas(cfg)
    pair_rows = validate_pairs(cfg)

    if cfg.as_json:
        print(json.dumps({"schemas": schema_rows, "pairs": pair_rows}, indent=2, sort_keys=True))
        return 0

    print(f"{'schema':24} {'wf':3} {'wd':3} diagnostics")
    for row in schema_rows:
        if "parse_error" in row:
            print(f"{row['schema']:24} --  --  parse error: {row['parse_error']}")
            continue
        flags = f"{'y' if row['well_formed'] else 'n':3} {'y' if row['well_defined'] else 'n':3}"
        print(f"{row['schema']:24} {flags} {', '.join(row['diagnostics']) or '-'}")

    print()
    print(f"{'schema':24} {'graph':12} {'cand':>5} {'valid':>5} certificates")
    bad = 0
    for row in pair_rows:
        if "skipped" in row:
            print(f"{row['schema']:24} {row['graph']:12} {'-':>5} {'-':>5} skipped: {row['skipped']}")
            continue
        status = "ok" if not row["certificate_problems"] else f"{len(row['certificate_problems'])} problems"
        bad += len(row["certificate_problems"])
        print(f"{row['schema']:24} {row['graph']:12} {row['candidates']:>5} {row['valid']:>5} {status}")
        if cfg.verbose:
            for tj in row.get("typings", []):
                print(f"{'':24} {'':12} {json.dumps(tj, sort_keys=True)}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
