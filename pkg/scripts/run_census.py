#!/usr/bin/env python3
"""Run the exhaustive cross-validation census and write its artifacts.

For each requested family this enumerates every prime-power field with
q <= --max-q, brute-forces every candidate polynomial in the family,
evaluates all applicable criteria on it, and verifies the hard invariant
that no hypothesis-ok criterion ever disagrees with brute force.  Output
per family, under --out:

    census_<form>_q<max_q>.csv      one row per candidate (flat cells)
    census_<form>_q<max_q>.jsonl    the same records with full criterion
                                    results (params, witnesses, verdicts)
    summary_<form>_q<max_q>.json    counts, certification totals, and any
                                    instrumentation discrepancy records

Exit status is 0 when every family ran violation-free, 1 otherwise (the
violating records are printed to stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from permpoly import run_census, write_csv, write_jsonl
from permpoly.gf import ORDER_CAP


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    ap = argparse.ArgumentParser(description=__doc__.split("\n", 1)[0])
    ap.add_argument("--max-q", type=int, default=16,
                    help="largest field order to sweep (2..%d, default 16)"
                         % ORDER_CAP)
    ap.add_argument("--form", choices=["binomial", "cyclotomic", "both"],
                    default="both", help="which family to census (default both)")
    ap.add_argument("--a-sweep", choices=["all", "one"], default="all",
                    help="binomial constant term: every nonzero a, or a=1 only")
    ap.add_argument("--threads", type=int, default=1,
                    help="fields are partitioned across this many threads")
    ap.add_argument("--out", type=Path, default=Path("results"),
                    help="output directory (default ./results)")
    return ap.parse_args(argv)


def census_one_form(form: str, args: argparse.Namespace) -> int:
    started = time.perf_counter()
    result = run_census(args.max_q, form=form, a_sweep=args.a_sweep,
                        threads=args.threads)
    elapsed = time.perf_counter() - started

    stem = f"census_{form}_q{args.max_q}"
    csv_path = args.out / f"{stem}.csv"
    jsonl_path = args.out / f"{stem}.jsonl"
    summary_path = args.out / f"summary_{form}_q{args.max_q}.json"
    with csv_path.open("w", encoding="utf-8") as fh:
        write_csv(result.rows, fh)
    with jsonl_path.open("w", encoding="utf-8") as fh:
        write_jsonl(result.rows, fh)
    summary = dict(result.summary)
    summary["elapsed_seconds"] = round(elapsed, 3)
    summary["discrepancy_records"] = result.discrepancies.records()
    with summary_path.open("w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")

    s = result.summary
    print(f"[{form}] q <= {args.max_q}: {s['fields']} fields, "
          f"{s['records']} records, {s['permutations']} permutations, "
          f"{elapsed:.1f}s")
    print(f"[{form}] certified: " + ", ".join(
        f"{name}={count}" for name, count in s["certified"].items()))
    if s["discrepancies"]:
        print(f"[{form}] instrumentation discrepancies: {s['discrepancies']}")
    print(f"[{form}] wrote {csv_path}, {jsonl_path}, {summary_path}")

    if result.violations:
        print(f"[{form}] INVARIANT VIOLATIONS: {len(result.violations)}",
              file=sys.stderr)
        for rec in result.violations[:20]:
            print(f"[{form}] violation: {rec}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    forms = ["binomial", "cyclotomic"] if args.form == "both" else [args.form]
    status = 0
    for form in forms:
        status |= census_one_form(form, args)
    return status


if __name__ == "__main__":
    sys.exit(main())
