#!/usr/bin/env python3
"""
Run All Script - Reproduce every table and run every verification suite

This script:
1. Recomputes printed tables 1-5
2. Runs the theorem, lemma, oracle and counterexample suites
3. Writes one JSON or CSV report per step to the output directory
4. Prints a summary and exits 1 if anything failed

Usage:
    python run_all.py
    python run_all.py --output reports --format csv --jobs 4
"""

import argparse
import logging
import sys
import time
from pathlib import Path

from dotenv import load_dotenv

from shared.utils import ColoredOutput, format_duration, print_header, print_section
from subshift_escape.config import configure_logging
from subshift_escape.errors import EscapeRateError
from subshift_escape.experiments.executor import SuiteRequest, execute_many
from subshift_escape.experiments.reports import (
    TABLE_CSV_FIELDS,
    Status,
    VerificationReport,
    to_csv_text,
    to_json_text,
)
from subshift_escape.experiments.tables import TABLE_IDS, reproduce_table

logger = logging.getLogger("run_all")

DEFAULT_SEED = 20240601


def acceptance_requests(seed: int, quick: bool = False) -> list[SuiteRequest]:
    """
    Suite runs with the parameters of the acceptance run.

    quick shrinks sample counts and drops the largest sampled min-period runs.
    """
    scale = 10 if quick else 1
    requests = [
        SuiteRequest("p2", {"q_min": 3, "q_max": 10}),
        SuiteRequest("min-period", {"p": 3, "q": 5, "mode": "exhaustive"}),
    ]
    for p in (4, 5):
        for q in (5, 6, 7, 8)[: 1 if quick else 4]:
            requests.append(SuiteRequest("min-period", {
                "p": p, "q": q, "mode": "sampled", "samples": 500 // scale, "seed": seed,
            }))
    requests += [
        SuiteRequest("counterexamples", {"seed": seed}),
        SuiteRequest("lemma2", {"samples": 200 // scale, "seed": seed}),
        SuiteRequest("lemma1", {"samples": 200 // scale, "seed": seed}),
        SuiteRequest("oracles", {"samples": 200 // scale, "seed": seed}),
        SuiteRequest("extremal", {"p": 3, "q": 4}),
        SuiteRequest("extremal", {"p": 3, "q": 5}),
        SuiteRequest("r-order", {"p": 3, "t": 2, "q": 30, "samples": 200 // scale, "seed": seed}),
        SuiteRequest("gen-r-order", {"t": 3, "p": 3, "samples": 50 // scale, "seed": seed}),
        SuiteRequest("gen-period", {"t": 3, "p": 3, "samples": 100 // scale, "seed": seed}),
        SuiteRequest("subshift-r-order", {"base": "aa", "samples": 100 // scale, "seed": seed}),
    ]
    return requests


def run_tables(output: Path | None, output_format: str, jobs: int) -> int:
    """Reproduce every table; returns the number of FAIL rows."""
    failures = 0
    for table_id in TABLE_IDS:
        start = time.perf_counter()
        rows = reproduce_table(table_id, jobs=jobs)
        elapsed = time.perf_counter() - start
        counts = {status: sum(1 for r in rows if r.status is status) for status in Status}
        failed = counts[Status.FAIL]
        failures += failed
        summary = ", ".join(f"{counts[s]} {s.value}" for s in Status if counts[s])
        line = f"Table {table_id}: {summary} ({format_duration(elapsed)})"
        print(ColoredOutput.error(line) if failed else ColoredOutput.success(line))
        for row in rows:
            if row.status in (Status.FAIL, Status.ERRATUM):
                print(f"    {row.column} q={row.q}: expected={row.expected} computed={row.computed} {row.note}")
        if output is not None:
            payload = [r.to_json() for r in rows]
            target = output / f"table_{table_id}.{output_format}"
            if output_format == "json":
                target.write_text(to_json_text(payload) + "\n", encoding="utf-8")
            else:
                target.write_text(to_csv_text(payload, TABLE_CSV_FIELDS), encoding="utf-8")
    return failures


def run_suites(requests: list[SuiteRequest], output: Path | None, output_format: str, jobs: int) -> int:
    """Run suite requests; returns the number of failing reports."""
    reports: list[VerificationReport] = execute_many(requests, jobs)
    failed = 0
    for index, (request, report) in enumerate(zip(requests, reports)):
        line = (
            f"{report.theorem} {request.params}: {report.instances_tested} instances "
            f"({format_duration(report.wall_time)})"
        )
        if report.passed:
            print(ColoredOutput.success(line))
        else:
            failed += 1
            print(ColoredOutput.error(f"{line}, {len(report.failures)} failures"))
            for failure in report.failures[:5]:
                print(f"    {failure.kind}: {failure.reason}")
        if output is not None:
            target = output / f"suite_{index:02d}_{report.theorem}.{output_format}"
            if output_format == "json":
                target.write_text(to_json_text(report.to_json()) + "\n", encoding="utf-8")
            else:
                target.write_text(to_csv_text(report.csv_rows()), encoding="utf-8")
    return failed


def main():
    """Main entry point."""
    load_dotenv()

    parser = argparse.ArgumentParser(
        description="Reproduce the escape-rate tables and run every verification suite",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python run_all.py
  python run_all.py --output reports
  python run_all.py --output reports --format csv --jobs 4
  python run_all.py --quick --seed 7

This script will:
  1. Recompute tables 1-5
  2. Run the verification suites
  3. Write reports (with --output)
  4. Exit 1 if any table row or suite failed
        """
    )

    parser.add_argument(
        "--output",
        "-o",
        type=Path,
        metavar="DIR",
        help="Directory for per-step reports"
    )

    parser.add_argument(
        "--format",
        "-f",
        choices=["json", "csv"],
        default="json",
        help="Report format (default: json)"
    )

    parser.add_argument(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        help=f"Seed for every sampled suite (default: {DEFAULT_SEED})"
    )

    parser.add_argument(
        "--jobs",
        "-j",
        type=int,
        default=1,
        help="Worker processes (default: 1)"
    )

    parser.add_argument(
        "--quick",
        action="store_true",
        help="Smaller samples for a fast smoke run"
    )

    parser.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="Enable debug logging"
    )

    args = parser.parse_args()
    configure_logging(debug=args.verbose)

    print_header("SUBSHIFT ESCAPE RATES - RUN ALL")
    print(f"Seed: {args.seed}")
    print(f"Jobs: {args.jobs}")
    if args.output:
        args.output.mkdir(parents=True, exist_ok=True)
        print(f"Reports: {args.output} ({args.format})")

    start = time.perf_counter()
    try:
        print_section("STEP 1: Tables")
        table_failures = run_tables(args.output, args.format, args.jobs)

        print_section("STEP 2: Verification suites")
        suite_failures = run_suites(acceptance_requests(args.seed, args.quick), args.output, args.format, args.jobs)

    except KeyboardInterrupt:
        print("\n\n[Run All] Interrupted by user")
        sys.exit(130)

    except EscapeRateError as e:
        print(ColoredOutput.error(f"[Run All] {type(e).__name__}: {e}"))
        sys.exit(1)

    print_header("SUMMARY")
    print(f"Wall time: {format_duration(time.perf_counter() - start)}")
    if table_failures or suite_failures:
        print(ColoredOutput.error(f"{table_failures} table rows and {suite_failures} suites failed"))
        sys.exit(1)
    print(ColoredOutput.success("Every table and suite passed"))


if __name__ == "__main__":
    main()
