"""Command-line interface.

Subcommands:
    run <config>     execute a scenario config, write JSON + CSV reports
    search           extremal probe: max |A| in [X] under residue caps
    verify           run the full acceptance/invariant suite (one line each)
    export           write majorant coefficient or census tables as CSV

Exit codes: 0 success, 2 config/usage error, 3 infeasible request,
4 internal invariant violation (a theorem-backed inequality failed).
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .configfile import ConfigError, parse_config
from .fourier import build_majorant
from .numtheory import primes_up_to
from .quadratics import quasisquares
from .reports import format_cell, write_csv, write_json
from .residues import InfeasibleConstraintError, InvariantViolationError
from .scenarios import SCHEMAS, run_scenario, scenario_names
from .search import extremal_search

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_INVARIANT = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sievelab",
        description="Desk-scale experiments around sieve bounds, additive "
        "energy, and quadratic value sets.",
    )
    parser.add_argument("--version", action="version", version=f"sievelab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario config file")
    run_p.add_argument("config", nargs="?", help="path to the scenario config")
    run_p.add_argument(
        "--out-dir", default=".", help="directory for report files (default: cwd)"
    )
    run_p.add_argument(
        "--list", action="store_true", help="list scenario names and exit"
    )

    search_p = sub.add_parser("search", help="extremal search under residue caps")
    search_p.add_argument("--x", type=int, required=True)
    search_p.add_argument(
        "--primes", default="3,5,7", help="comma-separated constraint primes"
    )
    search_p.add_argument(
        "--method",
        choices=("exhaustive", "branch_and_bound", "greedy_local"),
        default="branch_and_bound",
    )
    search_p.add_argument("--budget", type=int, default=5_000_000)
    search_p.add_argument("--seed", type=int, default=0)
    search_p.add_argument("--restarts", type=int, default=8)
    search_p.add_argument("--json", default=None, help="optional JSON output path")

    verify_p = sub.add_parser("verify", help="run the acceptance check suite")
    verify_p.add_argument(
        "--only",
        default=None,
        help="comma-separated criterion numbers to run (default: all)",
    )

    export_p = sub.add_parser("export", help="write inspection tables")
    export_sub = export_p.add_subparsers(dest="table", required=True)
    maj_p = export_sub.add_parser("majorant", help="majorant coefficients (k, c_k)")
    maj_p.add_argument("--eps", type=float, required=True)
    maj_p.add_argument("--out", required=True)
    census_p = export_sub.add_parser("census", help="quasisquare census hits")
    census_p.add_argument("--y", type=int, required=True)
    census_p.add_argument("--window", default="50,100", help="prime window lo,hi")
    census_p.add_argument("--out", required=True)

    return parser


def _cmd_run(args) -> int:
    if args.list:
        for name in scenario_names():
            print(name)
        return EXIT_OK
    if args.config is None:
        print("config error: a config path is required unless --list is given", file=sys.stderr)
        return EXIT_CONFIG
    cfg = parse_config(args.config, SCHEMAS)
    result = run_scenario(cfg)
    os.makedirs(args.out_dir, exist_ok=True)
    json_path = os.path.join(args.out_dir, cfg.output_path("json", f"{cfg.name}.json"))
    csv_path = os.path.join(args.out_dir, cfg.output_path("csv", f"{cfg.name}.csv"))
    write_json(json_path, result.report)
    write_csv(csv_path, result.csv_header, result.csv_rows)
    print(f"{cfg.name}: wrote {json_path} and {csv_path}")
    return EXIT_OK


def _cmd_search(args) -> int:
    primes = tuple(int(p) for p in args.primes.split(",") if p.strip()) if args.primes.strip() else ()
    result = extremal_search(
        args.x,
        primes,
        method=args.method,
        budget=args.budget,
        seed=args.seed,
        restarts=args.restarts,
    )
    print(
        f"x={result.x} primes={list(result.primes)} method={result.method} "
        f"size={result.size} ratio_sqrt={format_cell(result.sqrt_ratio)} "
        f"certified={result.certified_optimal} nodes={result.nodes}"
    )
    print("elements:", ",".join(str(n) for n in result.best.elements))
    if args.json:
        write_json(args.json, result.to_json_dict())
    return EXIT_OK


def _cmd_verify(args) -> int:
    from . import verify

    selected = None
    if args.only:
        try:
            selected = sorted({int(tok) for tok in args.only.split(",") if tok.strip()})
        except ValueError as exc:
            raise ConfigError(f"--only expects criterion numbers: {exc}") from exc
    results = verify.run_checks(selected=selected, stream=sys.stdout)
    if selected is not None and not results:
        raise ConfigError(
            f"--only {args.only!r} matches no criterion in 1..{len(verify.ALL_CHECKS)}"
        )
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVARIANT


def _cmd_export(args) -> int:
    if args.table == "majorant":
        poly = build_majorant(args.eps)
        write_csv(args.out, ("k", "c_k"), poly.coefficient_rows())
        print(f"wrote {args.out} ({poly.degree + 1} rows)")
        return EXIT_OK
    if args.table == "census":
        try:
            lo, hi = (int(v) for v in args.window.split(","))
        except ValueError as exc:
            raise ConfigError(f"--window expects lo,hi: {exc}") from exc
        primes = [p for p in primes_up_to(hi) if p >= lo and p > 2]
        census = quasisquares(args.y, primes)
        write_csv(args.out, ("q",), [(q,) for q in census.hits])
        print(f"wrote {args.out} ({census.count} rows)")
        return EXIT_OK
    raise ConfigError(f"unknown export table {args.table!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "search":
            return _cmd_search(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "export":
            return _cmd_export(args)
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleConstraintError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except InvariantViolationError as exc:
        print(f"invariant violation (bug): {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
