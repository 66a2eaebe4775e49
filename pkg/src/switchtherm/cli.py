"""``switchtherm`` command line: run, sweep, figure, verify."""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import sweep, verify


def _cmd_run(args) -> int:
    cfg = sweep.load_config(args.config) if args.config else {}
    params = sweep.scenario_from_config(cfg, s=args.s, lam=args.lam, q=args.q, p=args.p)
    row = sweep.run_scenario(params, check_paths=args.check_paths)
    sys.stdout.write(sweep.rows_to_csv([row]))
    return 0


def _cmd_sweep(args) -> int:
    grid = sweep.grid_from_config(sweep.load_config(args.config))
    rows = sweep.run_sweep(grid, args.out, jobs=args.jobs)
    print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return 0


def _cmd_figure(args) -> int:
    path = sweep.figure(args.fig_id, args.out)
    print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    only = [x for part in (args.only or []) for x in part.split(",") if x]
    return verify.report(verify.run_checks(only=only, tol=args.tol))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="switchtherm",
        description="Information capacity of thermal channels under a quantum switch.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate one scenario and print a CSV row")
    run.add_argument("--config", help="key = value scenario file")
    run.add_argument("--s", type=float)
    run.add_argument("--lambda", dest="lam", type=float)
    run.add_argument("--q", type=float)
    run.add_argument("--p", type=float)
    run.add_argument("--check-paths", action="store_true", help="cross-check all three simulation paths")
    run.set_defaults(func=_cmd_run)

    sw = sub.add_parser("sweep", help="evaluate a parameter grid into a CSV file")
    sw.add_argument("--config", required=True)
    sw.add_argument("--out", required=True)
    sw.add_argument("--jobs", type=int, default=1)
    sw.set_defaults(func=_cmd_sweep)

    fig = sub.add_parser("figure", help="write the CSV behind a figure")
    fig.add_argument("fig_id", choices=sorted(sweep.FIGURES))
    fig.add_argument("--out", required=True, help="output directory")
    fig.set_defaults(func=_cmd_figure)

    ver = sub.add_parser("verify", help="run the numerical self-checks")
    ver.add_argument("--only", action="append", help=f"check group(s): {', '.join(verify.GROUPS)}")
    ver.add_argument("--tol", type=float, help="override the tolerance of identity checks")
    ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"switchtherm: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
