"""Command-line entry point.

Subcommands:
  run        execute verification suites from a JSON config
  presets    list the built-in curves
  solve-map  solve and cache the conformal-map parameters for a curve

Exit status of ``run``: 0 all records pass, 1 any record fails, 2 the
configuration is invalid.  ``HARDYLIP_LOG`` in {error, info, debug} controls
verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .curve import load_graph
from .conformal import map_to_dict, sc_solve
from .harness import (
    PRESETS,
    ConfigError,
    emit_convergence_plotdata,
    emit_csv,
    load_config,
    run,
    write_report_json,
)

log = logging.getLogger("hardylip")


def _setup_logging() -> None:
    level = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("HARDYLIP_LOG", "error").lower(), logging.ERROR
    )
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config)
        overrides = {}
        if args.suites:
            overrides["suites"] = tuple(s.strip() for s in args.suites.split(",") if s.strip())
        if args.seed is not None:
            overrides["seed"] = args.seed
        if overrides:
            from dataclasses import replace

            config = replace(config, **overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    report = run(config)
    for record in report.records:
        status = "pass" if record.passed else "FAIL"
        log.info("%s %s.%s.%s = %g", status, record.suite, record.key, record.metric, record.value)

    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        emit_csv(report, out / "report.csv")
        emit_convergence_plotdata(report, out / "convergence.csv")
        write_report_json(report, out / "report.json")
        print(f"wrote {out / 'report.csv'}, {out / 'convergence.csv'}, {out / 'report.json'}")

    failed = [r for r in report.records if not r.passed]
    print(
        f"{len(report.records) - len(failed)}/{len(report.records)} records passed "
        f"in {report.environment['wall_time']}s"
    )
    for r in failed:
        print(f"FAIL {r.suite}.{r.key}.{r.metric} = {r.value!r} (tolerance {r.tolerance!r})")
    return 0 if report.passed else 1


def _cmd_presets(_args: argparse.Namespace) -> int:
    for name, spec in PRESETS.items():
        g = load_graph(spec)
        print(f"{name}: kinks={len(g.kink_abscissas)} lipschitz_bound={g.lipschitz_bound:g}")
    return 0


def _cmd_solve_map(args: argparse.Namespace) -> int:
    try:
        g = load_graph(args.curve)
    except Exception as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    m = sc_solve(g)
    Path(args.out).write_text(json.dumps(map_to_dict(m), indent=2) + "\n", encoding="utf-8")
    print(f"wrote {args.out} (prevertices: {len(m.prevertices)})")
    return 0


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = argparse.ArgumentParser(prog="hardylip", description=__doc__)
    parser.add_argument("--version", action="version", version=f"hardylip {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute verification suites")
    p_run.add_argument("--config", required=True, help="path to a JSON experiment config")
    p_run.add_argument("--out-dir", default=None, help="directory for CSV/JSON reports")
    p_run.add_argument("--suites", default=None, help="comma-separated suite subset")
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_run.set_defaults(func=_cmd_run)

    p_presets = sub.add_parser("presets", help="list built-in curves")
    p_presets.set_defaults(func=_cmd_presets)

    p_map = sub.add_parser("solve-map", help="solve and cache conformal-map parameters")
    p_map.add_argument("--curve", required=True, help="path to a curve JSON file")
    p_map.add_argument("--out", required=True, help="output JSON path for the solved map")
    p_map.set_defaults(func=_cmd_solve_map)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
