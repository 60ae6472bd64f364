"""Command-line runner for the verification suites.

Exit codes: 0 when every mandatory check passes, 1 on a failure, 2 on a
usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import fields

from .suites import MODELS, SUITES, ConfigError, SuiteConfig, run

FLAG_FIELDS = ("model", "dim", "degree", "horizon", "seed", "suite", "tol_rel")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="amgeo", description="Run verification suites on the model algebras.")
    ap.add_argument("--config", help="JSON file with configuration keys; flags override it")
    ap.add_argument("--model", choices=MODELS)
    ap.add_argument("--dim", type=int, help="n for entire/matrix, k for function")
    ap.add_argument("--degree", type=int, help="truncation degree")
    ap.add_argument("--horizon", type=int, help="horizon for limit-type checks")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--suite", choices=SUITES + ("all",))
    ap.add_argument("--tol-rel", dest="tol_rel", type=float, help="relative tolerance")
    ap.add_argument("--report", help="write the JSON report to this path")
    ap.add_argument("--verbose", action="store_true", help="print one line per check")
    return ap


def load_config(args: argparse.Namespace) -> SuiteConfig:
    values = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f.name for f in fields(SuiteConfig)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        values.update(data)
    for name in FLAG_FIELDS:
        v = getattr(args, name)
        if v is not None:
            values[name] = v
    return SuiteConfig(**values)


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".report-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = load_config(args)
    except (ConfigError, OSError, ValueError, TypeError) as exc:
        print(f"amgeo: error: {exc}", file=sys.stderr)
        return 2
    log = print if args.verbose else None
    report = run(cfg, log)
    if args.report:
        write_atomic(args.report, report.to_text())
    s = report.summary
    print(f"{s['pass']} passed, {s['fail']} failed ({s['mandatory_failures']} mandatory), {s['skip']} skipped")
    return 0 if report.ok else 1
