"""Command-line front end.

Subcommands: ``simulate`` (single run), ``sweep`` (device-count sweep
over both policies and WuS modes), ``analyze`` (dependability metrics
from a system-description file), ``defaults`` (dump the default
configuration).

Exit codes: 0 success, 1 usage error, 2 configuration/schema error,
3 runtime error.  Errors print one machine-readable line on stderr;
successful runs print nothing there.  When WAKEDEP_OUT_DIR is set,
relative ``--out`` paths are placed inside it.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from wakedep.config import ConfigError, apply_overrides, dump_defaults, parse_document
from wakedep.engine.runner import BackendUnavailableError, SweepCell, run, sweep
from wakedep.reporting import render_analysis_csv, render_sweep_csv, write_text
from wakedep.sysdesc import SysDescError, evaluate_text

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

_ENV_OUT_DIR = "WAKEDEP_OUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 1
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="wakedep", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    def add_common(p):
        p.add_argument("--config", help="scenario configuration file")
        p.add_argument("--seed", type=int, help="override sim.seed")
        p.add_argument("--replications", type=int, help="override sim.replications")
        p.add_argument("--out", default="-", help="output path ('-' for stdout)")

    p_sim = sub.add_parser("simulate", help="run the configured scenario once")
    add_common(p_sim)

    p_sweep = sub.add_parser("sweep", help="run all policy/mode cells over device counts")
    add_common(p_sweep)
    p_sweep.add_argument(
        "--n-values", help="comma-separated device counts (overrides sweep.n_values)"
    )

    p_an = sub.add_parser("analyze", help="evaluate a system-description file")
    p_an.add_argument("sysdesc", help="system-description file path")
    p_an.add_argument("--out", default="-", help="output path ('-' for stdout)")

    p_def = sub.add_parser("defaults", help="print the default configuration")
    p_def.add_argument("--out", default="-", help="output path ('-' for stdout)")

    return parser


def _resolve_out(path: str) -> str:
    if path == "-":
        return path
    out_dir = os.environ.get(_ENV_OUT_DIR, "")
    if out_dir and not os.path.isabs(path):
        return str(Path(out_dir) / path)
    return path


def _load_document(args):
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
    else:
        text = ""
    doc = parse_document(text)
    return apply_overrides(doc, seed=args.seed, replications=args.replications)


def _cmd_simulate(args) -> int:
    doc = _load_document(args)
    sc = doc.scenario
    result = run(sc)
    cell = SweepCell(sc.n_devices, sc.policy, sc.wus_mode, result)
    write_text(render_sweep_csv([cell]), _resolve_out(args.out))
    if result.no_events:
        print("wakedep: warning: no events observed over the horizon", file=sys.stderr)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    doc = _load_document(args)
    if args.n_values:
        try:
            n_values = [int(v) for v in args.n_values.split(",") if v.strip()]
        except ValueError as exc:
            raise UsageError(f"--n-values: {exc}") from None
        if not n_values:
            raise UsageError("--n-values: empty list")
    else:
        n_values = list(doc.sweep_n_values)
    cells = sweep(doc.scenario, n_values)
    write_text(render_sweep_csv(cells), _resolve_out(args.out))
    return EXIT_OK


def _cmd_analyze(args) -> int:
    try:
        text = Path(args.sysdesc).read_text(encoding="utf-8")
    except OSError as exc:
        raise SysDescError(f"cannot read system description: {exc}") from None
    rows = evaluate_text(text)
    write_text(render_analysis_csv(rows), _resolve_out(args.out))
    return EXIT_OK


def _cmd_defaults(args) -> int:
    write_text(dump_defaults(), _resolve_out(args.out))
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "analyze": _cmd_analyze,
    "defaults": _cmd_defaults,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("missing subcommand (simulate, sweep, analyze, defaults)")
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"wakedep: error: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, SysDescError) as exc:
        print(f"wakedep: error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BackendUnavailableError, OSError, RuntimeError, ValueError) as exc:
        print(f"wakedep: error: runtime: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def entrypoint() -> None:  # console script
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
