#!/usr/bin/env python3
from __future__ import annotations
import argparse
import io
import logging
from pathlib import Path

from rich.console import Console
from rich.markup import escape
from rich.table import Table

from irreality.lib.config import load_settings
from irreality.lib.errors import InvalidArgumentError
from irreality.lib.export import (
    DISTRIBUTION_COLUMNS,
    FORMATS,
    SWEEP_COLUMNS,
    TABLE_COLUMNS,
    SweepSpec,
    distribution_record,
    emit,
    render,
    sweep_records,
    table_records,
    write_text,
)
from irreality.lib.hardy_model import HardyConfig
from irreality.lib.oracle import VerifyReport, run_verification
from irreality.lib.utils import console, die, setup_logging

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("irreality")
out = Console()


def _stage(value: str) -> int | str:
    if value == "all":
        return value
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"stage must be 1..4 or 'all', got {value!r}") from None


def _output(value: str | None) -> Path | None:
    return None if value in (None, "-") else Path(value)


def cmd_sweep(args: argparse.Namespace) -> int:
    settings = load_settings(args.config)
    spec = SweepSpec(
        p_min=args.p_min,
        p_max=args.p_max,
        steps=args.steps if args.steps is not None else settings.sweep_steps,
        stage=args.stage,
        phi=args.phi if args.phi is not None else settings.phi,
        format=args.format,
        output=_output(args.output),
    )
    emit(render(sweep_records(spec), SWEEP_COLUMNS, spec.format), spec.output)
    if spec.output is not None:
        console.print(f"[green]Wrote[/green] {spec.output}")
    return EXIT_OK


def _print_report(report: VerifyReport) -> None:
    table = Table(title="verification")
    table.add_column("check")
    table.add_column("expected")
    table.add_column("actual")
    table.add_column("tol", justify="right")
    table.add_column("status")
    for c in report.checks:
        status = "[green]PASS[/green]" if c.passed else "[red]FAIL[/red]"
        table.add_row(c.name, escape(c.expected), escape(c.actual), f"{c.tolerance:.1e}", status)
    out.print(table)
    verdict = "[green]OK[/green]" if report.passed else "[red]FAILED[/red]"
    out.print(
        f"{verdict} {len(report.checks) - len(report.failures)}/{len(report.checks)} checks "
        f"in {report.duration_sec:.2f}s"
    )


def cmd_verify(args: argparse.Namespace) -> int:
    settings = load_settings(args.config)
    report = run_verification(settings, tolerance=args.tolerance)
    _print_report(report)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_distribution(args: argparse.Namespace) -> int:
    config = HardyConfig(args.p, args.phi)
    emit(render(distribution_record(config), DISTRIBUTION_COLUMNS, args.format), _output(args.output))
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    rows = table_records(HardyConfig(args.p, args.phi))
    if args.format != "table":
        emit(render(rows, TABLE_COLUMNS, args.format), _output(args.output))
        return EXIT_OK
    table = Table(title=f"p = {args.p:g}")
    for col in TABLE_COLUMNS:
        table.add_column(col)
    for row in rows:
        table.add_row(
            str(row["stage"]),
            *("[green]yes[/green]" if row[c] else "[red]no[/red]" for c in TABLE_COLUMNS[1:4]),
            f"{row['rbn']:.6g}",
        )
    target = _output(args.output)
    if target is None:
        out.print(table)
        return EXIT_OK
    recorder = Console(record=True, file=io.StringIO(), width=100)
    recorder.print(table)
    write_text(target, recorder.export_text())
    console.print(f"[green]Wrote[/green] {escape(str(target))}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="irreality",
        description="Realism metrics for Hardy's two-interferometer experiment",
    )
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("sweep", help="metrics per stage over a grid of annihilation probabilities")
    s.add_argument("--p-min", type=float, default=0.0)
    s.add_argument("--p-max", type=float, default=1.0)
    s.add_argument("--steps", type=int, default=None, help="grid points (default from config: 201)")
    s.add_argument("--stage", type=_stage, default="all", help="1..4 or 'all'")
    s.add_argument("--phi", type=float, default=None)
    s.add_argument("--format", choices=FORMATS, default="csv")
    s.add_argument("--output", default=None, help="file path; standard output when omitted")
    s.add_argument("--config", type=Path, default=None, help="alternate YAML settings")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("verify", help="run every analytic oracle and invariant check")
    s.add_argument("--tolerance", type=float, default=None, help="force every check tolerance to this value")
    s.add_argument("--config", type=Path, default=None, help="alternate YAML settings")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("distribution", help="detector click probabilities after the final beam-splitters")
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--phi", type=float, default=0.0)
    s.add_argument("--format", choices=FORMATS, default="csv")
    s.add_argument("--output", default=None)
    s.set_defaults(func=cmd_distribution)

    s = sub.add_parser("table", help="realism and nonlocality verdict per stage")
    s.add_argument("--p", type=float, default=1.0)
    s.add_argument("--phi", type=float, default=0.0)
    s.add_argument("--format", choices=FORMATS + ("table",), default="table")
    s.add_argument("--output", default=None)
    s.set_defaults(func=cmd_table)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    log.debug("running %s", args.cmd)
    try:
        return args.func(args)
    except InvalidArgumentError as e:
        die(str(e), EXIT_USAGE)
    except OSError as e:
        die(f"cannot write output: {e}", EXIT_USAGE)


if __name__ == "__main__":
    raise SystemExit(main())
