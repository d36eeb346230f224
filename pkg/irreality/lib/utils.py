from __future__ import annotations
import logging
from pathlib import Path
from typing import NoReturn

from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

# Diagnostics go to stderr so stdout stays reserved for data.
console = Console(stderr=True)


def repo_root() -> Path:
    return Path(__file__).resolve().parents[2]


def die(msg: str, code: int = 2) -> NoReturn:
    console.print(f"[red]\\[ERROR][/red] {escape(msg)}")
    raise SystemExit(code)


def setup_logging(verbose: bool = False) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )
