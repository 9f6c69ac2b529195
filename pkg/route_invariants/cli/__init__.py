"""Command-line entrypoints for the :mod:`route_invariants` toolkit."""

from __future__ import annotations

from typing import Optional, Sequence

from . import main as commands

__all__ = ["bootstrap_cli", "commands", "main"]


def bootstrap_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` (or ``sys.argv``) and run the selected subcommand."""
    parsed = commands.parse_args(list(argv) if argv is not None else None)
    return commands.run(parsed)


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Console-script entry point; exits with the command status."""
    raise SystemExit(bootstrap_cli(argv))
