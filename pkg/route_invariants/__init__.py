"""Braid invariants of period-doubling routes to chaos."""

from __future__ import annotations

__version__ = "0.1.0"

__all__ = ["__version__", "main"]


def main(argv=None) -> int:
    """Entry point for ``python -m route_invariants`` invocations."""
    # pipeline imports this package, and the CLI imports pipeline
    from .cli import bootstrap_cli

    return bootstrap_cli(argv)
