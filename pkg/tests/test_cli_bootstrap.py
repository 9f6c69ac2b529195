"""Smoke tests for the :mod:`route_invariants.cli` entrypoints."""

from __future__ import annotations

import json

import pytest

import route_invariants
from route_invariants.cli import bootstrap_cli, commands, main


def test_bootstrap_cli_dispatches_to_the_command(monkeypatch) -> None:
    calls = []

    def fake_order(args):
        calls.append((args.strands, args.left.name, args.right.name))
        return 0

    monkeypatch.setitem(commands.COMMANDS, "order", fake_order)

    exit_code = bootstrap_cli(["order", "--strands", "3", "a.txt", "b.txt"])

    assert exit_code == 0
    assert calls == [(3, "a.txt", "b.txt")]


def test_package_main_runs_a_real_command(capsys) -> None:
    assert route_invariants.main(["burau", "--strands", "2", "--braid", "1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["symplectic"] == [["2", "-1"], ["1", "0"]]


def test_main_raises_system_exit() -> None:
    with pytest.raises(SystemExit) as excinfo:
        main(["burau", "--strands", "2", "--braid", "5"])
    assert excinfo.value.code == 2
