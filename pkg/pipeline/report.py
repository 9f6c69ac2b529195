"""Invariant reports and their comparison."""
from __future__ import annotations

import dataclasses
import enum
import json
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from route_invariants.arithmetic import Convergents, IndexSequence, PadicDigits, eventual_period
from route_invariants.braid import BraidWord, format_braid
from route_invariants.errors import ReportMismatchError

REPORT_SCHEMA = "route-invariants/report/2"
TRACE_TOLERANCE = 1e-9
ORDERING_CONVENTION = "ordering: sigma-positive words are greater, decided by handle reduction"
PERMUTATION_CONVENTION = "permutation: entry q is the start of the strand ending at q"
TRACE_CONVENTION = "traces: Burau matrix at the natural strand count of each stage braid"


@dataclasses.dataclass(frozen=True)
class LedgerEntry:
    stage: str
    kind: str
    message: str

    def to_dict(self) -> Dict[str, str]:
        return {"stage": self.stage, "kind": self.kind, "message": self.message}


@dataclasses.dataclass(frozen=True)
class StageSummary:
    stage: int
    braid: BraidWord
    spectral_log: Optional[float]
    cable_check: Optional[bool]
    indices: Mapping[int, int]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "stage": self.stage,
            "strands": self.braid.strands,
            "braid": format_braid(self.braid),
            "spectral_log": self.spectral_log,
            "cable_check": self.cable_check,
            "indices": {str(n): str(c) for n, c in sorted(self.indices.items())},
        }


@dataclasses.dataclass(frozen=True)
class IndexSection:
    """Index terms for one modulus with their continued fraction and p-adic digits."""

    modulus: int
    depth: int
    terms: IndexSequence
    convergents: Optional[Convergents]
    padic: Tuple[PadicDigits, ...]

    def to_dict(self) -> Dict[str, Any]:
        padic: List[Dict[str, Any]] = []
        for digits in self.padic:
            entry = digits.to_json()
            period = eventual_period(digits.digits)
            entry["eventual_period"] = None if period is None else {"preperiod": period[0], "period": period[1]}
            padic.append(entry)
        return {
            "modulus": self.modulus,
            "depth": self.depth,
            "index_terms": [str(c) for c in self.terms.terms],
            "convergents": None if self.convergents is None else self.convergents.to_json(),
            "value": None if self.convergents is None else self.convergents.decimal(),
            "padic": padic,
        }


def _complex_pair(value: complex) -> List[float]:
    return [float(value.real), float(value.imag)]


def trace_entries(depth: int, traces: Mapping[str, Sequence[complex]]) -> List[Dict[str, Any]]:
    """One ``{"t", "depth", "values"}`` object per trace point, in menu order."""
    return [
        {"t": label, "depth": depth, "values": [_complex_pair(v) for v in values]}
        for label, values in traces.items()
    ]


@dataclasses.dataclass(frozen=True)
class CascadeSection:
    """Invariants of one cascade record."""

    name: str
    digest: str
    depth: int
    stages: Tuple[StageSummary, ...]
    index: Tuple[IndexSection, ...]
    traces: Mapping[str, Sequence[complex]]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "record_digest": self.digest,
            "depth": self.depth,
            "stages": [s.to_dict() for s in self.stages],
            "index": {str(sec.modulus): sec.to_dict() for sec in self.index},
            "traces": trace_entries(self.depth, self.traces),
        }


@dataclasses.dataclass(frozen=True)
class InvariantReport:
    version: str
    config: Mapping[str, Any]
    cascades: Tuple[CascadeSection, ...]
    route: Optional[Tuple[IndexSection, ...]] = None
    conventions: Tuple[str, ...] = ()
    notes: Tuple[str, ...] = ()
    errors: Tuple[LedgerEntry, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": REPORT_SCHEMA,
            "version": self.version,
            "config": dict(self.config),
            "cascades": [c.to_dict() for c in self.cascades],
            "route": None if self.route is None else {str(sec.modulus): sec.to_dict() for sec in self.route},
            "conventions": list(self.conventions),
            "notes": list(self.notes),
            "errors": [e.to_dict() for e in self.errors],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=True) + "\n"

    @property
    def completed_stages(self) -> int:
        return sum(len(c.stages) for c in self.cascades)


class Verdict(enum.Enum):
    DISTINCT = "DISTINCT"
    INDISTINGUISHABLE = "INDISTINGUISHABLE"


@dataclasses.dataclass(frozen=True)
class Difference:
    field: str
    position: int
    left: Any
    right: Any

    def to_dict(self) -> Dict[str, Any]:
        return {"field": self.field, "position": self.position, "left": self.left, "right": self.right}


@dataclasses.dataclass(frozen=True)
class ReportDiff:
    """Outcome of :func:`compare_reports`.

    ``DISTINCT`` means some invariant differs, so the routes are not isotopic
    relative to their cascades.  ``INDISTINGUISHABLE`` draws no conclusion.
    """

    verdict: Verdict
    differences: Tuple[Difference, ...]
    compared_terms: int
    compared_traces: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "differences": [d.to_dict() for d in self.differences],
            "compared_terms": self.compared_terms,
            "compared_traces": self.compared_traces,
        }


ReportLike = Union[InvariantReport, Mapping[str, Any]]

_MENU_KEYS = ("depth", "moduli", "primes", "trace_points")


def _as_dict(report: ReportLike) -> Mapping[str, Any]:
    if isinstance(report, InvariantReport):
        return report.to_dict()
    if report.get("schema") != REPORT_SCHEMA:
        raise ReportMismatchError(f"unsupported report schema {report.get('schema')!r}")
    return report


def _close(left: Sequence[float], right: Sequence[float]) -> bool:
    a, b = complex(*left), complex(*right)
    return abs(a - b) <= TRACE_TOLERANCE * max(1.0, abs(a), abs(b))


def _compare_index(
    name: str, left: Mapping[str, Any], right: Mapping[str, Any], differences: List[Difference]
) -> int:
    compared = 0
    for modulus in sorted(left, key=int):
        a_terms = [int(x) for x in left[modulus]["index_terms"]]
        b_terms = [int(x) for x in right.get(modulus, {"index_terms": []})["index_terms"]]
        for position, (x, y) in enumerate(zip(a_terms, b_terms), start=1):
            compared += 1
            if x != y:
                differences.append(Difference(f"{name}[N={modulus}]", position, str(x), str(y)))
    return compared


def _compare_traces(
    name: str, left: Sequence[Mapping[str, Any]], right: Sequence[Mapping[str, Any]], differences: List[Difference]
) -> int:
    compared = 0
    others = {entry["t"]: entry["values"] for entry in right}
    for entry in sorted(left, key=lambda e: e["t"]):
        label = entry["t"]
        for position, (x, y) in enumerate(zip(entry["values"], others.get(label, [])), start=1):
            compared += 1
            if not _close(x, y):
                differences.append(Difference(f"{name}[t={label}]", position, list(x), list(y)))
    return compared


def compare_reports(left: ReportLike, right: ReportLike) -> ReportDiff:
    """Compare the invariants of two reports computed with the same menus.

    Index terms and traces are compared cascade by cascade over the stages
    both reports reached.
    """
    a, b = _as_dict(left), _as_dict(right)
    for key in _MENU_KEYS:
        if a["config"].get(key) != b["config"].get(key):
            raise ReportMismatchError(
                f"reports differ in {key}: {a['config'].get(key)!r} != {b['config'].get(key)!r}"
            )
    if len(a["cascades"]) != len(b["cascades"]):
        raise ReportMismatchError(
            f"reports cover {len(a['cascades'])} and {len(b['cascades'])} cascades"
        )

    differences: List[Difference] = []
    terms = traces = 0
    for i, (x, y) in enumerate(zip(a["cascades"], b["cascades"])):
        prefix = f"cascades[{i}]."
        terms += _compare_index(prefix + "index", x["index"], y["index"], differences)
        traces += _compare_traces(prefix + "trace", x["traces"], y["traces"], differences)
    if a.get("route") and b.get("route"):
        terms += _compare_index("route", a["route"], b["route"], differences)

    verdict = Verdict.DISTINCT if differences else Verdict.INDISTINGUISHABLE
    return ReportDiff(verdict, tuple(differences), terms, traces)


__all__ = [
    "CascadeSection",
    "Difference",
    "IndexSection",
    "InvariantReport",
    "LedgerEntry",
    "ORDERING_CONVENTION",
    "PERMUTATION_CONVENTION",
    "REPORT_SCHEMA",
    "ReportDiff",
    "StageSummary",
    "TRACE_CONVENTION",
    "TRACE_TOLERANCE",
    "Verdict",
    "compare_reports",
    "trace_entries",
]
