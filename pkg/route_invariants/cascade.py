"""Period-doubling cascades of the Hénon family and the braids they carry.

A cascade starts from one periodic orbit at the start of a parameter path.
Each stage locates the next doubling of the most recent orbit, picks up the
doubled orbit just past it, and carries on from there.  Stage ``n`` is
sampled inside the window between its own doubling and the next one, where
the orbits ``γ⁰ … γⁿ`` coexist; their union gives the stage braid ``Γ_n``.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .braid import BraidWord, format_braid, parse_braid
from .errors import BraidError, CacheCorruptError, CacheVersionError, ContinuationError, NumericalError
from .extraction import ProjectionConfig, extract, extract_braid, pd_cable_check, proximity_pairing
from .henon import (
    ContinuationSettings,
    DoublingPoint,
    HenonParams,
    MapOrbit,
    OrbitSettings,
    ParameterPath,
    follow_branch,
    locate_doubling,
    pick_up_daughter,
)

logger = logging.getLogger(__name__)

RECORD_SCHEMA = "route-invariants/cascade-record/1"
FEIGENBAUM_DELTA = 4.669201609102990
UNION_BRAID_CONVENTION = "union-braid convention"


@dataclasses.dataclass(frozen=True)
class CascadeSettings:
    orbit: OrbitSettings = OrbitSettings()
    continuation: ContinuationSettings = ContinuationSettings()
    doubling_tolerance: float = 1e-10
    pickup_offsets: Tuple[float, ...] = (1e-8, 1e-7, 1e-6, 1e-5)
    pickup_displacements: Tuple[float, ...] = (1e-4, 1e-3)
    jitter_attempts: int = 8
    step_fraction: float = 0.125


@dataclasses.dataclass(frozen=True)
class CascadeStage:
    """Stage ``n``: the orbit born at doubling ``n`` and the family sampled in its window."""

    index: int
    orbit: MapOrbit
    start: float
    sample: float
    family: Tuple[MapOrbit, ...]
    braid: BraidWord


@dataclasses.dataclass(frozen=True)
class CascadeRecord:
    path: ParameterPath
    initial_orbit: MapOrbit
    doublings: Tuple[DoublingPoint, ...]
    stages: Tuple[CascadeStage, ...]
    projection: ProjectionConfig = ProjectionConfig()
    settings: CascadeSettings = CascadeSettings()
    failure: Optional[str] = None

    def __post_init__(self) -> None:
        values = [d.s for d in self.doublings]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise BraidError("doubling parameters must be strictly increasing")
        for n, stage in enumerate(self.stages):
            expected = self.initial_orbit.period * 2 ** n
            if stage.orbit.period != expected:
                raise BraidError(f"stage {n} has period {stage.orbit.period}, expected {expected}")

    @property
    def doubling_parameters(self) -> Tuple[float, ...]:
        return tuple(d.params.a for d in self.doublings)

    @property
    def braids(self) -> Tuple[BraidWord, ...]:
        return tuple(stage.braid for stage in self.stages)

    @property
    def depth(self) -> int:
        """Number of stages past the initial orbit whose braids were extracted."""
        return max(len(self.stages) - 1, 0)


def sample_window(doublings: Sequence[float], n: int) -> float:
    """Path coordinate at which stage ``n`` is sampled.

    The window runs from doubling ``n`` (or the path start) to doubling
    ``n + 1``.  The last window's far end is estimated from the previous gap
    shrunk by the Feigenbaum ratio.
    """
    lower = doublings[n - 1] if n > 0 else 0.0
    if n < len(doublings):
        upper = doublings[n]
    elif n >= 2:
        upper = lower + (lower - doublings[n - 2]) / FEIGENBAUM_DELTA
    elif n == 1:
        upper = lower + 0.5 * (1.0 - lower)
    else:
        upper = 1.0
    return 0.5 * (lower + upper)


def _jitter(rng: np.random.Generator) -> Callable[[], np.ndarray]:
    def draw() -> np.ndarray:
        v = rng.normal(size=2)
        return v / np.linalg.norm(v)

    return draw


def _scan_settings(settings: CascadeSettings, doublings: Sequence[DoublingPoint]) -> ContinuationSettings:
    base = settings.continuation
    if len(doublings) < 2:
        return base
    gap = doublings[-1].s - doublings[-2].s
    return dataclasses.replace(base, max_step=min(base.max_step, gap * settings.step_fraction))


def continue_cascade(
    path: ParameterPath,
    initial_orbit: MapOrbit,
    max_doublings: int,
    settings: CascadeSettings = CascadeSettings(),
    projection: ProjectionConfig = ProjectionConfig(),
    seed: int = 0,
) -> CascadeRecord:
    """Follow ``initial_orbit`` (valid at ``path.at(0)``) through up to ``max_doublings`` doublings."""
    if max_doublings < 0:
        raise BraidError(f"max_doublings must be non-negative, got {max_doublings}")
    rng = np.random.default_rng(seed)
    doublings: List[DoublingPoint] = []
    births: List[Tuple[float, MapOrbit]] = [(0.0, initial_orbit)]
    failure: Optional[str] = None

    while len(doublings) < max_doublings:
        start, current = births[-1]
        initial_step = start - doublings[-1].s if doublings else None
        try:
            found = locate_doubling(
                path,
                current,
                start,
                1.0,
                settings.doubling_tolerance,
                initial_step,
                _scan_settings(settings, doublings),
                settings.orbit,
            )
            birth = pick_up_daughter(
                path,
                found,
                settings.pickup_offsets,
                settings.pickup_displacements,
                _jitter(rng),
                settings.jitter_attempts,
                settings.orbit,
            )
        except NumericalError as exc:
            failure = f"doubling {len(doublings) + 1}: {exc}"
            logger.warning("cascade stopped after %d doublings: %s", len(doublings), exc)
            break
        doublings.append(found)
        births.append(birth)
        logger.info(
            "doubling %d at a=%.10f (period %d -> %d)", len(doublings), found.params.a, current.period, birth[1].period
        )

    stages, stage_failure = _sample_stages(path, doublings, births, settings, projection)
    return CascadeRecord(
        path=path,
        initial_orbit=initial_orbit,
        doublings=tuple(doublings),
        stages=tuple(stages),
        projection=projection,
        settings=settings,
        failure=failure or stage_failure,
    )


def _sample_stages(
    path: ParameterPath,
    doublings: Sequence[DoublingPoint],
    births: Sequence[Tuple[float, MapOrbit]],
    settings: CascadeSettings,
    projection: ProjectionConfig,
) -> Tuple[List[CascadeStage], Optional[str]]:
    s_values = [d.s for d in doublings]
    samples = [sample_window(s_values, n) for n in range(len(births))]

    # branches[j][n - j] is γ^j at the sample of stage n
    branches: List[List[MapOrbit]] = []
    reachable = len(births)
    failure: Optional[str] = None
    for j, (start, orbit) in enumerate(births):
        if j >= reachable:
            break
        step = start - doublings[j - 1].s if j > 0 else None
        s, current = start, orbit
        found: List[MapOrbit] = []
        for target in samples[j:reachable]:
            try:
                (current,) = follow_branch(path, current, s, [target], step, settings.continuation, settings.orbit)
            except ContinuationError as exc:
                reachable = j + len(found)
                failure = f"stage {reachable}: orbit of period {orbit.period} lost ({exc})"
                logger.warning("%s", failure)
                break
            s, step = target, None
            found.append(current)
        branches.append(found)

    stages: List[CascadeStage] = []
    for n in range(reachable):
        family = tuple(branches[j][n - j] for j in range(n + 1))
        try:
            braid = extract_braid(family, path.at(samples[n]), projection)
        except NumericalError as exc:
            failure = failure or f"stage {n}: {exc}"
            logger.warning("braid extraction failed at stage %d: %s", n, exc)
            break
        start, orbit = births[n]
        stages.append(
            CascadeStage(index=n, orbit=orbit, start=start, sample=samples[n], family=family, braid=braid)
        )
    return stages, failure


def gamma_braid(rec: CascadeRecord, n: int, projection: Optional[ProjectionConfig] = None) -> BraidWord:
    """Braid ``Γ_n`` of the orbits ``γ⁰ … γⁿ`` sampled in the window of stage ``n``."""
    if n < 0 or n > len(rec.doublings):
        raise BraidError(f"stage {n} is beyond the {len(rec.doublings)} recorded doublings")
    if n >= len(rec.stages):
        raise ContinuationError(f"stage {n}: an orbit was lost before its sample parameter")
    stage = rec.stages[n]
    if projection is None:
        return stage.braid
    return extract_braid(stage.family, rec.path.at(stage.sample), projection)


def cable_check(rec: CascadeRecord, n: int) -> bool:
    """Check that ``γⁿ`` braids as a cable of ``γⁿ⁻¹`` at the stage-``n`` sample."""
    if n < 1 or n >= len(rec.stages):
        raise BraidError(f"cable check needs a stage in 1..{len(rec.stages) - 1}, got {n}")
    stage = rec.stages[n]
    params = rec.path.at(stage.sample)
    parent = extract([stage.family[n - 1]], params, rec.projection)
    daughter = extract([stage.family[n]], params, rec.projection)
    return pd_cable_check(parent.word, daughter.word, proximity_pairing(parent, daughter))


def scan_rows(rec: CascadeRecord) -> List[Dict[str, Any]]:
    """One row per detected doubling, with gaps and successive gap ratios."""
    rows: List[Dict[str, Any]] = []
    for n, d in enumerate(rec.doublings, start=1):
        gap = d.params.a - rec.doublings[n - 2].params.a if n >= 2 else None
        prev_gap = rec.doublings[n - 2].params.a - rec.doublings[n - 3].params.a if n >= 3 else None
        rows.append(
            {
                "stage": n,
                "period": d.orbit.period,
                "s": d.s,
                "a": d.params.a,
                "b": d.params.b,
                "gap": gap,
                "ratio": prev_gap / gap if gap and prev_gap else None,
            }
        )
    return rows


def _orbit_to_dict(orbit: MapOrbit) -> Dict[str, Any]:
    return {
        "a": orbit.params.a,
        "b": orbit.params.b,
        "period": orbit.period,
        "points": [list(p) for p in orbit.points],
        "residual": orbit.residual,
        "multipliers": [[m.real, m.imag] for m in orbit.multipliers],
        "monodromy": [list(r) for r in orbit.monodromy],
    }


def _orbit_from_dict(data: Dict[str, Any]) -> MapOrbit:
    return MapOrbit(
        params=HenonParams(float(data["a"]), float(data["b"])),
        period=int(data["period"]),
        points=tuple((float(x), float(y)) for x, y in data["points"]),
        residual=float(data["residual"]),
        multipliers=tuple(complex(re, im) for re, im in data["multipliers"]),  # type: ignore[arg-type]
        monodromy=tuple(tuple(float(x) for x in r) for r in data["monodromy"]),  # type: ignore[arg-type]
    )


def record_to_dict(rec: CascadeRecord) -> Dict[str, Any]:
    return {
        "schema": RECORD_SCHEMA,
        "conventions": [UNION_BRAID_CONVENTION, f"interpolation={rec.projection.interpolation}"],
        "path": rec.path.describe(),
        "initial_orbit": _orbit_to_dict(rec.initial_orbit),
        "doublings": [
            {"s": d.s, "a": d.params.a, "b": d.params.b, "orbit": _orbit_to_dict(d.orbit)} for d in rec.doublings
        ],
        "stages": [
            {
                "index": st.index,
                "start": st.start,
                "sample": st.sample,
                "orbit": _orbit_to_dict(st.orbit),
                "family": [_orbit_to_dict(o) for o in st.family],
                "strands": st.braid.strands,
                "braid": format_braid(st.braid),
            }
            for st in rec.stages
        ],
        "projection": dataclasses.asdict(rec.projection),
        "tolerances": {
            "newton": rec.settings.orbit.tolerance,
            "minimal_period": rec.settings.orbit.minimal_period_tolerance,
            "doubling": rec.settings.doubling_tolerance,
        },
        "failure": rec.failure,
    }


def record_from_dict(data: Dict[str, Any]) -> CascadeRecord:
    schema = data.get("schema")
    if schema != RECORD_SCHEMA:
        raise CacheVersionError(
            f"cascade record schema {schema!r} is not {RECORD_SCHEMA!r}; recompute it with `route-invariants cascade`"
        )
    try:
        path = ParameterPath(
            HenonParams(data["path"]["start"]["a"], data["path"]["start"]["b"]),
            HenonParams(data["path"]["end"]["a"], data["path"]["end"]["b"]),
        )
        doublings = tuple(
            DoublingPoint(s=float(d["s"]), params=HenonParams(d["a"], d["b"]), orbit=_orbit_from_dict(d["orbit"]))
            for d in data["doublings"]
        )
        stages = tuple(
            CascadeStage(
                index=int(st["index"]),
                orbit=_orbit_from_dict(st["orbit"]),
                start=float(st["start"]),
                sample=float(st["sample"]),
                family=tuple(_orbit_from_dict(o) for o in st["family"]),
                braid=parse_braid(st["braid"], int(st["strands"])),
            )
            for st in data["stages"]
        )
        tolerances = data["tolerances"]
        settings = CascadeSettings(
            orbit=OrbitSettings(tolerance=float(tolerances["newton"])),
            doubling_tolerance=float(tolerances["doubling"]),
        )
        return CascadeRecord(
            path=path,
            initial_orbit=_orbit_from_dict(data["initial_orbit"]),
            doublings=doublings,
            stages=stages,
            projection=ProjectionConfig(**data["projection"]),
            settings=settings,
            failure=data.get("failure"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CacheCorruptError(f"malformed cascade record: {exc}") from exc


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def record_digest(rec: CascadeRecord) -> str:
    return hashlib.sha256(canonical_json(record_to_dict(rec)).encode("ascii")).hexdigest()


__all__ = [
    "CascadeRecord",
    "CascadeSettings",
    "CascadeStage",
    "FEIGENBAUM_DELTA",
    "RECORD_SCHEMA",
    "UNION_BRAID_CONVENTION",
    "cable_check",
    "canonical_json",
    "continue_cascade",
    "gamma_braid",
    "record_digest",
    "record_from_dict",
    "record_to_dict",
    "sample_window",
    "scan_rows",
]
