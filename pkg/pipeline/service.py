"""High level orchestration: cascade → stage braids → invariants → report."""
from __future__ import annotations

import logging
from concurrent.futures import Executor, ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from route_invariants import __version__
from route_invariants.arithmetic import (
    IndexSequence,
    continued_fraction,
    padic_expand,
    route_index_sequence,
    trace_invariant,
)
from route_invariants.braid import BraidWord
from route_invariants.burau import spectral_log
from route_invariants.cascade import (
    UNION_BRAID_CONVENTION,
    CascadeRecord,
    CascadeSettings,
    cable_check,
    continue_cascade,
    gamma_braid,
    record_digest,
)
from route_invariants.errors import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_RESOURCE,
    ConfigError,
    RouteInvariantsError,
)
from route_invariants.extraction import ProjectionConfig
from route_invariants.henon import HenonParams, OrbitSettings, ParameterPath, find_periodic_orbit, fixed_points
from route_invariants.modular import OrderCache, relative_index

from .config import PipelineConfig
from .report import (
    ORDERING_CONVENTION,
    PERMUTATION_CONVENTION,
    TRACE_CONVENTION,
    CascadeSection,
    IndexSection,
    InvariantReport,
    LedgerEntry,
    StageSummary,
)

logger = logging.getLogger(__name__)

CascadeRunner = Callable[..., CascadeRecord]


def parameter_path(cfg: PipelineConfig) -> ParameterPath:
    end_b = cfg.b if cfg.b_end is None else cfg.b_end
    return ParameterPath(HenonParams(cfg.a_min, cfg.b), HenonParams(cfg.a_max, end_b))


def _index_section(modulus: int, depth: int, terms: Sequence[int], primes: Sequence[int]) -> IndexSection:
    seq = IndexSequence(tuple(terms))
    if not terms:
        return IndexSection(modulus, depth, seq, None, ())
    return IndexSection(
        modulus, depth, seq, continued_fraction(seq), tuple(padic_expand(seq, p) for p in primes)
    )


class PipelineService:
    """Runs the invariant computation for one configuration.

    Failures of individual stages land in :attr:`ledger`; the report is built
    from whatever completed.
    """

    def __init__(
        self,
        config: PipelineConfig,
        order_cache: Optional[OrderCache] = None,
        executor_factory: Optional[Callable[[], Executor]] = None,
        cascade_runner: Optional[CascadeRunner] = None,
    ) -> None:
        self.config = config
        self.order_cache = order_cache if order_cache is not None else OrderCache()
        self._executor_factory = executor_factory or (lambda: ThreadPoolExecutor(max_workers=config.workers))
        self._cascade_runner = cascade_runner or continue_cascade
        self.ledger: List[LedgerEntry] = []

    def _record_failure(self, stage: str, exc: BaseException) -> None:
        kind = getattr(exc, "kind", "error")
        self.ledger.append(LedgerEntry(stage=stage, kind=kind, message=str(exc)))
        logger.warning("%s failed: %s", stage, exc)

    def build_record(self) -> Optional[CascadeRecord]:
        cfg = self.config
        path = parameter_path(cfg)
        orbit_settings = OrbitSettings(tolerance=cfg.newton_tolerance)
        if cfg.initial_seed is not None:
            seed = cfg.initial_seed
        elif cfg.initial_period == 1:
            candidates = fixed_points(path.at(0.0))
            if not candidates:
                self._record_failure("cascade/initial-orbit", ConfigError("no real fixed point at the path start"))
                return None
            seed = candidates[0]
        else:
            raise ConfigError("initial_seed is required when initial_period > 1")
        try:
            initial = find_periodic_orbit(path.at(0.0), cfg.initial_period, seed, orbit_settings)
        except RouteInvariantsError as exc:
            self._record_failure("cascade/initial-orbit", exc)
            return None

        return self._cascade_runner(
            path,
            initial,
            cfg.max_doublings,
            CascadeSettings(orbit=orbit_settings, doubling_tolerance=cfg.doubling_tolerance),
            ProjectionConfig(
                angle=cfg.projection_angle, steps=cfg.interpolation_steps, interpolation=cfg.interpolation
            ),
            cfg.seed,
        )

    def _stage_braids(self, name: str, record: CascadeRecord) -> List[Tuple[int, BraidWord]]:
        braids: List[Tuple[int, BraidWord]] = []
        # stages lost during sampling are already reported through record.failure
        last = min(self.config.depth, len(record.doublings), len(record.stages) - 1)
        for n in range(1, last + 1):
            try:
                braids.append((n, gamma_braid(record, n)))
            except RouteInvariantsError as exc:
                self._record_failure(f"{name}/gamma-braid/stage-{n}", exc)
                break
        return braids

    def _indices_for(
        self, modulus: int, braids: Sequence[Tuple[int, BraidWord]]
    ) -> Tuple[List[int], Optional[Tuple[str, RouteInvariantsError]]]:
        terms: List[int] = []
        for n, word in braids:
            try:
                terms.append(relative_index(word, modulus, cache=self.order_cache, cap=self.config.element_cap))
            except RouteInvariantsError as exc:
                return terms, (f"index[N={modulus}]/stage-{n}", exc)
        return terms, None

    def _cascade_section(self, name: str, record: CascadeRecord, executor: Executor) -> CascadeSection:
        cfg = self.config
        braids = self._stage_braids(name, record)
        words = [w for _, w in braids]

        index_jobs = {n: executor.submit(self._indices_for, n, braids) for n in cfg.moduli}
        trace_jobs = {
            label: executor.submit(trace_invariant, words, t) for label, t in cfg.trace_values().items()
        }

        summaries_input: List[Tuple[int, BraidWord, Optional[float], Optional[bool]]] = []
        for n, word in braids:
            entropy: Optional[float] = None
            try:
                entropy = spectral_log(word)
            except RouteInvariantsError as exc:
                self._record_failure(f"{name}/spectral-log/stage-{n}", exc)
            checked: Optional[bool] = None
            try:
                checked = cable_check(record, n)
            except RouteInvariantsError as exc:
                self._record_failure(f"{name}/cable-check/stage-{n}", exc)
            if checked is False:
                logger.warning("%s: stage %d does not look like a cable of stage %d", name, n, n - 1)
            summaries_input.append((n, word, entropy, checked))

        index_terms: Dict[int, List[int]] = {}
        for modulus in cfg.moduli:
            terms, failure = index_jobs[modulus].result()
            if failure is not None:
                self._record_failure(f"{name}/{failure[0]}", failure[1])
            index_terms[modulus] = terms

        traces: Dict[str, List[complex]] = {}
        for label, job in trace_jobs.items():
            try:
                traces[label] = job.result()
            except RouteInvariantsError as exc:
                self._record_failure(f"{name}/trace[t={label}]", exc)
                traces[label] = []

        stages = tuple(
            StageSummary(
                stage=n,
                braid=word,
                spectral_log=entropy,
                cable_check=checked,
                indices={m: index_terms[m][i] for m in cfg.moduli if i < len(index_terms[m])},
            )
            for i, (n, word, entropy, checked) in enumerate(summaries_input)
        )
        index = tuple(_index_section(m, cfg.depth, index_terms[m], cfg.primes) for m in cfg.moduli)
        return CascadeSection(
            name=name, digest=record_digest(record), depth=cfg.depth, stages=stages, index=index, traces=traces
        )

    def _route_section(self, sections: Sequence[CascadeSection]) -> Optional[Tuple[IndexSection, ...]]:
        merged: List[IndexSection] = []
        for modulus in self.config.moduli:
            per_cascade = [
                (sec.name, [(st.braid, st.indices[modulus]) for st in sec.stages if modulus in st.indices])
                for sec in sections
            ]
            if not any(items for _, items in per_cascade):
                merged.append(_index_section(modulus, self.config.depth, [], self.config.primes))
                continue
            try:
                seq = route_index_sequence(per_cascade)
            except RouteInvariantsError as exc:
                self._record_failure(f"route/index[N={modulus}]", exc)
                continue
            terms = seq.truncate(self.config.depth).terms
            merged.append(_index_section(modulus, self.config.depth, terms, self.config.primes))
        return tuple(merged)

    def run(self, records: Optional[Sequence[CascadeRecord]] = None) -> InvariantReport:
        cfg = self.config
        notes: List[str] = []
        if records is None:
            built = self.build_record()
            records = [built] if built is not None else []
        if cfg.max_doublings == 0 and not any(r.doublings for r in records):
            notes.append("max_doublings is 0: no cascade stages, so the invariant sections are empty")

        sections: List[CascadeSection] = []
        with self._executor_factory() as executor:
            for i, record in enumerate(records):
                name = f"cascade-{i}"
                if record.failure:
                    self.ledger.append(
                        LedgerEntry(stage=f"{name}/continuation", kind="numerical", message=record.failure)
                    )
                section = self._cascade_section(name, record, executor)
                if len(section.stages) < cfg.depth and cfg.max_doublings > 0:
                    notes.append(f"{name}: {len(section.stages)} of {cfg.depth} requested stages available")
                sections.append(section)

        route = self._route_section(sections) if len(sections) > 1 else None
        return InvariantReport(
            version=__version__,
            config=cfg.echo(),
            cascades=tuple(sections),
            route=route,
            conventions=(UNION_BRAID_CONVENTION, ORDERING_CONVENTION, PERMUTATION_CONVENTION, TRACE_CONVENTION),
            notes=tuple(notes),
            errors=tuple(self.ledger),
        )


def exit_code(report: InvariantReport) -> int:
    if report.config.get("max_doublings", 0) > 0 and report.completed_stages == 0:
        return EXIT_NUMERICAL
    kinds = {e.kind for e in report.errors}
    if "resource" in kinds:
        return EXIT_RESOURCE
    if kinds:
        return EXIT_NUMERICAL
    return EXIT_OK


def run_pipeline(
    cfg: PipelineConfig,
    records: Optional[Sequence[CascadeRecord]] = None,
    order_cache: Optional[OrderCache] = None,
) -> InvariantReport:
    report = PipelineService(cfg.validate(), order_cache=order_cache).run(records)
    if cfg.output is not None:
        cfg.output.parent.mkdir(parents=True, exist_ok=True)
        cfg.output.write_text(report.to_json(), encoding="utf-8")
    return report


__all__ = ["PipelineService", "exit_code", "parameter_path", "run_pipeline"]
