"""Braids traced out by finite invariant sets of the Hénon map.

Each orbit point is moved to its image along a path in the plane; the paths
together form the suspension, and projecting them onto the line at angle
``θ`` turns the motion into a braid.  Two adjacent strands that change order
emit ``σ_i^±1``; the strand passing in front (larger coordinate orthogonal to
the projection line) decides the sign.

The default ``isotopy`` path first shears ``(x, y) → (x, x² + b·y - a)`` and
then rotates the plane by a quarter turn, which together give ``H``.  Every
intermediate map is a diffeomorphism, so distinct points never collide.  The
``linear`` path moves each point straight to its image; points exchanged by
the map meet halfway there, and no projection separates them.
"""
from __future__ import annotations

import dataclasses
import logging
import math
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .braid import BraidWord, Permutation, pair_collapse, permutation
from .errors import BraidError, ConfigError, ExtractionError
from .henon import HenonParams, MapOrbit

logger = logging.getLogger(__name__)

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
INTERPOLATIONS = ("isotopy", "linear")


@dataclasses.dataclass(frozen=True)
class ProjectionConfig:
    angle: float = 0.0
    steps: int = 64
    coincidence_tolerance: float = 1e-9
    max_retries: int = 16
    interpolation: str = "isotopy"

    def __post_init__(self) -> None:
        if self.steps < 2:
            raise ConfigError(f"interpolation needs at least 2 substeps, got {self.steps}")
        if self.interpolation not in INTERPOLATIONS:
            raise ConfigError(f"unknown interpolation {self.interpolation!r}; choose from {INTERPOLATIONS}")
        if self.max_retries < 0:
            raise ConfigError("max_retries must be non-negative")


@dataclasses.dataclass(frozen=True)
class Extraction:
    """An extracted braid together with the projection that produced it."""

    word: BraidWord
    angle: float
    points: Tuple[Tuple[float, float], ...]
    order: Tuple[int, ...]

    def position_of(self, point_index: int) -> int:
        """1-based position of a point along the projection line at time 0."""
        return self.order.index(point_index) + 1


class _Degenerate(Exception):
    pass


def _suspension(params: HenonParams, xs: np.ndarray, ys: np.ndarray, tau: float, mode: str) -> Tuple[np.ndarray, np.ndarray]:
    if mode == "linear":
        fx = params.a - xs * xs - params.b * ys
        return xs + tau * (fx - xs), ys + tau * (xs - ys)
    sheared = xs * xs + params.b * ys - params.a
    if tau <= 0.5:
        s = 2.0 * tau
        return xs, (1.0 - s) * ys + s * sheared
    phi = (2.0 * tau - 1.0) * math.pi / 2.0
    c, s = math.cos(phi), math.sin(phi)
    return xs * c - sheared * s, xs * s + sheared * c


def _project(xs: np.ndarray, ys: np.ndarray, angle: float) -> Tuple[np.ndarray, np.ndarray]:
    c, s = math.cos(angle), math.sin(angle)
    return xs * c + ys * s, -xs * s + ys * c


def _check_separated(u: np.ndarray, tolerance: float) -> None:
    ordered = np.sort(u)
    if len(ordered) > 1 and float(np.min(np.diff(ordered))) <= tolerance:
        raise _Degenerate("projected points coincide")


def _collect_points(orbits: Sequence[MapOrbit]) -> Tuple[List[Tuple[float, float]], List[int]]:
    points: List[Tuple[float, float]] = []
    successor: List[int] = []
    for orbit in orbits:
        base = len(points)
        k = orbit.period
        points.extend(orbit.points)
        successor.extend(base + (j + 1) % k for j in range(k))
    return points, successor


def _trace(params: HenonParams, points: Sequence[Tuple[float, float]], angle: float, cfg: ProjectionConfig) -> Tuple[List[int], List[int]]:
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    u0, v0 = _project(xs, ys, angle)
    _check_separated(u0, cfg.coincidence_tolerance)
    start_order = [int(i) for i in np.argsort(u0, kind="stable")]
    order = list(start_order)
    letters: List[int] = []
    taus = np.linspace(0.0, 1.0, cfg.steps + 1)
    u_a, v_a = u0, v0
    for tau in taus[1:]:
        u_b, v_b = _project(*_suspension(params, xs, ys, float(tau), cfg.interpolation), angle)
        while True:
            best: Optional[Tuple[float, int]] = None
            for pos in range(len(order) - 1):
                left, right = order[pos], order[pos + 1]
                end_gap = u_b[right] - u_b[left]
                if end_gap >= 0:
                    continue
                start_gap = u_a[right] - u_a[left]
                lam = start_gap / (start_gap - end_gap)
                if best is None or lam < best[0]:
                    best = (lam, pos)
            if best is None:
                break
            lam, pos = best
            left, right = order[pos], order[pos + 1]
            v_left = v_a[left] + lam * (v_b[left] - v_a[left])
            v_right = v_a[right] + lam * (v_b[right] - v_a[right])
            if abs(v_left - v_right) <= cfg.coincidence_tolerance:
                raise _Degenerate("strands meet at a crossing")
            letters.append(pos + 1 if v_left > v_right else -(pos + 1))
            order[pos], order[pos + 1] = right, left
        u_a, v_a = u_b, v_b
    _check_separated(u_a, cfg.coincidence_tolerance)
    return start_order, letters


def extract(orbits: Sequence[MapOrbit], params: HenonParams, cfg: ProjectionConfig = ProjectionConfig()) -> Extraction:
    """Braid of the union of ``orbits`` at ``params``, retrying golden-angle rotations."""
    points, _ = _collect_points(orbits)
    if not points:
        raise BraidError("cannot extract a braid from an empty point set")
    if len(points) == 1:
        return Extraction(BraidWord(1, ()), cfg.angle, tuple(points), (0,))
    for attempt in range(cfg.max_retries + 1):
        angle = cfg.angle + attempt * GOLDEN_ANGLE
        try:
            order, letters = _trace(params, points, angle, cfg)
        except _Degenerate as exc:
            logger.debug("projection at %.6f rad rejected: %s", angle, exc)
            continue
        return Extraction(BraidWord(len(points), tuple(letters)), angle, tuple(points), tuple(order))
    raise ExtractionError(f"no separating projection after {cfg.max_retries} retries ({len(points)} points)")


def extract_braid(orbits: Sequence[MapOrbit], params: HenonParams, cfg: ProjectionConfig = ProjectionConfig()) -> BraidWord:
    return extract(orbits, params, cfg).word


def dynamical_permutation(orbits: Sequence[MapOrbit], extraction: Extraction) -> Permutation:
    """Permutation the map induces on the projected positions of ``extraction``.

    Uses the braid convention: entry ``q`` is the position whose point lands on
    position ``q``.
    """
    _, successor = _collect_points(orbits)
    images = [0] * len(successor)
    for point_index, nxt in enumerate(successor):
        images[extraction.position_of(nxt) - 1] = extraction.position_of(point_index)
    return Permutation(tuple(images))


def proximity_pairing(parent: Extraction, daughter: Extraction) -> Dict[int, int]:
    """Send each daughter position to the position of the nearest parent point."""
    parent_xy = np.array(parent.points)
    pairing: Dict[int, int] = {}
    for index, point in enumerate(daughter.points):
        nearest = int(np.argmin(np.linalg.norm(parent_xy - np.array(point), axis=1)))
        pairing[daughter.position_of(index)] = parent.position_of(nearest)
    return pairing


def pd_cable_check(
    before: BraidWord, after: BraidWord, pairing: Optional[Mapping[int, int]] = None
) -> bool:
    """Whether ``after`` covers ``before`` the way a period-doubled orbit does.

    The permutation of ``after`` must be one cycle of twice the length of the
    single cycle of ``before``, and the 2-to-1 ``pairing`` of positions must
    intertwine the two permutations.
    """
    k = before.strands
    if after.strands != 2 * k:
        raise BraidError(f"expected {2 * k} strands after doubling, got {after.strands}")
    collapse = pair_collapse(k) if pairing is None else pairing
    if sorted(collapse) != list(range(1, 2 * k + 1)):
        return False
    fibres = sorted(collapse.values())
    if fibres != sorted(list(range(1, k + 1)) * 2):
        return False
    p_before, p_after = permutation(before), permutation(after)
    if p_before.cycle_type() != (k,) or p_after.cycle_type() != (2 * k,):
        return False
    return all(collapse[p_after(q)] == p_before(collapse[q]) for q in range(1, 2 * k + 1))


__all__ = [
    "Extraction",
    "GOLDEN_ANGLE",
    "INTERPOLATIONS",
    "ProjectionConfig",
    "dynamical_permutation",
    "extract",
    "extract_braid",
    "pd_cable_check",
    "proximity_pairing",
]
