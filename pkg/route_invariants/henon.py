"""Periodic orbits of the Hénon family ``H(x, y) = (a - x² - b·y, x)``.

Orbits are found by Newton iteration on ``f^k(z) - z`` with the Jacobian built
by the chain rule, followed along straight parameter segments by natural
continuation, and period doublings are bracketed through the sign of
``g = 1 + tr(M) + det(M) = (1 + λ₁)(1 + λ₂)`` where ``M`` is the monodromy
matrix of the orbit.
"""
from __future__ import annotations

import dataclasses
import logging
import math
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError, ContinuationError, DoublingNotFoundError, NonMinimalPeriodError, OrbitError

logger = logging.getLogger(__name__)

Point = Tuple[float, float]


@dataclasses.dataclass(frozen=True)
class HenonParams:
    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.b > 0:
            raise ConfigError(f"the Hénon map needs b > 0 (orientation preserving), got b={self.b}")


@dataclasses.dataclass(frozen=True)
class OrbitSettings:
    tolerance: float = 1e-11
    max_iterations: int = 60
    divergence_radius: float = 1e6

    @property
    def minimal_period_tolerance(self) -> float:
        return 10 * self.tolerance


DEFAULT_ORBIT_SETTINGS = OrbitSettings()


@dataclasses.dataclass(frozen=True)
class MapOrbit:
    """A periodic orbit together with its closing residual and Floquet data."""

    params: HenonParams
    period: int
    points: Tuple[Point, ...]
    residual: float
    multipliers: Tuple[complex, complex]
    monodromy: Tuple[Tuple[float, float], Tuple[float, float]]

    @property
    def crossing_value(self) -> float:
        """``(1 + λ₁)(1 + λ₂)``; changes sign when a multiplier passes through -1."""
        (m00, m01), (m10, m11) = self.monodromy
        return 1.0 + (m00 + m11) + (m00 * m11 - m01 * m10)

    def flip_direction(self) -> np.ndarray:
        """Unit eigenvector of the multiplier closest to -1."""
        values, vectors = np.linalg.eig(np.array(self.monodromy))
        idx = int(np.argmin(np.abs(values + 1.0)))
        vector = np.real(vectors[:, idx])
        return vector / np.linalg.norm(vector)

    def seed(self) -> np.ndarray:
        return np.array(self.points[0], dtype=float)


def henon_step(params: HenonParams, point: Sequence[float]) -> Point:
    x, y = point
    return (params.a - x * x - params.b * y, x)


def henon_jacobian(params: HenonParams, point: Sequence[float]) -> np.ndarray:
    return np.array([[-2.0 * point[0], -params.b], [1.0, 0.0]])


def fixed_points(params: HenonParams) -> List[Point]:
    """Real fixed points, roots of ``x² + (1 + b)x - a = 0`` with ``y = x``, largest first."""
    s = 1.0 + params.b
    disc = s * s + 4.0 * params.a
    if disc < 0:
        return []
    root = math.sqrt(disc)
    return [(x, x) for x in ((-s + root) / 2.0, (-s - root) / 2.0)]


def flip_parameter_fixed_point(b: float) -> float:
    """``a`` at which the fixed point ``x = (1 + b)/2`` has multiplier -1."""
    return 3.0 * (1.0 + b) ** 2 / 4.0


def flip_parameter_period_two(b: float) -> float:
    """``a`` at which the period-two orbit has multiplier -1."""
    return (1.0 + b) ** 2 + (1.0 - b) ** 2 / 4.0


def _trajectory(
    params: HenonParams, start: np.ndarray, steps: int, escape_radius: float = math.inf
) -> Tuple[List[Point], np.ndarray, np.ndarray]:
    points: List[Point] = []
    jac = np.eye(2)
    z = (float(start[0]), float(start[1]))
    for step in range(steps + 1):
        if not (math.isfinite(z[0]) and math.isfinite(z[1])) or math.hypot(*z) > escape_radius:
            raise OrbitError(f"trajectory escaped at step {step} (|z| > {escape_radius:g})")
        if step == steps:
            break
        points.append(z)
        with np.errstate(over="raise", invalid="raise"):
            try:
                jac = henon_jacobian(params, z) @ jac
            except FloatingPointError as exc:
                raise OrbitError(f"monodromy overflowed at step {step}") from exc
        z = henon_step(params, z)
    return points, np.array(z), jac


def _proper_divisors(k: int) -> List[int]:
    return [d for d in range(1, k) if k % d == 0]


def find_periodic_orbit(
    params: HenonParams,
    period: int,
    seed: Sequence[float],
    settings: OrbitSettings = DEFAULT_ORBIT_SETTINGS,
) -> MapOrbit:
    """Newton iteration for a point of minimal period ``period``."""
    if period < 1:
        raise ConfigError(f"period must be at least 1, got {period}")
    z = np.array(seed, dtype=float)
    eye = np.eye(2)
    for _ in range(settings.max_iterations):
        _, end, jac = _trajectory(params, z, period, settings.divergence_radius)
        residual_vec = end - z
        if not np.all(np.isfinite(residual_vec)):
            raise OrbitError(f"Newton iterate left the finite range (period {period})")
        if np.linalg.norm(residual_vec) < settings.tolerance * 1e-2:
            break
        try:
            delta = np.linalg.solve(jac - eye, -residual_vec)
        except np.linalg.LinAlgError as exc:
            raise OrbitError(f"singular Newton system for period {period}") from exc
        z = z + delta
        if not np.all(np.isfinite(z)) or np.linalg.norm(z) > settings.divergence_radius:
            raise OrbitError(f"Newton iteration diverged for period {period}")
        if np.linalg.norm(delta) < settings.tolerance * 1e-3:
            break

    points, end, jac = _trajectory(params, z, period)
    residual = float(np.linalg.norm(end - np.array(points[0])))
    if not residual < settings.tolerance:
        raise OrbitError(
            f"Newton did not converge for period {period} at a={params.a:.12g} (residual {residual:.3e})"
        )

    for divisor in _proper_divisors(period):
        gap = float(np.linalg.norm(np.array(points[divisor % period]) - np.array(points[0])))
        if gap < settings.minimal_period_tolerance:
            raise NonMinimalPeriodError(
                f"orbit closes after {divisor} steps; requested period {period}", divisor=divisor
            )

    values = np.linalg.eigvals(jac)
    multipliers = tuple(sorted((complex(v) for v in values), key=lambda c: (c.real, c.imag)))
    return MapOrbit(
        params=params,
        period=period,
        points=tuple(points),
        residual=residual,
        multipliers=multipliers,  # type: ignore[arg-type]
        monodromy=((float(jac[0, 0]), float(jac[0, 1])), (float(jac[1, 0]), float(jac[1, 1]))),
    )


@dataclasses.dataclass(frozen=True)
class ParameterPath:
    """Straight segment ``start → end`` in the ``(a, b)`` plane, parametrised by ``s ∈ [0, 1]``."""

    start: HenonParams
    end: HenonParams

    @classmethod
    def fixed_b(cls, b: float, a_min: float, a_max: float) -> "ParameterPath":
        if not a_max > a_min:
            raise ConfigError(f"a_max must exceed a_min, got [{a_min}, {a_max}]")
        return cls(HenonParams(a_min, b), HenonParams(a_max, b))

    @property
    def length(self) -> float:
        return math.hypot(self.end.a - self.start.a, self.end.b - self.start.b)

    def at(self, s: float) -> HenonParams:
        return HenonParams(
            self.start.a + s * (self.end.a - self.start.a),
            self.start.b + s * (self.end.b - self.start.b),
        )

    def describe(self) -> dict:
        return {"start": {"a": self.start.a, "b": self.start.b}, "end": {"a": self.end.a, "b": self.end.b}}


@dataclasses.dataclass(frozen=True)
class ContinuationSettings:
    max_step: float = 0.005
    min_step: float = 1e-13
    growth: float = 1.5


def continue_orbit(
    path: ParameterPath,
    orbit: MapOrbit,
    s_from: float,
    s_to: float,
    initial_step: Optional[float] = None,
    continuation: ContinuationSettings = ContinuationSettings(),
    settings: OrbitSettings = DEFAULT_ORBIT_SETTINGS,
) -> Iterator[Tuple[float, MapOrbit]]:
    """Yield ``(s, orbit)`` along the branch from ``s_from`` to ``s_to`` (inclusive)."""
    direction = 1.0 if s_to >= s_from else -1.0
    s = s_from
    current = orbit
    step = min(continuation.max_step, initial_step or continuation.max_step)
    while direction * (s_to - s) > 0:
        trial = s + direction * min(step, abs(s_to - s))
        try:
            nxt = find_periodic_orbit(path.at(trial), current.period, current.seed(), settings)
        except OrbitError as exc:
            step /= 2.0
            if step < continuation.min_step:
                raise ContinuationError(
                    f"lost the period-{current.period} branch near s={s:.12g}: {exc}"
                ) from exc
            continue
        s, current = trial, nxt
        yield s, current
        step = min(continuation.max_step, step * continuation.growth)


@dataclasses.dataclass(frozen=True)
class DoublingPoint:
    """Parameter at which the orbit's crossing value changes sign."""

    s: float
    params: HenonParams
    orbit: MapOrbit


def locate_doubling(
    path: ParameterPath,
    orbit: MapOrbit,
    s_from: float = 0.0,
    s_to: float = 1.0,
    tolerance: float = 1e-10,
    initial_step: Optional[float] = None,
    continuation: ContinuationSettings = ContinuationSettings(),
    settings: OrbitSettings = DEFAULT_ORBIT_SETTINGS,
) -> DoublingPoint:
    """Scan the branch for a sign change of the crossing value, then bisect."""
    lo_s, lo = s_from, orbit
    g_lo = lo.crossing_value
    bracket: Optional[Tuple[float, MapOrbit, float, MapOrbit]] = None
    for s, current in continue_orbit(path, orbit, s_from, s_to, initial_step, continuation, settings):
        g = current.crossing_value
        if (g_lo > 0) != (g > 0):
            bracket = (lo_s, lo, s, current)
            break
        lo_s, lo, g_lo = s, current, g
    if bracket is None:
        raise DoublingNotFoundError(
            f"no multiplier crosses -1 for the period-{orbit.period} orbit on s in [{s_from:.6g}, {s_to:.6g}]"
        )

    lo_s, lo, hi_s, hi = bracket
    positive_low = lo.crossing_value > 0
    s_tolerance = tolerance / max(path.length, 1e-300)
    while hi_s - lo_s > s_tolerance:
        mid_s = 0.5 * (lo_s + hi_s)
        try:
            mid = find_periodic_orbit(path.at(mid_s), lo.period, lo.seed(), settings)
        except OrbitError as exc:
            raise ContinuationError(f"bisection lost the orbit at s={mid_s:.12g}: {exc}") from exc
        if (mid.crossing_value > 0) == positive_low:
            lo_s, lo = mid_s, mid
        else:
            hi_s, hi = mid_s, mid
    s_star = 0.5 * (lo_s + hi_s)
    at_star = find_periodic_orbit(path.at(s_star), lo.period, lo.seed(), settings)
    logger.debug("period %d doubles at a=%.12f", orbit.period, at_star.params.a)
    return DoublingPoint(s=s_star, params=at_star.params, orbit=at_star)


def detect_period_doubling(
    p0: HenonParams,
    p1: HenonParams,
    orbit: MapOrbit,
    tolerance: float = 1e-10,
    continuation: ContinuationSettings = ContinuationSettings(),
    settings: OrbitSettings = DEFAULT_ORBIT_SETTINGS,
) -> DoublingPoint:
    """Locate the doubling of ``orbit`` (valid at ``p0``) on the segment ``p0 → p1``."""
    return locate_doubling(
        ParameterPath(p0, p1), orbit, 0.0, 1.0, tolerance, None, continuation, settings
    )


def pick_up_daughter(
    path: ParameterPath,
    doubling: DoublingPoint,
    offsets: Sequence[float] = (1e-8, 1e-7, 1e-6, 1e-5),
    displacements: Sequence[float] = (1e-4, 1e-3),
    jitter: Optional[Callable[[], np.ndarray]] = None,
    jitter_attempts: int = 8,
    settings: OrbitSettings = DEFAULT_ORBIT_SETTINGS,
) -> Tuple[float, MapOrbit]:
    """Find the doubled orbit just past ``doubling``.

    The seed is a parent point displaced along the flip eigenvector.  Offsets
    are parameter distances past the doubling; small offsets keep the daughter
    within reach of the displaced seed.
    """
    parent = doubling.orbit
    direction = parent.flip_direction()
    base = parent.seed()
    length = max(path.length, 1e-300)
    last_error: Optional[Exception] = None
    for displacement in displacements:
        for offset in offsets:
            s = doubling.s + offset / length
            for sign in (1.0, -1.0):
                try:
                    daughter = find_periodic_orbit(
                        path.at(s), 2 * parent.period, base + sign * displacement * direction, settings
                    )
                except OrbitError as exc:
                    last_error = exc
                    continue
                return s, daughter
    if jitter is not None:
        s = doubling.s + offsets[-1] / length
        for _ in range(jitter_attempts):
            try:
                return s, find_periodic_orbit(
                    path.at(s), 2 * parent.period, base + displacements[-1] * jitter(), settings
                )
            except OrbitError as exc:
                last_error = exc
    raise OrbitError(f"could not pick up the period-{2 * parent.period} orbit: {last_error}")


def follow_branch(
    path: ParameterPath,
    orbit: MapOrbit,
    s_from: float,
    targets: Sequence[float],
    initial_step: Optional[float] = None,
    continuation: ContinuationSettings = ContinuationSettings(),
    settings: OrbitSettings = DEFAULT_ORBIT_SETTINGS,
) -> List[MapOrbit]:
    """Continue ``orbit`` through increasing ``targets`` and return the orbit at each."""
    found: List[MapOrbit] = []
    s, current, step = s_from, orbit, initial_step
    for target in targets:
        if target == s:
            found.append(current)
            continue
        for s_new, nxt in continue_orbit(path, current, s, target, step, continuation, settings):
            s, current = s_new, nxt
        step = None
        found.append(current)
    return found


__all__ = [
    "ContinuationSettings",
    "DEFAULT_ORBIT_SETTINGS",
    "DoublingPoint",
    "HenonParams",
    "MapOrbit",
    "OrbitSettings",
    "ParameterPath",
    "continue_orbit",
    "detect_period_doubling",
    "find_periodic_orbit",
    "fixed_points",
    "flip_parameter_fixed_point",
    "flip_parameter_period_two",
    "follow_branch",
    "henon_jacobian",
    "henon_step",
    "locate_doubling",
    "pick_up_daughter",
]
