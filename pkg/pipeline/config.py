"""Configuration for the invariant pipeline: defaults, JSON file, environment, flags."""
from __future__ import annotations

import cmath
import dataclasses
import json
import math
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

from route_invariants.arithmetic import is_prime
from route_invariants.burau import unit_root
from route_invariants.errors import ConfigError
from route_invariants.extraction import INTERPOLATIONS

STATE_DIR_ENV = "ROUTE_INVARIANTS_STATE_DIR"
NO_CACHE_ENV = "ROUTE_INVARIANTS_NO_CACHE"
TRUTHY = {"1", "true", "yes"}


def parse_trace_point(text: str) -> complex:
    """Parse ``-1``, ``i``, ``0.5+2j``, ``unit:5`` (primitive 5th root of unity) or ``polar:r,θ``."""
    value = text.strip().lower()
    try:
        if value.startswith("unit:"):
            return unit_root(int(value[5:]))
        if value.startswith("polar:"):
            r, theta = (float(x) for x in value[6:].split(","))
            return cmath.rect(r, theta)
        if value in {"i", "+i"}:
            return 1j
        if value == "-i":
            return -1j
        return complex(value.replace("i", "j"))
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad trace point {text!r}: {exc}") from exc


@dataclasses.dataclass(frozen=True)
class PipelineConfig:
    b: float = 0.3
    a_min: float = 0.5
    a_max: float = 2.1
    b_end: Optional[float] = None
    initial_period: int = 1
    initial_seed: Optional[Tuple[float, float]] = None
    max_doublings: int = 4
    moduli: Tuple[int, ...] = (2,)
    primes: Tuple[int, ...] = (2,)
    trace_points: Tuple[str, ...] = ("-1", "i", "unit:5")
    depth: int = 8
    newton_tolerance: float = 1e-11
    doubling_tolerance: float = 1e-10
    element_cap: int = 10_000_000
    interpolation: str = "isotopy"
    interpolation_steps: int = 64
    projection_angle: float = 0.0
    seed: int = 0
    workers: int = 4
    output: Optional[Path] = None

    def validate(self) -> "PipelineConfig":
        if not self.b > 0 or (self.b_end is not None and not self.b_end > 0):
            raise ConfigError("b must be positive along the whole path")
        if not self.a_max > self.a_min:
            raise ConfigError(f"a_max ({self.a_max}) must exceed a_min ({self.a_min})")
        if self.initial_period < 1:
            raise ConfigError("initial_period must be at least 1")
        if self.max_doublings < 0:
            raise ConfigError("max_doublings must be non-negative")
        if self.depth < 1:
            raise ConfigError("depth must be at least 1")
        if not self.moduli or any(n < 2 for n in self.moduli):
            raise ConfigError(f"every modulus must be at least 2, got {list(self.moduli)}")
        bad = [p for p in self.primes if not is_prime(p)]
        if bad:
            raise ConfigError(f"not prime: {bad}")
        for label in self.trace_points:
            if parse_trace_point(label) == 0:
                raise ConfigError("trace points must be nonzero")
        if not (self.newton_tolerance > 0 and self.doubling_tolerance > 0):
            raise ConfigError("tolerances must be positive")
        if self.element_cap < 1:
            raise ConfigError("element_cap must be positive")
        if self.interpolation not in INTERPOLATIONS:
            raise ConfigError(f"interpolation must be one of {INTERPOLATIONS}")
        if self.interpolation_steps < 2:
            raise ConfigError("interpolation_steps must be at least 2")
        if not math.isfinite(self.projection_angle):
            raise ConfigError("projection_angle must be finite")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        return self

    def trace_values(self) -> Dict[str, complex]:
        return {label: parse_trace_point(label) for label in self.trace_points}

    def echo(self) -> Dict[str, Any]:
        """JSON-ready view of the settings that determine the report."""
        data = dataclasses.asdict(self)
        data.pop("output")
        data.pop("workers")
        for key in ("moduli", "primes", "trace_points"):
            data[key] = list(data[key])
        if data["initial_seed"] is not None:
            data["initial_seed"] = list(data["initial_seed"])
        return data


_FIELDS = {f.name: f for f in dataclasses.fields(PipelineConfig)}
_TUPLE_FIELDS = {"moduli": int, "primes": int, "trace_points": str}


def _coerce(name: str, value: Any) -> Any:
    if value is None:
        return None
    if name in _TUPLE_FIELDS:
        items = value.split(",") if isinstance(value, str) else value
        return tuple(_TUPLE_FIELDS[name](x) for x in items)
    if name == "initial_seed":
        x, y = value
        return (float(x), float(y))
    if name == "output":
        return Path(value)
    default = _FIELDS[name].default
    if isinstance(default, bool):
        return bool(value)
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float) or name == "b_end":
        return float(value)
    return value


def merge_config(base: PipelineConfig, overrides: Mapping[str, Any]) -> PipelineConfig:
    unknown = sorted(set(overrides) - set(_FIELDS))
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    try:
        values = {k: _coerce(k, v) for k, v in overrides.items()}
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad configuration value: {exc}") from exc
    return dataclasses.replace(base, **values)


def load_config_file(path: Path) -> Dict[str, Any]:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def build_config(
    file: Optional[Path] = None, flags: Optional[Mapping[str, Any]] = None
) -> PipelineConfig:
    """Defaults, then the config file, then flags that were given on the command line."""
    config = PipelineConfig()
    if file is not None:
        config = merge_config(config, load_config_file(file))
    given = {k: v for k, v in (flags or {}).items() if v is not None}
    return merge_config(config, given).validate()


def resolve_state_dir(explicit: Optional[Path] = None) -> Path:
    if explicit:
        return explicit
    env_dir = os.getenv(STATE_DIR_ENV)
    if env_dir:
        return Path(env_dir)
    return Path.home() / ".cache" / "route-invariants"


def cache_disabled(flag: bool = False) -> bool:
    if flag:
        return True
    return os.getenv(NO_CACHE_ENV, "").lower() in TRUTHY


__all__ = [
    "NO_CACHE_ENV",
    "PipelineConfig",
    "STATE_DIR_ENV",
    "build_config",
    "cache_disabled",
    "load_config_file",
    "merge_config",
    "parse_trace_point",
    "resolve_state_dir",
]
