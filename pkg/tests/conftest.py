import math
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from route_invariants.cascade import CascadeRecord, CascadeStage, sample_window  # noqa: E402
from route_invariants.extraction import extract_braid  # noqa: E402
from route_invariants.henon import (  # noqa: E402
    DoublingPoint,
    ParameterPath,
    find_periodic_orbit,
    fixed_points,
    flip_parameter_fixed_point,
)


def _period_two_seed(a: float, b: float):
    # the two points satisfy p + q = 1 + b and pq = (1 + b)² - a
    s = 1.0 + b
    root = math.sqrt(s * s - 4.0 * (s * s - a))
    p, q = (s + root) / 2.0, (s - root) / 2.0
    return (p, q)


def make_record(b: float = 0.3) -> CascadeRecord:
    """One-doubling record built from the closed-form fixed point and 2-orbit."""
    path = ParameterPath.fixed_b(b, 0.5, 2.1)
    s1 = (flip_parameter_fixed_point(b) - path.start.a) / (path.end.a - path.start.a)

    def fixed_orbit(s):
        params = path.at(s)
        return find_periodic_orbit(params, 1, fixed_points(params)[0])

    doubling = DoublingPoint(s=s1, params=path.at(s1), orbit=fixed_orbit(s1))
    sample0 = sample_window([s1], 0)
    sample1 = sample_window([s1], 1)
    params1 = path.at(sample1)
    two = find_periodic_orbit(params1, 2, _period_two_seed(params1.a, b))

    family0 = (fixed_orbit(sample0),)
    family1 = (fixed_orbit(sample1), two)
    stages = (
        CascadeStage(0, family0[0], 0.0, sample0, family0, extract_braid(family0, path.at(sample0))),
        CascadeStage(1, two, sample1, sample1, family1, extract_braid(family1, params1)),
    )
    return CascadeRecord(path=path, initial_orbit=family0[0], doublings=(doubling,), stages=stages)


@pytest.fixture
def record_factory():
    return make_record


@pytest.fixture
def record():
    return make_record()
