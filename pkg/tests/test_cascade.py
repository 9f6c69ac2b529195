import json

import pytest

from route_invariants.braid import identity, permutation
from route_invariants.cascade import (
    FEIGENBAUM_DELTA,
    RECORD_SCHEMA,
    cable_check,
    continue_cascade,
    gamma_braid,
    record_digest,
    record_from_dict,
    record_to_dict,
    sample_window,
    scan_rows,
)
from route_invariants.errors import BraidError, CacheCorruptError, CacheVersionError, ContinuationError
from route_invariants.extraction import ProjectionConfig
from route_invariants.henon import ParameterPath, find_periodic_orbit, fixed_points


def start_orbit(path):
    params = path.at(0.0)
    return find_periodic_orbit(params, 1, fixed_points(params)[0])


@pytest.fixture(scope="module")
def cascade():
    path = ParameterPath.fixed_b(0.3, 0.5, 2.1)
    return continue_cascade(path, start_orbit(path), max_doublings=3)


def test_zero_doublings_gives_an_empty_record():
    path = ParameterPath.fixed_b(0.3, 0.5, 2.1)
    rec = continue_cascade(path, start_orbit(path), max_doublings=0)
    assert rec.doublings == ()
    assert rec.depth == 0
    assert rec.failure is None
    assert gamma_braid(rec, 0) == identity(1)
    with pytest.raises(BraidError):
        gamma_braid(rec, 1)


def test_cascade_finds_three_doublings_with_shrinking_gaps(cascade):
    a = cascade.doubling_parameters
    assert len(a) == 3
    assert cascade.failure is None
    assert abs(a[0] - 1.2675) < 1e-6
    assert abs(a[1] - 1.8125) < 1e-6
    assert a[2] - a[1] < a[1] - a[0]
    assert [st.orbit.period for st in cascade.stages] == [1, 2, 4, 8]


def test_every_accepted_orbit_has_multiplier_product_b_to_the_period(cascade):
    for stage in cascade.stages:
        for orbit in (stage.orbit, *stage.family):
            product = orbit.multipliers[0] * orbit.multipliers[1]
            assert abs(product.imag) < 1e-9
            assert product.real == pytest.approx(orbit.params.b ** orbit.period, rel=1e-6)


def test_stage_braids_grow_with_the_family(cascade):
    assert gamma_braid(cascade, 0) == identity(1)
    first = gamma_braid(cascade, 1)
    assert first.strands == 3
    assert permutation(first).cycle_type() == (2, 1)
    assert gamma_braid(cascade, 2).strands == 7
    assert permutation(gamma_braid(cascade, 3)).cycle_type() == (8, 4, 2, 1)


def test_gamma_braid_can_reproject(cascade):
    again = gamma_braid(cascade, 1, ProjectionConfig(steps=96))
    assert again.strands == 3


def test_cable_check_holds_along_the_cascade(cascade):
    for n in (1, 2):
        assert cable_check(cascade, n)
    with pytest.raises(BraidError):
        cable_check(cascade, 0)


def test_scan_rows_report_gap_ratios(cascade):
    rows = scan_rows(cascade)
    assert [r["period"] for r in rows] == [1, 2, 4]
    assert rows[0]["gap"] is None
    assert rows[2]["ratio"] > 1.0


def test_record_round_trip_keeps_the_digest(cascade):
    data = json.loads(json.dumps(record_to_dict(cascade)))
    assert data["schema"] == RECORD_SCHEMA
    restored = record_from_dict(data)
    assert restored.braids == cascade.braids
    assert restored.doubling_parameters == cascade.doubling_parameters
    assert record_digest(restored) == record_digest(cascade)


def test_record_from_dict_rejects_bad_input(cascade):
    data = record_to_dict(cascade)
    with pytest.raises(CacheVersionError):
        record_from_dict({**data, "schema": "route-invariants/cascade-record/0"})
    broken = dict(data)
    del broken["doublings"]
    with pytest.raises(CacheCorruptError):
        record_from_dict(broken)


def test_lost_stage_is_reported(record):
    trimmed = type(record)(
        path=record.path,
        initial_orbit=record.initial_orbit,
        doublings=record.doublings,
        stages=record.stages[:1],
        failure="stage 1: lost",
    )
    with pytest.raises(ContinuationError):
        gamma_braid(trimmed, 1)


def test_sample_window():
    assert sample_window([], 0) == 0.5
    assert sample_window([0.4], 0) == pytest.approx(0.2)
    assert sample_window([0.4], 1) == pytest.approx(0.4 + 0.25 * 0.6)
    assert sample_window([0.4, 0.8], 1) == pytest.approx(0.6)
    assert sample_window([0.4, 0.8], 2) == pytest.approx(0.8 + 0.2 / FEIGENBAUM_DELTA)


def test_record_validates_periods(record):
    with pytest.raises(BraidError):
        type(record)(
            path=record.path,
            initial_orbit=record.initial_orbit,
            doublings=record.doublings,
            stages=tuple(reversed(record.stages)),
        )


def test_negative_doublings_rejected():
    path = ParameterPath.fixed_b(0.3, 0.5, 2.1)
    with pytest.raises(BraidError):
        continue_cascade(path, start_orbit(path), max_doublings=-1)
