import math

import pytest

from wakedep.dependability import (
    AvailabilityRecord,
    FailureModel,
    HazardSingularityError,
    hazard_at,
    reliability_at,
    steady_state_availability,
)
from oracles import integrate_hazard


def test_reliability_basics():
    m = FailureModel(shape=1.0, scale=2.0)
    assert reliability_at(m, 0.0) == 1.0
    assert reliability_at(m, 2.0) == pytest.approx(math.exp(-1.0), abs=1e-12)


def test_reliability_weibull_closed_form_vs_quadrature():
    m = FailureModel(shape=2.0, scale=1.0)
    assert reliability_at(m, 1.0) == pytest.approx(math.exp(-1.0), abs=1e-12)
    # Cross-check against exp(-integral of hazard), computed numerically.
    cum = integrate_hazard(m, 1.0)
    assert reliability_at(m, 1.0) == pytest.approx(math.exp(-cum), abs=1e-9)


def test_reliability_monotone_decreasing():
    m = FailureModel(shape=1.7, scale=3.0)
    ts = [0.0, 0.5, 1.0, 2.0, 5.0, 20.0]
    values = [reliability_at(m, t) for t in ts]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert reliability_at(m, 1e6) < 1e-300 or reliability_at(m, 1e6) == 0.0


def test_reliability_rejects_negative_time():
    m = FailureModel(shape=1.0, scale=1.0)
    with pytest.raises(ValueError):
        reliability_at(m, -0.1)


def test_model_validation():
    with pytest.raises(ValueError):
        FailureModel(shape=0.0, scale=1.0)
    with pytest.raises(ValueError):
        FailureModel(shape=1.0, scale=-2.0)


def test_hazard_constant_for_exponential():
    m = FailureModel(shape=1.0, scale=2.0)
    for t in (0.0, 0.3, 5.0, 100.0):
        assert hazard_at(m, t) == pytest.approx(0.5, abs=1e-15)


def test_hazard_matches_finite_difference_of_log_reliability():
    m = FailureModel(shape=2.0, scale=1.0)
    t, h = 3.0, 1e-6
    fd = -(math.log(reliability_at(m, t + h)) - math.log(reliability_at(m, t - h))) / (2 * h)
    assert hazard_at(m, t) == pytest.approx(6.0, abs=1e-12)
    assert hazard_at(m, t) == pytest.approx(fd, rel=1e-6)


def test_hazard_singularity_at_zero():
    with pytest.raises(HazardSingularityError):
        hazard_at(FailureModel(shape=0.5, scale=1.0), 0.0)
    # k > 1 vanishes at 0, k = 1 is the constant rate.
    assert hazard_at(FailureModel(shape=1.5, scale=1.0), 0.0) == 0.0
    assert hazard_at(FailureModel(shape=1.0, scale=4.0), 0.0) == 0.25


def test_memoryless_identity_for_exponential():
    m = FailureModel(shape=1.0, scale=3.0)
    for s, t in [(0.1, 0.2), (1.0, 2.0), (5.0, 0.5)]:
        lhs = reliability_at(m, s + t)
        rhs = reliability_at(m, s) * reliability_at(m, t)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_steady_state_availability():
    assert steady_state_availability(AvailabilityRecord(9.0, 1.0)) == pytest.approx(0.9)
    assert steady_state_availability(AvailabilityRecord(1.0, 0.0)) == 1.0
    assert steady_state_availability(AvailabilityRecord(1.0, 1.0)) == 0.5


def test_availability_record_validation():
    with pytest.raises(ValueError):
        AvailabilityRecord(0.0, 0.0)
    with pytest.raises(ValueError):
        AvailabilityRecord(-1.0, 1.0)
