import numpy as np
import pytest

from src.simcore.models import SimConfig
from src.simcore.obss import (DEFAULT_BURST_EXPONENT, ObssSource, calibrate_obss,
                              mean_busy_slots, measure_busy_fraction)
from src.utils.errors import DomainError


def test_calibration_examples():
    assert calibrate_obss(0.0, 37) == 0.0
    assert calibrate_obss(0.5, 1) == pytest.approx(0.5)
    assert calibrate_obss(0.8, 100) == pytest.approx(0.038462, abs=1e-6)


def test_calibration_preconditions():
    with pytest.raises(DomainError):
        calibrate_obss(1.0, 10)
    with pytest.raises(DomainError):
        calibrate_obss(0.5, 0)


@pytest.mark.parametrize("p", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8])
def test_long_run_busy_fraction(p):
    d = SimConfig().obss_slots
    assert measure_busy_fraction(p, d, 10 ** 8, seed=7) == pytest.approx(p, abs=0.01)


def test_mean_busy_length_grows_with_occupancy():
    assert mean_busy_slots(0.0, 471) == 471
    assert mean_busy_slots(0.5, 100) == pytest.approx(224.610448, abs=1e-6)
    assert mean_busy_slots(0.8, 10, exponent=1.0) == pytest.approx(50.0)
    with pytest.raises(DomainError):
        mean_busy_slots(0.5, 100, exponent=0.0)


def test_busy_lengths_follow_the_mean():
    source = ObssSource(100, [0.5], np.random.default_rng(11))
    intervals = source.process_until(10 ** 7)
    lengths = np.array([end - start for start, end in intervals])
    assert lengths.min() >= 1
    assert lengths.mean() == pytest.approx(mean_busy_slots(0.5, 100), rel=0.03)


def test_default_exponent_matches_source():
    source = ObssSource(100, [0.3], np.random.default_rng(0))
    assert source.mean_at(0) == pytest.approx(mean_busy_slots(0.3, 100, DEFAULT_BURST_EXPONENT))


def test_zero_occupancy_never_arrives():
    source = ObssSource(50, [0.0], np.random.default_rng(1))
    assert source.next_arrival is None
    assert source.process_until(10 ** 6) == []
    assert not source.is_busy(0)


def test_schedule_redraws_at_period_boundary():
    source = ObssSource(20, [0.0, 0.5], np.random.default_rng(3), period_slots=1000)
    assert source.next_arrival >= 1000
    assert source.q_at(999) == 0.0
    assert source.q_at(1000) == pytest.approx(calibrate_obss(0.5, mean_busy_slots(0.5, 20)))
    # past the last period the last value holds
    assert source.q_at(10 ** 6) == source.q_at(1000)


def test_deferred_periods_queue_back_to_back():
    source = ObssSource(10, [0.9], np.random.default_rng(5))
    intervals = source.process_until(500, defer_until=1000)
    assert intervals
    assert intervals[0][0] == 1000
    for (s0, e0), (s1, _) in zip(intervals, intervals[1:]):
        assert s1 == e0
    assert source.is_busy(1000)
    assert source.remaining(1000) == intervals[-1][1] - 1000


def test_arrivals_do_not_depend_on_deferral():
    plain = ObssSource(10, [0.4], np.random.default_rng(9))
    deferred = ObssSource(10, [0.4], np.random.default_rng(9))
    plain.process_until(2000)
    deferred.process_until(2000, defer_until=1500)
    assert plain.arrivals == deferred.arrivals
    assert plain.next_arrival == deferred.next_arrival


def test_horizon_clamps_accounting():
    source = ObssSource(100, [0.5], np.random.default_rng(2), horizon=150)
    source.process_until(10 ** 4)
    assert source.busy_slots <= 150
