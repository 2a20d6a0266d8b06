import numpy as np

from src.simcore.backoff import backoff_step, new_stations, resolve_attempt
from src.simcore.models import StationState


def _stations(*counters):
    return [StationState(backoff_counter=c, stage=0, cw=16) for c in counters]


def test_idle_slot_decrements_everyone():
    stations = _stations(3, 1, 7)
    assert backoff_step(stations, channel_idle=True) == []
    assert [s.backoff_counter for s in stations] == [2, 0, 6]


def test_zero_counter_transmits_without_decrement():
    stations = _stations(3, 0, 7)
    assert backoff_step(stations, channel_idle=True) == [1]
    assert [s.backoff_counter for s in stations] == [3, 0, 7]


def test_two_zero_counters_collide():
    stations = _stations(0, 4, 0)
    assert backoff_step(stations, channel_idle=True) == [0, 2]


def test_busy_slot_freezes_counters():
    stations = _stations(3, 1, 7)
    assert backoff_step(stations, channel_idle=False) == []
    assert [s.backoff_counter for s in stations] == [3, 1, 7]


def test_collision_doubles_window():
    rng = np.random.default_rng(0)
    stations = _stations(0, 4, 0)
    assert resolve_attempt(stations, [0, 2], rng, 16, 1024) is False
    for i in (0, 2):
        assert stations[i].stage == 1
        assert stations[i].cw == 32
        assert 0 <= stations[i].backoff_counter < 32
    assert stations[1].backoff_counter == 4


def test_window_saturates_at_cw_max():
    rng = np.random.default_rng(0)
    stations = [StationState(0, stage=6, cw=1024), StationState(0, stage=6, cw=1024)]
    resolve_attempt(stations, [0, 1], rng, 16, 1024)
    assert all(s.stage == 6 and s.cw == 1024 for s in stations)
    assert all(s.is_legal(16, 1024) for s in stations)


def test_success_resets_stage():
    rng = np.random.default_rng(0)
    stations = [StationState(0, stage=3, cw=128)]
    assert resolve_attempt(stations, [0], rng, 16, 1024) is True
    assert stations[0].stage == 0
    assert stations[0].cw == 16
    assert 0 <= stations[0].backoff_counter < 16


def test_fresh_stations_are_legal():
    stations = new_stations(50, 16, np.random.default_rng(4))
    assert len(stations) == 50
    assert all(s.is_legal(16, 1024) for s in stations)
