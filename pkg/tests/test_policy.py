import numpy as np
import pytest

from src.simcore.models import AccessMode, Channel, ChannelState, ChannelStatus
from src.simcore.policy import BusyWindow, hybrid_policy_decision, npca_switch_decision

IDLE = ChannelState(ChannelStatus.IDLE)
OBSS = ChannelState(ChannelStatus.OBSS_BUSY, remaining=100)


def test_busy_primary_moves_to_idle_secondary():
    assert npca_switch_decision(OBSS, IDLE, Channel.PRIMARY) is Channel.SECONDARY


def test_idle_primary_brings_back():
    assert npca_switch_decision(IDLE, OBSS, Channel.SECONDARY) is Channel.PRIMARY
    assert npca_switch_decision(IDLE, IDLE, Channel.SECONDARY) is Channel.PRIMARY


def test_both_busy_keeps_current():
    assert npca_switch_decision(OBSS, OBSS, Channel.PRIMARY) is Channel.PRIMARY
    assert npca_switch_decision(OBSS, OBSS, Channel.SECONDARY) is Channel.SECONDARY


def test_hybrid_thresholds():
    assert hybrid_policy_decision(0, 0.5, 2000, Channel.PRIMARY).mode is AccessMode.LEGACY
    assert hybrid_policy_decision(2000, 0.5, 2000, Channel.PRIMARY).mode is AccessMode.NPCA
    assert hybrid_policy_decision(1200, 0.5, 2000, Channel.PRIMARY).mode is AccessMode.NPCA
    assert hybrid_policy_decision(1200, 0.7, 2000, Channel.PRIMARY).mode is AccessMode.LEGACY


def test_legacy_mode_returns_to_primary():
    decision = hybrid_policy_decision(0, 0.5, 2000, Channel.SECONDARY)
    assert decision.channel is Channel.PRIMARY
    assert hybrid_policy_decision(2000, 0.5, 2000, Channel.SECONDARY).channel is Channel.SECONDARY


def test_zero_window_uses_one_slot():
    assert hybrid_policy_decision(1, 0.5, 0, Channel.PRIMARY).mode is AccessMode.NPCA


def test_busy_window_counts_trailing_slots():
    window = BusyWindow(200)
    window.add(0, 100)
    window.add(150, 300)
    assert window.busy_slots(250) == 50 + 100
    assert window.busy_slots(1000) == 0


def test_first_crossing():
    window = BusyWindow(100)
    window.add(0, 1000)
    assert window.first_crossing(0, 1000, 50) == 51
    assert window.first_crossing(0, 40, 50) == 40


def test_busy_window_matches_direct_count():
    rng = np.random.default_rng(4)
    window = BusyWindow(5000)
    intervals = []
    t = 0
    for _ in range(3000):
        start = t + int(rng.integers(0, 400))
        end = start + int(rng.integers(1, 600))
        window.add(start, end)
        intervals.append((start, end))
        t = end

    def direct(now):
        return sum(max(0, min(end, now) - max(start, now - 5000)) for start, end in intervals)

    for now in range(0, t + 6000, 997):
        assert window.busy_slots(now) == direct(now)
    # stale intervals were dropped along the way
    assert len(window) < len(intervals)


def test_busy_window_merges_adjacent_intervals():
    window = BusyWindow(100)
    window.add(0, 10)
    window.add(10, 30)
    assert len(window) == 1
    assert window.busy_slots(50) == 30
    with pytest.raises(ValueError):
        window.add(20, 40)


def test_legacy_decision_names_primary():
    decision = hybrid_policy_decision(0, 0.6, 50000, Channel.SECONDARY)
    assert decision == (AccessMode.LEGACY, Channel.PRIMARY)
