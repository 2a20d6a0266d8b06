"""Binary exponential backoff of saturated stations."""

from typing import List

import numpy as np

from src.simcore.models import StationState


def new_stations(n: int, cw_min: int, rng: np.random.Generator) -> List[StationState]:
    """Fresh stations at stage 0 with counters drawn from [0, cw_min - 1]."""
    return [StationState(backoff_counter=int(c), stage=0, cw=cw_min)
            for c in rng.integers(0, cw_min, size=n)]


def backoff_step(stations: List[StationState], channel_idle: bool) -> List[int]:
    """Advance the backoff by one slot boundary; returns indices that transmit now.

    Stations whose counter already reached 0 transmit in this slot and nobody
    decrements. Otherwise every counter decrements once the idle slot has
    elapsed. A busy slot freezes all counters.
    """
    if not channel_idle:
        return []

    tx_set = [i for i, s in enumerate(stations) if s.backoff_counter == 0]
    if not tx_set:
        for s in stations:
            s.backoff_counter -= 1
    return tx_set


def resolve_attempt(stations: List[StationState], tx_set: List[int], rng: np.random.Generator,
                    cw_min: int, cw_max: int) -> bool:
    """Update the transmitters after an attempt; True when it was a success.

    A sole transmitter succeeds and returns to stage 0. Colliding stations
    move one stage up (the window saturates at cw_max, frames are never
    dropped). Every transmitter redraws its counter from its new window.
    """
    success = len(tx_set) == 1
    for i in tx_set:
        s = stations[i]
        if success:
            s.stage = 0
        elif cw_min * 2 ** s.stage < cw_max:
            s.stage += 1
        s.cw = min(cw_min * 2 ** s.stage, cw_max)
        s.backoff_counter = int(rng.integers(0, s.cw))
    return success
