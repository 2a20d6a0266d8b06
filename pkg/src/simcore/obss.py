"""OBSS occupancy as an alternating renewal process of bursty busy periods."""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

DEFAULT_BURST_EXPONENT = 0.85


def calibrate_obss(p: float, d: float) -> float:
    """Per-idle-boundary start probability q giving long-run busy fraction ``p``.

    Busy periods last ``d`` slots on average and are followed by a geometric
    number of idle slots with mean (1 - q)/q, so p = d/(d + (1 - q)/q) and
    q = p/(d(1 - p) + p).
    """
    if not 0.0 <= p < 1.0:
        raise DomainError(f"occupancy p must be in [0, 1), got {p}")
    if d < 1:
        raise DomainError(f"busy period d must be >= 1 slot, got {d}")
    return p / (d * (1.0 - p) + p)


def mean_busy_slots(p: float, d: int, exponent: float = DEFAULT_BURST_EXPONENT) -> float:
    """Mean busy-period length at occupancy ``p``.

    A busy period is a train of PPDUs of mean length ``d``; another PPDU
    follows with probability p**exponent, so the mean is d/(1 - p**exponent).
    """
    if not 0.0 <= p < 1.0:
        raise DomainError(f"occupancy p must be in [0, 1), got {p}")
    if exponent <= 0:
        raise DomainError(f"burst exponent must be > 0, got {exponent}")
    return d / (1.0 - p ** exponent)


class ObssSource:
    """OBSS traffic on one channel.

    Arrival times and busy lengths depend only on this source's random stream
    and its occupancy schedule. When an arrival finds the channel reserved by
    the BSS (or still busy with earlier OBSS work) its busy period is queued
    and starts as soon as the channel is released.
    """

    def __init__(self, d_slots: int, occupancy: Sequence[float], rng: np.random.Generator,
                 period_slots: Optional[int] = None, horizon: Optional[int] = None,
                 burst_exponent: float = DEFAULT_BURST_EXPONENT):
        if d_slots < 1:
            raise DomainError(f"busy period must be >= 1 slot, got {d_slots}")
        self.d = d_slots
        self.mean_schedule = [mean_busy_slots(p, d_slots, burst_exponent) for p in occupancy]
        self.q_schedule = [calibrate_obss(p, m) for p, m in zip(occupancy, self.mean_schedule)]
        self.period_slots = period_slots if len(self.q_schedule) > 1 else None
        self.rng = rng
        self.horizon = horizon

        self.busy_start = 0
        self.busy_until = 0
        self.busy_slots = 0
        self.arrivals = 0
        self.next_arrival = self._draw_arrival(0)

    def _period(self, t: int) -> int:
        if self.period_slots is None:
            return 0
        return min(t // self.period_slots, len(self.q_schedule) - 1)

    def q_at(self, t: int) -> float:
        return self.q_schedule[self._period(t)]

    def mean_at(self, t: int) -> float:
        return self.mean_schedule[self._period(t)]

    def _draw_arrival(self, t: int) -> Optional[int]:
        """First arrival at or after ``t``, redrawing at every period boundary."""
        while True:
            q = self.q_at(t)
            boundary = None
            if self.period_slots is not None:
                period = t // self.period_slots
                if period + 1 < len(self.q_schedule):
                    boundary = (period + 1) * self.period_slots

            if q > 0.0:
                candidate = t + int(self.rng.geometric(q)) - 1
                if boundary is None or candidate < boundary:
                    return candidate
            elif boundary is None:
                return None
            t = boundary

    def _draw_length(self, arrival: int) -> int:
        mean = self.mean_at(arrival)
        if mean <= 1.0:
            return 1
        return int(self.rng.geometric(1.0 / mean))

    def process_until(self, until: int, defer_until: int = 0) -> List[Tuple[int, int]]:
        """Schedule every arrival at or before ``until``; returns the new busy intervals.

        No busy period may start before ``defer_until``.
        """
        intervals = []
        while self.next_arrival is not None and self.next_arrival <= until:
            arrival = self.next_arrival
            length = self._draw_length(arrival)
            start = max(arrival, self.busy_until, defer_until)
            if start > self.busy_until:
                self.busy_start = start
            self.busy_until = start + length
            intervals.append((start, self.busy_until))
            self._account(start, self.busy_until)
            self.arrivals += 1
            self.next_arrival = self._draw_arrival(arrival + length)
        return intervals

    def _account(self, start: int, end: int) -> None:
        if self.horizon is not None:
            end = min(end, self.horizon)
        self.busy_slots += max(0, end - max(start, 0))

    def is_busy(self, t: int) -> bool:
        return self.busy_start <= t < self.busy_until

    def remaining(self, t: int) -> int:
        return self.busy_until - t if self.is_busy(t) else 0

    def next_change(self, t: int) -> Optional[int]:
        """Earliest time after ``t`` at which this channel's OBSS state can change."""
        if self.is_busy(t):
            return self.busy_until
        if self.busy_start > t:
            return self.busy_start
        return self.next_arrival


def measure_busy_fraction(p: float, d: int, n_slots: int, seed: int = 0,
                          burst_exponent: float = DEFAULT_BURST_EXPONENT) -> float:
    """Busy fraction of an undisturbed source over ``n_slots`` slots."""
    if n_slots < 1:
        raise DomainError(f"n_slots must be >= 1, got {n_slots}")
    source = ObssSource(d, [p], np.random.default_rng(seed), horizon=n_slots,
                        burst_exponent=burst_exponent)
    source.process_until(n_slots - 1)
    fraction = source.busy_slots / n_slots
    logger.debug(f"OBSS p={p} d={d}: measured {fraction:.4f} over {n_slots} slots "
                 f"({source.arrivals} busy periods)")
    return fraction
