"""Channel selection for NPCA and the occupancy-driven hybrid controller."""

from bisect import bisect_right
from typing import List, NamedTuple

from src.simcore.models import AccessMode, Channel, ChannelState, ChannelStatus


def npca_switch_decision(primary: ChannelState, secondary: ChannelState,
                         current: Channel) -> Channel:
    """Channel the BSS should contend on at this boundary.

    Move to the secondary channel when the primary is held by OBSS traffic
    and the secondary is idle; come back as soon as the primary is idle.
    Backoff counters are left untouched by a switch.
    """
    if primary.status is ChannelStatus.OBSS_BUSY and secondary.is_idle:
        return Channel.SECONDARY
    if primary.is_idle:
        return Channel.PRIMARY
    return current


class PolicyDecision(NamedTuple):
    mode: AccessMode
    channel: Channel


def hybrid_policy_decision(busy_slots: int, thre1: float, k1: int,
                           current: Channel) -> PolicyDecision:
    """Pick NPCA when the estimated primary occupancy exceeds ``thre1``.

    The estimate is busy_slots / max(1, k1) over the trailing window. In NPCA
    mode the channel is left to the NPCA rule, starting from ``current``;
    Legacy mode always operates on the primary channel.
    """
    p1_hat = busy_slots / max(1, k1)
    if p1_hat > thre1:
        return PolicyDecision(AccessMode.NPCA, current)
    return PolicyDecision(AccessMode.LEGACY, Channel.PRIMARY)


class BusyWindow:
    """OBSS busy intervals of the primary channel over a trailing window of k slots.

    Intervals arrive in time order and never overlap. A running prefix sum
    over them answers each window query with two binary searches.
    """

    PRUNE_BATCH = 1024

    def __init__(self, k: int):
        self.k = max(1, k)
        self._starts: List[int] = []
        self._ends: List[int] = []
        # busy slots in every interval before index i
        self._before: List[int] = []
        self._total = 0

    def __len__(self) -> int:
        return len(self._starts)

    def add(self, start: int, end: int) -> None:
        if end <= start:
            return
        if self._ends and start <= self._ends[-1]:
            if start < self._ends[-1]:
                raise ValueError(f"interval [{start}, {end}) overlaps the previous one")
            self._ends[-1] = end
        else:
            self._starts.append(start)
            self._ends.append(end)
            self._before.append(self._total)
        self._total += end - start

    def busy_slots(self, now: int) -> int:
        """Busy slots within [now - k, now)."""
        stale = bisect_right(self._ends, now - self.k)
        if stale >= self.PRUNE_BATCH:
            del self._starts[:stale], self._ends[:stale], self._before[:stale]
        return self._count(now)

    def first_crossing(self, now: int, until: int, threshold_slots: float) -> int:
        """Earliest t in (now, until] with busy_slots(t) > threshold_slots, else ``until``.

        Only valid while the primary channel stays busy over [now, until),
        which makes busy_slots non-decreasing in t.
        """
        if self._count(until) <= threshold_slots:
            return until
        lo, hi = now, until
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._count(mid) > threshold_slots:
                hi = mid
            else:
                lo = mid
        return hi

    def _busy_before(self, t: int) -> int:
        """Busy slots recorded before ``t``, pruned intervals included."""
        i = bisect_right(self._starts, t)
        if i == 0:
            return self._before[0] if self._before else self._total
        i -= 1
        return self._before[i] + min(self._ends[i], t) - self._starts[i]

    def _count(self, t: int) -> int:
        return self._busy_before(t) - self._busy_before(t - self.k)
