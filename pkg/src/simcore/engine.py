"""Slot-level simulation of one BSS contending on two channels with OBSS traffic."""

import logging
from typing import Dict, List, NamedTuple, Tuple

import numpy as np

from src.simcore.backoff import backoff_step, new_stations, resolve_attempt
from src.simcore.metrics import SimMetrics, measured_throughput
from src.simcore.models import (AccessMode, Channel, ChannelState, ChannelStatus, PolicyKind,
                                SimConfig, SlotCosts)
from src.simcore.obss import ObssSource
from src.simcore.policy import (BusyWindow, PolicyDecision, hybrid_policy_decision,
                                npca_switch_decision)

logger = logging.getLogger(__name__)


class SimEvent(NamedTuple):
    """One entry of the optional run trace.

    ``kind`` is "switch" (operating channel changed), "overhead" (radio
    retuned to ``channel`` over [start, end)) or "tx" (BSS attempt on
    ``channel``). ``counters`` holds the station backoff counters at ``end``.
    """
    kind: str
    start: int
    end: int
    channel: Channel
    counters: Tuple[int, ...] = ()
    success: bool = False


def apply_switch_overhead(metrics: SimMetrics, target: Channel, costs: SlotCosts) -> ChannelState:
    """Charge one retune: the target channel is unusable for the overhead slots."""
    if costs.overhead == 0:
        return ChannelState(ChannelStatus.IDLE)
    metrics.overhead_count += 1
    metrics.channel(target).overhead_slots += costs.overhead
    return ChannelState(ChannelStatus.SWITCH_OVERHEAD, remaining=costs.overhead)


class SimWorld:
    """State of one run. Time advances in whole slots from one boundary to the next.

    The BSS contends on its operating channel. Idle slots drive the backoff;
    while the operating channel carries OBSS traffic the clock jumps to the
    next OBSS state change. A transmission holds its channel for Ts (success)
    or Tc (collision) slots, and OBSS periods arriving meanwhile queue behind
    it. A transmission on the primary channel is duplicated onto the
    secondary channel when that one is idle at the start.

    Moving the operating channel away from the channel the radio is tuned to
    costs the switch overhead once the destination is idle: the destination
    is reserved for those slots and nobody transmits or counts down. If the
    primary channel has gone idle by the end of a trip to the secondary, the
    radio stays tuned to the primary and the BSS comes back for free. Every
    switch is followed by a fresh DIFS; backoff counters carry over.
    """

    def __init__(self, config: SimConfig, trace: bool = False):
        self.config = config
        self.costs = SlotCosts.from_config(config)
        self.policy = config.policy
        self.max_stage = config.max_stage

        station_seed, obss1_seed, obss2_seed = np.random.SeedSequence(config.seed).spawn(3)
        self.rng = np.random.default_rng(station_seed)
        self.stations = new_stations(config.n_stations, config.cw_min, self.rng)

        schedule = config.occupancy_schedule()
        period = config.schedule_period_slots if config.obss_schedule is not None else None
        self.sources: Dict[Channel, ObssSource] = {
            ch: ObssSource(self.costs.obss, [pair[ch - 1] for pair in schedule],
                           np.random.default_rng(seed), period_slots=period,
                           horizon=self.costs.total, burst_exponent=config.obss_burst_exponent)
            for ch, seed in ((Channel.PRIMARY, obss1_seed), (Channel.SECONDARY, obss2_seed))
        }
        self.window = BusyWindow(self.policy.k1)
        self.threshold_slots = self.policy.thre1 * max(1, self.policy.k1)

        self.metrics = SimMetrics(total_slots=self.costs.total, sim_time_s=config.sim_time_s)
        self.now = 0
        self.operating = Channel.PRIMARY
        self.tuned = Channel.PRIMARY
        self.last_tx = Channel.PRIMARY
        self.pending_overhead = False
        self.difs_wait = 0

        self.trace = trace
        self.events: List[SimEvent] = []

    def channel_state(self, ch: Channel) -> ChannelState:
        source = self.sources[ch]
        if source.is_busy(self.now):
            return ChannelState(ChannelStatus.OBSS_BUSY, remaining=source.remaining(self.now),
                                obss_q=source.q_at(self.now))
        return ChannelState(ChannelStatus.IDLE, obss_q=source.q_at(self.now))

    def run(self) -> SimMetrics:
        total = self.costs.total
        while self.now < total:
            self._process_arrivals(self.now)
            decision = self._decide()
            start = self.now
            # a committed retune finishes before the policy may move again
            if not self.pending_overhead:
                target = self._target_channel(decision)
                if target is not self.operating:
                    self._switch(target)

            busy = self.sources[self.operating].is_busy(self.now)
            if self.pending_overhead and not busy:
                self._retune()
            elif busy:
                if self.difs_wait:
                    self.difs_wait = self.costs.difs
                self.now = self._next_event(decision.mode)
            elif self.difs_wait > 0:
                self.difs_wait -= 1
                self.now += 1
            else:
                tx_set = backoff_step(self.stations, channel_idle=True)
                if tx_set:
                    self._transmit(tx_set)
                else:
                    self.now += 1
            self.metrics.mode_slots[decision.mode.value] += min(self.now, total) - start

        self.metrics.primary.obss_busy_slots = self.sources[Channel.PRIMARY].busy_slots
        self.metrics.secondary.obss_busy_slots = self.sources[Channel.SECONDARY].busy_slots
        return self.metrics

    def _emit(self, kind: str, start: int, end: int, channel: Channel, success: bool = False) -> None:
        if self.trace:
            counters = tuple(s.backoff_counter for s in self.stations)
            self.events.append(SimEvent(kind, start, end, channel, counters, success))

    def _record(self, ch: Channel, intervals: List[Tuple[int, int]]) -> None:
        if ch is Channel.PRIMARY and self.policy.kind is PolicyKind.HYBRID:
            for start, end in intervals:
                self.window.add(start, end)

    def _process_arrivals(self, until: int) -> None:
        for ch, source in self.sources.items():
            self._record(ch, source.process_until(until))

    def _decide(self) -> PolicyDecision:
        if self.policy.kind is PolicyKind.LEGACY:
            return PolicyDecision(AccessMode.LEGACY, Channel.PRIMARY)
        if self.policy.kind is PolicyKind.NPCA:
            return PolicyDecision(AccessMode.NPCA, self.operating)
        return hybrid_policy_decision(self.window.busy_slots(self.now), self.policy.thre1,
                                      self.policy.k1, self.operating)

    def _target_channel(self, decision: PolicyDecision) -> Channel:
        if decision.mode is AccessMode.LEGACY:
            return decision.channel
        return npca_switch_decision(self.channel_state(Channel.PRIMARY),
                                    self.channel_state(Channel.SECONDARY), decision.channel)

    def _switch(self, target: Channel) -> None:
        self.operating = target
        self.difs_wait = self.costs.difs
        self.pending_overhead = target is not self.tuned and self.costs.overhead > 0
        if not self.pending_overhead:
            self.tuned = target
        self._emit("switch", self.now, self.now, target)

    def _retune(self) -> None:
        ch = self.operating
        state = apply_switch_overhead(self.metrics, ch, self.costs)
        end = self.now + state.remaining
        self._record(ch, self.sources[ch].process_until(end - 1, defer_until=end))
        self._emit("overhead", self.now, end, ch)
        self.pending_overhead = False
        self.now = end

        self._process_arrivals(self.now)
        if ch is Channel.PRIMARY or self.sources[Channel.PRIMARY].is_busy(self.now):
            self.tuned = ch

    def _next_event(self, mode: AccessMode) -> int:
        """Next boundary at which the channel picture can change."""
        t = self.costs.total
        for source in self.sources.values():
            change = source.next_change(self.now)
            if change is not None and change > self.now:
                t = min(t, change)

        # the primary stays busy until t, so the estimate only grows
        if (self.policy.kind is PolicyKind.HYBRID and mode is AccessMode.LEGACY
                and t > self.now + 1):
            t = self.window.first_crossing(self.now, t, self.threshold_slots)
        return t

    def _transmit(self, tx_set: List[int]) -> None:
        ch = self.operating
        if ch is not self.last_tx:
            self.metrics.switch_count += 1
            self.last_tx = ch

        start = self.now
        success = len(tx_set) == 1
        duration = self.costs.ts if success else self.costs.tc
        end = start + duration
        self._record(ch, self.sources[ch].process_until(end - 1, defer_until=end))

        duplicate = False
        if ch is Channel.PRIMARY:
            other = self.sources[Channel.SECONDARY]
            other.process_until(start)
            duplicate = not other.is_busy(start)

        resolve_attempt(self.stations, tx_set, self.rng, self.config.cw_min, self.config.cw_max)
        self._emit("tx", start, end, ch, success)

        carriers = [ch, Channel.SECONDARY] if duplicate else [ch]
        for carrier in carriers:
            m = self.metrics.channel(carrier)
            m.bss_airtime_slots += duration
            if not success:
                m.collision_count += 1
            elif end <= self.costs.total:
                m.success_count += 1
                m.successful_payload_bits += self.config.ampdu_bytes * 8
                m.mpdu_count += self.config.ampdu_bytes // self.config.packet_bytes

        self.now = end


def run_sim(config: SimConfig) -> SimMetrics:
    """Run one simulation; identical config and seed give identical metrics."""
    config.validate()
    logger.debug(f"Simulating {config.policy.kind.value} p1={config.obss_p1} p2={config.obss_p2} "
                 f"l={config.l} seed={config.seed} for {config.sim_time_s}s")

    metrics = SimWorld(config).run()

    throughput = measured_throughput(metrics, config.sim_time_s)
    logger.debug(f"Run done: {throughput.total_mbps:.2f} Mb/s, {metrics.switch_count} switches, "
                 f"{metrics.overhead_count} retunes, measured p1={metrics.measured_p1:.3f} "
                 f"p2={metrics.measured_p2:.3f}")
    return metrics
