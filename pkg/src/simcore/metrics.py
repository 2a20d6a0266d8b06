"""Counters collected during a simulation run."""

from dataclasses import dataclass, field, asdict
from typing import Dict

from src.simcore.models import AccessMode, Channel
from src.utils.errors import DomainError


@dataclass
class ChannelMetrics:
    """Per-channel counters."""
    successful_payload_bits: int = 0
    success_count: int = 0
    mpdu_count: int = 0
    collision_count: int = 0
    obss_busy_slots: int = 0
    overhead_slots: int = 0
    bss_airtime_slots: int = 0


@dataclass
class SimMetrics:
    """Everything a run measures; equal configs and seeds give equal metrics."""
    total_slots: int
    sim_time_s: float
    primary: ChannelMetrics = field(default_factory=ChannelMetrics)
    secondary: ChannelMetrics = field(default_factory=ChannelMetrics)
    switch_count: int = 0
    overhead_count: int = 0
    mode_slots: Dict[str, int] = field(
        default_factory=lambda: {AccessMode.LEGACY.value: 0, AccessMode.NPCA.value: 0})

    def channel(self, ch: Channel) -> ChannelMetrics:
        return self.primary if ch is Channel.PRIMARY else self.secondary

    @property
    def measured_p1(self) -> float:
        return self.primary.obss_busy_slots / self.total_slots if self.total_slots else 0.0

    @property
    def measured_p2(self) -> float:
        return self.secondary.obss_busy_slots / self.total_slots if self.total_slots else 0.0

    def to_dict(self) -> Dict:
        """Convert to dictionary for JSON serialization."""
        data = asdict(self)
        data["measured_p1"] = self.measured_p1
        data["measured_p2"] = self.measured_p2
        return data


@dataclass(frozen=True)
class MeasuredThroughput:
    primary_mbps: float
    secondary_mbps: float

    @property
    def total_mbps(self) -> float:
        return self.primary_mbps + self.secondary_mbps


def measured_throughput(metrics: SimMetrics, sim_time_s: float) -> MeasuredThroughput:
    """Delivered payload over ``sim_time_s``, per channel, in Mb/s."""
    if sim_time_s <= 0:
        raise DomainError(f"sim_time_s must be > 0, got {sim_time_s}")
    return MeasuredThroughput(
        primary_mbps=metrics.primary.successful_payload_bits / sim_time_s / 1e6,
        secondary_mbps=metrics.secondary.successful_payload_bits / sim_time_s / 1e6
    )
