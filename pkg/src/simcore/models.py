"""Data models for the slot-level NPCA simulator."""

import math
from dataclasses import dataclass, field, fields
from enum import Enum, IntEnum
from typing import Any, Dict, List, Optional, Tuple

from src.analytic.bianchi import backoff_stages
from src.analytic.timing import DEFAULT_MCS, MacTiming, slot_costs, to_slots
from src.utils.errors import ConfigError, DomainError


class Channel(IntEnum):
    PRIMARY = 1
    SECONDARY = 2

    @property
    def other(self) -> 'Channel':
        return Channel.SECONDARY if self is Channel.PRIMARY else Channel.PRIMARY


class PolicyKind(str, Enum):
    LEGACY = "legacy"
    NPCA = "npca"
    HYBRID = "hybrid"


class AccessMode(str, Enum):
    """Channel-access method a hybrid controller is currently using."""
    LEGACY = "legacy"
    NPCA = "npca"


@dataclass(frozen=True)
class AccessPolicy:
    """Legacy, NPCA, or the occupancy-driven hybrid of the two."""
    kind: PolicyKind = PolicyKind.LEGACY
    thre1: float = 0.6
    k1: int = 50000

    def __post_init__(self):
        if self.kind is PolicyKind.HYBRID:
            if not 0.0 < self.thre1 < 1.0:
                raise ConfigError(f"thre1 must be in (0, 1), got {self.thre1}", key="policy.thre1")
            if self.k1 < 1:
                raise ConfigError(f"k1 must be >= 1, got {self.k1}", key="policy.k1")

    @classmethod
    def legacy(cls) -> 'AccessPolicy':
        return cls(PolicyKind.LEGACY)

    @classmethod
    def npca(cls) -> 'AccessPolicy':
        return cls(PolicyKind.NPCA)

    @classmethod
    def hybrid(cls, thre1: float = 0.6, k1: int = 50000) -> 'AccessPolicy':
        return cls(PolicyKind.HYBRID, thre1, k1)

    def to_dict(self) -> Dict:
        """Convert to dictionary for JSON serialization."""
        if self.kind is PolicyKind.HYBRID:
            return {"kind": self.kind.value, "thre1": self.thre1, "k1": self.k1}
        return {"kind": self.kind.value}

    @classmethod
    def from_dict(cls, data: Any) -> 'AccessPolicy':
        """Accept either a bare kind string or a {"kind": ..., ...} object."""
        if isinstance(data, str):
            data = {"kind": data}
        if not isinstance(data, dict) or "kind" not in data:
            raise ConfigError("policy must be a string or an object with a 'kind'", key="policy")
        try:
            kind = PolicyKind(str(data["kind"]).lower())
        except ValueError:
            raise ConfigError(f"unknown policy kind {data['kind']!r}", key="policy.kind")
        thre1 = _number(data, "thre1", 0.6, prefix="policy.")
        k1 = _integer(data, "k1", 50000, prefix="policy.")
        return cls(kind, thre1, k1)


@dataclass
class StationState:
    """Backoff state of one saturated station."""
    backoff_counter: int
    stage: int = 0
    cw: int = 16

    def is_legal(self, cw_min: int, cw_max: int) -> bool:
        return (0 <= self.backoff_counter < self.cw
                and self.cw == min(cw_min * 2 ** self.stage, cw_max))


class ChannelStatus(str, Enum):
    IDLE = "idle"
    OBSS_BUSY = "obss_busy"
    BSS_TX = "bss_tx"
    SWITCH_OVERHEAD = "switch_overhead"


@dataclass(frozen=True)
class ChannelState:
    """Snapshot of one channel at a slot boundary."""
    status: ChannelStatus = ChannelStatus.IDLE
    remaining: int = 0
    success: bool = False
    obss_q: float = 0.0

    def __post_init__(self):
        if self.status is not ChannelStatus.IDLE and self.remaining <= 0:
            raise DomainError(f"{self.status.value} needs remaining > 0, got {self.remaining}")

    @property
    def is_idle(self) -> bool:
        return self.status is ChannelStatus.IDLE


def _number(data: Dict, key: str, default: Any = None, prefix: str = "") -> Any:
    if key not in data:
        if default is None:
            raise ConfigError(f"missing key '{prefix}{key}'", key=prefix + key)
        return default
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"'{prefix}{key}' must be a finite number, got {value!r}", key=prefix + key)
    return value


def _integer(data: Dict, key: str, default: Any = None, prefix: str = "") -> Any:
    value = _number(data, key, default, prefix)
    if value != int(value):
        raise ConfigError(f"'{prefix}{key}' must be an integer, got {value!r}", key=prefix + key)
    return int(value)


@dataclass
class SimConfig:
    """One simulation run; defaults are the simulation-parameter table."""
    sim_time_s: float = 30.0
    n_stations: int = 10
    cw_min: int = 16
    cw_max: int = 1024
    packet_bytes: int = 1500
    ampdu_bytes: int = 18000
    slot_us: float = 9.0
    sifs_us: float = 16.0
    mcs: int = DEFAULT_MCS
    phy_rate_mbps: float = 34.4
    prop_delay_us: float = 0.0
    l: float = 2.0
    obss_p1: float = 0.0
    obss_p2: float = 0.0
    obss_ppdu_us: Optional[float] = None
    # OBSS PPDUs chain into a burst with probability p**obss_burst_exponent
    obss_burst_exponent: float = 0.85
    policy: AccessPolicy = field(default_factory=AccessPolicy)
    seed: int = 2024
    # Piecewise-constant occupancy (p1, p2) per period; overrides obss_p1/obss_p2
    obss_schedule: Optional[List[Tuple[float, float]]] = None
    schedule_period_s: float = 1.0

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        """Raise ConfigError naming the first offending key."""
        if self.sim_time_s <= 0:
            raise ConfigError(f"sim_time_s must be > 0, got {self.sim_time_s}", key="sim_time_s")
        if self.n_stations < 1:
            raise ConfigError(f"n_stations must be >= 1, got {self.n_stations}", key="n_stations")
        try:
            backoff_stages(self.cw_min, self.cw_max)
        except DomainError as e:
            raise ConfigError(str(e), key="cw_max")
        if self.packet_bytes <= 0:
            raise ConfigError(f"packet_bytes must be > 0, got {self.packet_bytes}", key="packet_bytes")
        if self.ampdu_bytes < self.packet_bytes:
            raise ConfigError(f"ampdu_bytes must hold at least one packet, got {self.ampdu_bytes}",
                              key="ampdu_bytes")
        if self.slot_us <= 0:
            raise ConfigError(f"slot_us must be > 0, got {self.slot_us}", key="slot_us")
        if self.phy_rate_mbps <= 0:
            raise ConfigError(f"phy_rate_mbps must be > 0, got {self.phy_rate_mbps}", key="phy_rate_mbps")
        if self.l < 1.0:
            raise ConfigError(f"l must be >= 1, got {self.l}", key="l")
        for key in ("obss_p1", "obss_p2"):
            value = getattr(self, key)
            if not 0.0 <= value < 1.0:
                raise ConfigError(f"{key} must be in [0, 1), got {value}", key=key)
        if self.obss_ppdu_us is not None and self.obss_ppdu_us <= 0:
            raise ConfigError(f"obss_ppdu_us must be > 0, got {self.obss_ppdu_us}", key="obss_ppdu_us")
        if self.obss_burst_exponent <= 0:
            raise ConfigError(f"obss_burst_exponent must be > 0, got {self.obss_burst_exponent}",
                              key="obss_burst_exponent")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}", key="seed")
        if self.obss_schedule is not None:
            if self.schedule_period_s <= 0:
                raise ConfigError(f"schedule_period_s must be > 0, got {self.schedule_period_s}",
                                  key="schedule_period_s")
            if not self.obss_schedule:
                raise ConfigError("obss_schedule must not be empty", key="obss_schedule")
            for p1, p2 in self.obss_schedule:
                if not (0.0 <= p1 < 1.0 and 0.0 <= p2 < 1.0):
                    raise ConfigError(f"schedule occupancies must be in [0, 1), got ({p1}, {p2})",
                                      key="obss_schedule")

    @property
    def mac(self) -> MacTiming:
        return MacTiming.from_table3(slot_us=self.slot_us, sifs_us=self.sifs_us,
                                     ampdu_bytes=self.ampdu_bytes,
                                     phy_rate_mbps=self.phy_rate_mbps, mcs=self.mcs,
                                     prop_delay_us=self.prop_delay_us)

    @property
    def max_stage(self) -> int:
        return backoff_stages(self.cw_min, self.cw_max)

    @property
    def total_slots(self) -> int:
        return to_slots(self.sim_time_s * 1e6, self.slot_us)

    @property
    def obss_slots(self) -> int:
        """Length d of one OBSS busy period; defaults to the BSS PPDU length."""
        ppdu = self.obss_ppdu_us if self.obss_ppdu_us is not None else self.mac.ppdu_us
        return max(1, to_slots(ppdu, self.slot_us))

    @property
    def schedule_period_slots(self) -> int:
        return max(1, to_slots(self.schedule_period_s * 1e6, self.slot_us))

    def occupancy_schedule(self) -> List[Tuple[float, float]]:
        if self.obss_schedule is not None:
            return [tuple(p) for p in self.obss_schedule]
        return [(self.obss_p1, self.obss_p2)]

    def with_overrides(self, **changes) -> 'SimConfig':
        """Copy with some fields replaced (validated again)."""
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data.update(changes)
        return SimConfig(**data)

    def to_dict(self) -> Dict:
        """Convert to dictionary for JSON serialization."""
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data["policy"] = self.policy.to_dict()
        if self.obss_schedule is not None:
            data["obss_schedule"] = [list(p) for p in self.obss_schedule]
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> 'SimConfig':
        """Create SimConfig from dictionary; every table key is required."""
        if not isinstance(data, dict):
            raise ConfigError("simulation config must be a JSON object")

        kwargs = {
            "sim_time_s": _number(data, "sim_time_s"),
            "n_stations": _integer(data, "n_stations"),
            "cw_min": _integer(data, "cw_min"),
            "cw_max": _integer(data, "cw_max"),
            "packet_bytes": _integer(data, "packet_bytes"),
            "ampdu_bytes": _integer(data, "ampdu_bytes"),
            "slot_us": _number(data, "slot_us"),
            "sifs_us": _number(data, "sifs_us"),
            "mcs": _integer(data, "mcs", DEFAULT_MCS),
            "phy_rate_mbps": _number(data, "phy_rate_mbps"),
            "prop_delay_us": _number(data, "prop_delay_us", 0.0),
            "l": _number(data, "l"),
            "obss_p1": _number(data, "obss_p1"),
            "obss_p2": _number(data, "obss_p2"),
            "seed": _integer(data, "seed"),
        }
        if "policy" not in data:
            raise ConfigError("missing key 'policy'", key="policy")
        kwargs["policy"] = AccessPolicy.from_dict(data["policy"])

        if data.get("obss_ppdu_us") is not None:
            kwargs["obss_ppdu_us"] = _number(data, "obss_ppdu_us")
        if data.get("obss_burst_exponent") is not None:
            kwargs["obss_burst_exponent"] = _number(data, "obss_burst_exponent")
        if data.get("obss_schedule") is not None:
            try:
                kwargs["obss_schedule"] = [(float(p1), float(p2)) for p1, p2 in data["obss_schedule"]]
            except (TypeError, ValueError):
                raise ConfigError("obss_schedule must be a list of [p1, p2] pairs", key="obss_schedule")
            kwargs["schedule_period_s"] = _number(data, "schedule_period_s", 1.0)

        return cls(**kwargs)


@dataclass(frozen=True)
class SlotCosts:
    """Per-run durations quantized to slots."""
    ts: int
    tc: int
    difs: int
    ppdu: int
    obss: int
    overhead: int
    total: int

    @classmethod
    def from_config(cls, config: SimConfig) -> 'SlotCosts':
        mac = config.mac
        t_s, t_c = slot_costs(mac)
        slot = config.slot_us
        return cls(
            ts=max(1, to_slots(t_s, slot)),
            tc=max(1, to_slots(t_c, slot)),
            difs=to_slots(mac.difs_us, slot),
            ppdu=to_slots(mac.ppdu_us, slot),
            obss=config.obss_slots,
            overhead=to_slots((config.l - 1.0) * mac.ppdu_us, slot),
            total=config.total_slots
        )
