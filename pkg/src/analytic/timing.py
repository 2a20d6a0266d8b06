"""MAC/PHY timing constants and the per-event channel hold times."""

import math
from dataclasses import dataclass, asdict, fields
from typing import Dict, Tuple

from src.utils.errors import DomainError

# 20 MHz, one spatial stream, 0.8 us GI; index = MCS.
DATA_RATES_20MHZ_MBPS = (8.603, 17.206, 25.8, 34.4, 51.5, 68.8, 77.4, 86.0, 103.2, 114.7, 129.0, 143.4)
ACK_RATES_20MHZ_MBPS = (6.0, 12.0, 12.0, 24.0, 24.0, 24.0, 24.0, 24.0, 24.0, 24.0, 24.0, 24.0)

T_PHY_DATA_US = 44.0
T_PHY_ACK_US = 20.0
T_SYMBOL_ACK_US = 4.0
L_SERVICE_BITS = 16
L_TAIL_BITS = 6
L_ACK_BITS = 14 * 8
L_MAC_HEADER_BITS = 30 * 8

DEFAULT_MCS = 3


def phy_rate_for_mcs(mcs: int) -> float:
    """Data rate in Mb/s for an MCS index."""
    if not 0 <= mcs < len(DATA_RATES_20MHZ_MBPS):
        raise DomainError(f"MCS must be in [0, {len(DATA_RATES_20MHZ_MBPS) - 1}], got {mcs}")
    return DATA_RATES_20MHZ_MBPS[mcs]


def ack_duration_us(mcs: int) -> float:
    """Airtime of a legacy ACK sent at the control rate matching ``mcs``."""
    if not 0 <= mcs < len(ACK_RATES_20MHZ_MBPS):
        raise DomainError(f"MCS must be in [0, {len(ACK_RATES_20MHZ_MBPS) - 1}], got {mcs}")
    bits_per_symbol = ACK_RATES_20MHZ_MBPS[mcs] * T_SYMBOL_ACK_US
    n_symbols = math.ceil((L_SERVICE_BITS + L_ACK_BITS + L_TAIL_BITS) / bits_per_symbol)
    return T_PHY_ACK_US + T_SYMBOL_ACK_US * n_symbols


@dataclass(frozen=True)
class MacTiming:
    """Per-slot and per-frame durations, all in microseconds."""
    slot_us: float
    sifs_us: float
    difs_us: float
    eifs_us: float
    phy_header_us: float
    mac_header_us: float
    ack_us: float
    nack_us: float
    prop_delay_us: float
    payload_tx_us: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{f.name} must be a finite duration >= 0, got {value}")

    @property
    def header_us(self) -> float:
        """H = PHY header + MAC header."""
        return self.phy_header_us + self.mac_header_us

    @property
    def ppdu_us(self) -> float:
        """Airtime of one data PPDU (header plus aggregated payload)."""
        return self.header_us + self.payload_tx_us

    @classmethod
    def from_table3(cls, slot_us: float = 9.0, sifs_us: float = 16.0,
                    ampdu_bytes: int = 18000, phy_rate_mbps: float = None,
                    mcs: int = DEFAULT_MCS, prop_delay_us: float = 0.0,
                    phy_header_us: float = T_PHY_DATA_US,
                    ack_us: float = None, nack_us: float = None) -> 'MacTiming':
        """Build timing the way the simulation table defines it.

        DIFS is SIFS + 2 slots and EIFS is SIFS + NACK + DIFS. The MAC header
        and payload airtimes follow from the PHY rate; ACK/NACK airtimes
        default to a legacy ACK at the control rate of ``mcs``.
        """
        rate = phy_rate_mbps if phy_rate_mbps is not None else phy_rate_for_mcs(mcs)
        if rate <= 0:
            raise DomainError(f"phy_rate_mbps must be > 0, got {rate}")
        ack = ack_us if ack_us is not None else ack_duration_us(mcs)
        nack = nack_us if nack_us is not None else ack
        difs = sifs_us + 2 * slot_us

        return cls(
            slot_us=slot_us,
            sifs_us=sifs_us,
            difs_us=difs,
            eifs_us=sifs_us + nack + difs,
            phy_header_us=phy_header_us,
            mac_header_us=L_MAC_HEADER_BITS / rate,
            ack_us=ack,
            nack_us=nack,
            prop_delay_us=prop_delay_us,
            payload_tx_us=ampdu_bytes * 8 / rate
        )

    def to_dict(self) -> Dict:
        """Convert to dictionary for JSON serialization."""
        return asdict(self)


def slot_costs(timing: MacTiming) -> Tuple[float, float]:
    """Channel hold times (Ts, Tc) in microseconds for a success and a collision."""
    delta = timing.prop_delay_us
    t_s = (timing.header_us + timing.payload_tx_us + timing.sifs_us + delta
           + timing.ack_us + timing.difs_us + delta)
    t_c = timing.header_us + timing.payload_tx_us + delta + timing.eifs_us
    return t_s, t_c


def to_slots(duration_us: float, slot_us: float) -> int:
    """Quantize a duration to whole slots, rounding half up."""
    if slot_us <= 0:
        raise DomainError(f"slot_us must be > 0, got {slot_us}")
    return int(math.floor(duration_us / slot_us + 0.5))
