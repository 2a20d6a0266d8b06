"""Two-channel throughput: legacy, classic NPCA and NPCA with switching overhead.

Channel 1 is the primary channel, channel 2 the non-primary one. Throughputs
are expressed through S(p1), the single-channel throughput left on the
primary channel, so every function here is linear in that scale.
"""

import math
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np

from src.utils.errors import DomainError, SolverError

logger = logging.getLogger(__name__)

CLOSED_FORM_TOLERANCE = 1e-12
POWER_ITERATION_TOLERANCE = 1e-10
POWER_ITERATION_MAX_STEPS = 200


@dataclass(frozen=True)
class OccupancyPair:
    """OBSS occupancy of the primary (p1) and non-primary (p2) channels."""
    p1: float
    p2: float

    def __post_init__(self):
        if not 0.0 <= self.p1 < 1.0:
            raise DomainError(f"p1 must be in [0, 1), got {self.p1} (p1 = 1 is singular)")
        if not 0.0 <= self.p2 <= 1.0:
            raise DomainError(f"p2 must be in [0, 1], got {self.p2}")


class ModelTag(str, Enum):
    LEGACY = "legacy"
    NPCA_CLASSIC = "npca_classic"
    NPCA_OVERHEAD = "npca_overhead"


@dataclass(frozen=True)
class ThroughputReport:
    """Per-channel and total throughput of one channel-access model."""
    model_tag: ModelTag
    th_primary_bps: float
    th_secondary_bps: float

    def __post_init__(self):
        if self.th_primary_bps < 0 or self.th_secondary_bps < 0:
            raise DomainError(f"throughputs must be >= 0, got {self}")

    @property
    def total_bps(self) -> float:
        return self.th_primary_bps + self.th_secondary_bps

    def to_dict(self) -> Dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "model_tag": self.model_tag.value,
            "th_primary_bps": self.th_primary_bps,
            "th_secondary_bps": self.th_secondary_bps,
            "total_bps": self.total_bps
        }


@dataclass
class TwoChannelModel:
    """Transition matrix, steady state and overhead terms for one (p1, p2, l)."""
    occ: OccupancyPair
    l: float
    t: np.ndarray = field(repr=False)
    pb1: float
    pb2: float
    po1: float
    po2: float
    c1: float
    c2: float


def _check_overhead_factor(l: float) -> None:
    if not math.isfinite(l) or l < 1.0:
        raise DomainError(f"overhead factor l must be >= 1, got {l}")


def _check_base(s_p1: float) -> None:
    if not math.isfinite(s_p1) or s_p1 < 0:
        raise DomainError(f"S(p1) must be a finite throughput >= 0, got {s_p1}")


def legacy_throughput(s_p1: float, occ: OccupancyPair) -> ThroughputReport:
    """Legacy: transmit on channel 1, duplicate onto channel 2 when it is idle."""
    _check_base(s_p1)
    return ThroughputReport(ModelTag.LEGACY, s_p1, s_p1 * (1.0 - occ.p2))


def npca_classic_throughput(s_p1: float, occ: OccupancyPair) -> ThroughputReport:
    """Classic NPCA without switching cost: legacy plus channel-2 fallback."""
    _check_base(s_p1)
    p1, p2 = occ.p1, occ.p2
    w1 = s_p1 * (2.0 - p2)
    w2 = s_p1 * (p1 / (1.0 - p1)) * (1.0 - p2)
    return ThroughputReport(ModelTag.NPCA_CLASSIC, w1, w2)


def channel_access_probs(occ) -> Tuple[float, float]:
    """Probabilities that a transmission goes out on channel 1 or channel 2."""
    p1, p2 = occ.p1, occ.p2
    if p1 * p2 >= 1.0:
        raise DomainError("both channels are always busy: no transmission can ever start")
    denom = 1.0 - p1 * p2
    return (1.0 - p1) / denom, (p1 - p1 * p2) / denom


def channel_event_set(occ: OccupancyPair) -> Dict[Tuple[bool, bool], float]:
    """Joint probabilities keyed by (channel-1 busy, channel-2 busy)."""
    p1, p2 = occ.p1, occ.p2
    return {
        (True, True): p1 * p2,
        (False, True): (1.0 - p1) * p2,
        (True, False): p1 * (1.0 - p2),
        (False, False): (1.0 - p1) * (1.0 - p2)
    }


def transition_matrix(occ) -> np.ndarray:
    """Column-stochastic matrix T; column j is the next-channel law after channel j."""
    p_tr_1, p_tr_2 = channel_access_probs(occ)
    return np.array([[p_tr_1, p_tr_1],
                     [p_tr_2, p_tr_2]])


def _check_stochastic(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if t.shape != (2, 2):
        raise DomainError(f"transition matrix must be 2x2, got shape {t.shape}")
    if np.any(t < 0) or not np.allclose(t.sum(axis=0), 1.0, rtol=0, atol=CLOSED_FORM_TOLERANCE):
        raise DomainError(f"transition matrix must be column-stochastic, got {t.tolist()}")
    return t


def steady_state(t: np.ndarray) -> Tuple[float, float]:
    """Stationary channel distribution (Pb1, Pb2) reached from P(0) = (1, 0).

    The closed form is cross-checked against power iteration.
    """
    t = _check_stochastic(t)
    a, b = t[0, 0], t[0, 1]

    # a = 1, b = 0 is the identity: every distribution is stationary
    if math.isclose(1.0 - a + b, 0.0, abs_tol=CLOSED_FORM_TOLERANCE):
        closed = np.array([1.0, 0.0])
    else:
        pb1 = b / (1.0 - a + b)
        closed = np.array([pb1, 1.0 - pb1])

    state = np.array([1.0, 0.0])
    for step in range(1, POWER_ITERATION_MAX_STEPS + 1):
        nxt = t @ state
        converged = np.max(np.abs(nxt - state)) < CLOSED_FORM_TOLERANCE
        state = nxt
        if converged:
            break
    else:
        logger.warning(f"Power iteration did not settle in {POWER_ITERATION_MAX_STEPS} steps "
                       f"(periodic chain?); using the closed form")
        return float(closed[0]), float(closed[1])

    if np.max(np.abs(state - closed)) > POWER_ITERATION_TOLERANCE:
        raise SolverError(f"power iteration {state.tolist()} disagrees with closed form "
                          f"{closed.tolist()}")

    logger.debug(f"Steady state {closed.tolist()} confirmed after {step} power steps")
    return float(closed[0]), float(closed[1])


def overhead_probs(pb1: float, pb2: float) -> Tuple[float, float]:
    """Probabilities (Po1, Po2) that a channel-1 / channel-2 transmission pays overhead."""
    total = pb1 + pb2
    if pb1 < 0 or pb2 < 0 or not math.isclose(total, 1.0, abs_tol=1e-9):
        raise DomainError(f"steady state must be a distribution, got ({pb1}, {pb2})")
    return pb2 / total, pb1 / total


def overhead_event_set(pb1: float, pb2: float) -> List[Tuple[int, int, float, bool]]:
    """Rows (last channel, current channel, probability, overhead incurred)."""
    pb = {1: pb1, 2: pb2}
    return [(last, current, pb[last] * pb[current], last != current)
            for last in (1, 2) for current in (1, 2)]


def overhead_coefficients(po1: float, po2: float, l: float) -> Tuple[float, float]:
    """Throughput discounts (c1, c2) for the switching overhead.

    Channel k's airtime is inflated by l on the fraction Po_k of its
    transmissions that follow a transmission on the other channel, so
    c1 = 1/(l·Po1 + Po2) and c2 = 1/(l·Po2 + Po1). This orientation is the one
    that expands to the closed-form overhead throughput.
    """
    _check_overhead_factor(l)
    if po1 < 0 or po2 < 0 or not math.isclose(po1 + po2, 1.0, abs_tol=1e-9):
        raise DomainError(f"overhead probabilities must sum to 1, got ({po1}, {po2})")
    return 1.0 / (l * po1 + po2), 1.0 / (l * po2 + po1)


def two_channel_model(occ: OccupancyPair, l: float) -> TwoChannelModel:
    """Populate every quantity of the two-channel chain."""
    _check_overhead_factor(l)
    t = transition_matrix(occ)
    pb1, pb2 = steady_state(t)
    po1, po2 = overhead_probs(pb1, pb2)
    c1, c2 = overhead_coefficients(po1, po2, l)
    return TwoChannelModel(occ=occ, l=l, t=t, pb1=pb1, pb2=pb2,
                           po1=po1, po2=po2, c1=c1, c2=c2)


def npca_overhead_throughput(s_p1: float, occ: OccupancyPair, l: float) -> ThroughputReport:
    """NPCA throughput with each channel's share discounted by its overhead coefficient."""
    _check_base(s_p1)
    model = two_channel_model(occ, l)
    classic = npca_classic_throughput(s_p1, occ)
    return ThroughputReport(ModelTag.NPCA_OVERHEAD,
                            model.c1 * classic.th_primary_bps,
                            model.c2 * classic.th_secondary_bps)


def legacy_factor(occ: OccupancyPair) -> float:
    """Legacy total normalized to S(p1) = 1."""
    return 2.0 - occ.p2


def npca_classic_factor(occ: OccupancyPair) -> float:
    """Classic NPCA total normalized to S(p1) = 1."""
    p1, p2 = occ.p1, occ.p2
    return (2.0 - p2) + (p1 / (1.0 - p1)) * (1.0 - p2)


def npca_overhead_factor(occ: OccupancyPair, l: float) -> float:
    """Closed-form NPCA-with-overhead total normalized to S(p1) = 1."""
    _check_overhead_factor(l)
    p1, p2 = occ.p1, occ.p2
    q = 1.0 - p1 * p2
    first = q * (2.0 - p2) / (l * p1 * (1.0 - p2) + 1.0 - p1)
    second = q * p1 * (1.0 - p2) / ((p1 * (1.0 - p2) + l * (1.0 - p1)) * (1.0 - p1))
    return first + second
