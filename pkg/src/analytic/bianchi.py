"""Single-channel saturation throughput (Bianchi's DCF model)."""

import math
import logging
from dataclasses import dataclass, asdict
from typing import Dict, Optional

from scipy import optimize

from src.analytic.timing import MacTiming, slot_costs
from src.utils.errors import DomainError, SolverError

logger = logging.getLogger(__name__)

TAU_TOLERANCE = 1e-10
TAU_MAX_ITER = 10 ** 6


@dataclass
class BianchiModel:
    """Contention parameters and the solved chain quantities."""
    n_stations: int
    cw_min: int
    cw_max: int
    payload_bits: float
    max_stages: int = 0
    tau: Optional[float] = None
    p_tr: Optional[float] = None
    p_s: Optional[float] = None
    t_s_us: Optional[float] = None
    t_c_us: Optional[float] = None
    s_bps: Optional[float] = None

    def __post_init__(self):
        if self.cw_max != self.cw_min * 2 ** self.max_stages:
            raise DomainError(
                f"cw_max ({self.cw_max}) must equal cw_min·2^max_stages "
                f"({self.cw_min}·2^{self.max_stages})")
        for name in ("tau", "p_tr", "p_s"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} must be a probability, got {value}")

    @property
    def is_solved(self) -> bool:
        return self.tau is not None and self.p_tr is not None and self.p_s is not None

    def to_dict(self) -> Dict:
        """Convert to dictionary for JSON serialization."""
        return asdict(self)


def backoff_stages(cw_min: int, cw_max: int) -> int:
    """Number of window doublings m with cw_max = cw_min·2^m."""
    if cw_min < 2 or cw_max < cw_min:
        raise DomainError(f"need 2 <= cw_min <= cw_max, got cw_min={cw_min}, cw_max={cw_max}")
    m = int(round(math.log2(cw_max / cw_min)))
    if cw_min * 2 ** m != cw_max:
        raise DomainError(f"cw_max/cw_min must be a power of two, got {cw_max}/{cw_min}")
    return m


def collision_probability(tau: float, n: int) -> float:
    """Probability that a transmission attempt collides, p = 1 - (1-τ)^(n-1)."""
    return 1.0 - (1.0 - tau) ** (n - 1)


def _tau_from_p(p: float, w: int, m: int) -> float:
    # (1-(2p)^m)/(1-2p) written as a finite sum so p = 1/2 stays regular
    stage_sum = sum((2.0 * p) ** i for i in range(m))
    return 2.0 / (1.0 + w + p * w * stage_sum)


def solve_tau(n: int, cw_min: int, max_stages: int) -> float:
    """Solve the attempt probability τ of the saturated backoff chain.

    Bisection on the fixed-point residual over (0, 1); the residual is
    increasing in τ so the root is unique.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if cw_min < 2:
        raise DomainError(f"cw_min must be >= 2, got {cw_min}")
    if max_stages < 0:
        raise DomainError(f"max_stages must be >= 0, got {max_stages}")

    def residual(tau: float) -> float:
        return tau - _tau_from_p(collision_probability(tau, n), cw_min, max_stages)

    tau, result = optimize.bisect(residual, 0.0, 1.0, xtol=1e-15,
                                  maxiter=TAU_MAX_ITER, full_output=True, disp=False)
    if not result.converged or abs(residual(tau)) >= TAU_TOLERANCE or not 0.0 < tau < 1.0:
        raise SolverError(
            f"tau did not converge for n={n}, W={cw_min}, m={max_stages} "
            f"after {result.iterations} iterations")

    logger.debug(f"Solved tau={tau:.12f} for n={n}, W={cw_min}, m={max_stages}")
    return tau


def p_transmit(tau: float, n: int) -> float:
    """P_tr: probability that at least one station transmits in a slot."""
    if not 0.0 <= tau <= 1.0:
        raise DomainError(f"tau must be in [0, 1], got {tau}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return 1.0 - (1.0 - tau) ** n


def p_success(tau: float, n: int) -> float:
    """P_s: probability that a busy slot carries exactly one transmission."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0.0 < tau <= 1.0:
        raise DomainError(f"P_s is undefined for tau={tau}: no slot is ever busy")
    if n == 1:
        return 1.0
    return n * tau * (1.0 - tau) ** (n - 1) / p_transmit(tau, n)


def saturation_throughput(model: BianchiModel, timing: MacTiming) -> float:
    """Saturation throughput S in bit/s for a solved model."""
    if not model.is_solved:
        raise DomainError("model must have tau, p_tr and p_s solved before computing S")

    t_s, t_c = slot_costs(timing)
    p_tr, p_s = model.p_tr, model.p_s
    denominator = ((1.0 - p_tr) * timing.slot_us + p_tr * p_s * t_s
                   + p_tr * (1.0 - p_s) * t_c)
    if denominator <= 0.0:
        raise DomainError("degenerate configuration: expected slot length is zero")

    # bits per microsecond -> bit/s
    return p_s * p_tr * model.payload_bits / denominator * 1e6


def throughput_vs_occupancy(s_bps: float, p: float) -> float:
    """S(p): throughput left on a channel whose OBSS occupancy is ``p``.

    Occupancy removes airtime linearly, S(p) = (1 - p)·S.
    """
    if not 0.0 <= p < 1.0:
        raise DomainError(f"occupancy must be in [0, 1), got {p}")
    return (1.0 - p) * s_bps


def bianchi_model(n: int, cw_min: int, cw_max: int, payload_bits: float,
                  timing: MacTiming) -> BianchiModel:
    """Solve the whole single-channel chain for the given contention setup."""
    m = backoff_stages(cw_min, cw_max)
    tau = solve_tau(n, cw_min, m)
    t_s, t_c = slot_costs(timing)

    model = BianchiModel(
        n_stations=n,
        cw_min=cw_min,
        cw_max=cw_max,
        payload_bits=payload_bits,
        max_stages=m,
        tau=tau,
        p_tr=p_transmit(tau, n),
        p_s=p_success(tau, n),
        t_s_us=t_s,
        t_c_us=t_c
    )
    model.s_bps = saturation_throughput(model, timing)

    logger.debug(f"Bianchi n={n} W={cw_min} m={m}: tau={tau:.5f} "
                f"S={model.s_bps / 1e6:.3f} Mb/s")
    return model
