"""NPCA-to-legacy throughput ratio and its crossover point."""

import logging
from typing import Optional

import numpy as np
from scipy import optimize

from src.analytic.two_channel import OccupancyPair, legacy_factor, npca_overhead_factor
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

CROSSOVER_XTOL = 1e-8
CROSSOVER_SCAN_POINTS = 2000
# ratio(0) = 1 for every l, so the scan starts just inside the interval
CROSSOVER_SCAN_START = 1e-6


def throughput_ratio(p1: float, p2: float, l: float) -> float:
    """Overhead-NPCA total over legacy total; S(p1) cancels out."""
    occ = OccupancyPair(p1, p2)
    return npca_overhead_factor(occ, l) / legacy_factor(occ)


def balanced_ratio(p: float, l: float) -> float:
    """Ratio when both channels see the same occupancy ``p``."""
    if not 0.0 <= p < 1.0:
        raise DomainError(f"p must be in [0, 1), got {p}")
    if l < 1.0:
        raise DomainError(f"overhead factor l must be >= 1, got {l}")
    return (p + 1.0) / (l * p + 1.0) + p * (p + 1.0) / ((l + p) * (2.0 - p))


def crossover_threshold(l: float) -> Optional[float]:
    """Occupancy p* where the balanced ratio crosses 1, or None if it never does.

    Below p* legacy access wins, above it NPCA does. The first sign change of
    ratio - 1 on a grid brackets the root, which brentq then refines.
    """
    if l < 1.0:
        raise DomainError(f"overhead factor l must be >= 1, got {l}")

    grid = np.linspace(CROSSOVER_SCAN_START, 1.0 - 1e-9, CROSSOVER_SCAN_POINTS)
    excess = np.array([balanced_ratio(p, l) - 1.0 for p in grid])
    sign_changes = np.nonzero(np.sign(excess[:-1]) * np.sign(excess[1:]) < 0)[0]
    if sign_changes.size == 0:
        logger.debug(f"No crossover for l={l}")
        return None

    i = sign_changes[0]
    root = optimize.brentq(lambda p: balanced_ratio(p, l) - 1.0, grid[i], grid[i + 1],
                           xtol=CROSSOVER_XTOL)
    logger.debug(f"Crossover for l={l}: p*={root:.6f}")
    return float(root)
