"""Data models for the experiment harness."""

from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.simcore.models import SimConfig
from src.utils.errors import ConfigError

DEFAULT_L_VALUES = (1.8, 2.0, 2.2)
OCCUPANCY_CLASSES = ((0.1, 0.35), (0.35, 0.6), (0.6, 0.85))


class Scenario(str, Enum):
    A = "a"
    B = "b"
    C = "c"


# (p1 range, fixed p2); None means p2 = p1
SCENARIO_GRIDS = {
    Scenario.A: ((0.6, 0.8), 0.2),
    Scenario.B: ((0.1, 0.3), 0.8),
    Scenario.C: ((0.1, 0.9), None),
}


def grid_values(lo: float, hi: float, step: float) -> List[float]:
    """Inclusive grid lo, lo + step, ..., hi, rounded to kill float drift."""
    if step <= 0:
        raise ConfigError(f"grid_step must be > 0, got {step}", key="grid_step")
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 10) for i in range(n)]


@dataclass
class SweepSpec:
    """One occupancy scenario swept over its grid and several overhead factors."""
    scenario: Scenario
    l_values: Tuple[float, ...] = DEFAULT_L_VALUES
    grid_step: float = 0.02
    replications: int = 5
    base: SimConfig = field(default_factory=lambda: SimConfig(sim_time_s=10.0))
    workers: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise ConfigError(f"replications must be >= 1, got {self.replications}", key="replications")
        if not self.l_values:
            raise ConfigError("l_values must not be empty", key="l_values")
        for l in self.l_values:
            if l < 1.0:
                raise ConfigError(f"every l must be >= 1, got {l}", key="l_values")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}", key="workers")

    def points(self) -> List[Tuple[float, float]]:
        """Grid of (p1, p2) for the scenario."""
        (lo, hi), p2 = SCENARIO_GRIDS[self.scenario]
        return [(p, p if p2 is None else p2) for p in grid_values(lo, hi, self.grid_step)]


@dataclass
class ScenarioResult:
    """Analytic and simulated ratio at one grid point and overhead factor."""
    p1: float
    p2: float
    l: float
    analytic_ratio: float
    sim_legacy_mbps: float
    sim_npca_mbps: float
    sim_ratio: float
    ci_halfwidth: float

    def to_dict(self) -> Dict:
        """Convert to dictionary for JSON serialization."""
        return asdict(self)


@dataclass
class ValidationRow:
    """Deviation of one simulated model from its closed form."""
    p1: float
    p2: float
    l: float
    model: str
    analytic_mbps: float
    sim_mbps: float
    deviation: float

    def to_dict(self) -> Dict:
        """Convert to dictionary for JSON serialization."""
        return asdict(self)


@dataclass
class ValidationReport:
    rows: List[ValidationRow] = field(default_factory=list)

    @property
    def worst(self) -> Optional[ValidationRow]:
        return max(self.rows, key=lambda r: r.deviation) if self.rows else None


@dataclass
class RandomOccupancySpec:
    """Legacy vs NPCA vs hybrid under occupancies redrawn every period."""
    period_s: float = 1.0
    n_periods: int = 200
    occupancy_classes: Tuple[Tuple[float, float], ...] = OCCUPANCY_CLASSES
    l: float = 2.2
    thre1: float = 0.6
    k1: int = 50000
    seed: int = 2024
    replications: int = 1
    base: SimConfig = field(default_factory=SimConfig)
    workers: int = 1

    def __post_init__(self):
        if self.period_s <= 0:
            raise ConfigError(f"period_s must be > 0, got {self.period_s}", key="period_s")
        if self.n_periods < 1:
            raise ConfigError(f"n_periods must be >= 1, got {self.n_periods}", key="n_periods")
        if not self.occupancy_classes:
            raise ConfigError("occupancy_classes must not be empty", key="occupancy_classes")
        for lo, hi in self.occupancy_classes:
            if not 0.0 <= lo < hi < 1.0:
                raise ConfigError(f"occupancy class [{lo}, {hi}) must lie within [0, 1)",
                                  key="occupancy_classes")
        if self.replications < 1:
            raise ConfigError(f"replications must be >= 1, got {self.replications}", key="replications")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}", key="workers")


@dataclass
class RandomOccupancyResult:
    """Time-averaged throughput per model, in Mb/s."""
    throughput_mbps: Dict[str, float]
    schedule: List[Tuple[float, float]] = field(default_factory=list, repr=False)
    per_replication: Dict[str, List[float]] = field(default_factory=dict, repr=False)

    def rows(self) -> List[Dict]:
        return [{"model": model, "throughput_mbps": value}
                for model, value in self.throughput_mbps.items()]
