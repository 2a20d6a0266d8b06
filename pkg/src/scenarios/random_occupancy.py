"""Legacy, NPCA and hybrid access under randomly redrawn occupancies."""

import logging
from typing import Dict, List, Tuple

import numpy as np

from src.scenarios.models import RandomOccupancyResult, RandomOccupancySpec
from src.scenarios.sweep import run_many
from src.simcore.models import AccessPolicy

logger = logging.getLogger(__name__)


def draw_occupancy_schedule(spec: RandomOccupancySpec,
                            rng: np.random.Generator) -> List[Tuple[float, float]]:
    """Per-period (p1, p2): a uniformly chosen class, then a uniform value inside it."""
    classes = spec.occupancy_classes
    schedule = []
    for _ in range(spec.n_periods):
        pair = []
        for _channel in range(2):
            lo, hi = classes[int(rng.integers(len(classes)))]
            pair.append(float(rng.uniform(lo, hi)))
        schedule.append((pair[0], pair[1]))
    return schedule


def run_random_occupancy(spec: RandomOccupancySpec) -> RandomOccupancyResult:
    """Mean throughput of the three models over one shared occupancy sequence.

    Every model sees the same schedule and the same OBSS random streams, so
    the differences come from the access policy alone.
    """
    schedule = draw_occupancy_schedule(spec, np.random.default_rng(spec.seed))
    policies = {
        "Legacy": AccessPolicy.legacy(),
        "NPCA": AccessPolicy.npca(),
        "Hybrid": AccessPolicy.hybrid(spec.thre1, spec.k1),
    }
    base = spec.base.with_overrides(
        sim_time_s=spec.period_s * spec.n_periods,
        l=spec.l,
        obss_schedule=schedule,
        schedule_period_s=spec.period_s
    )
    logger.info(f"Random occupancy: {spec.n_periods} periods of {spec.period_s}s, l={spec.l}, "
                f"thre1={spec.thre1}, k1={spec.k1}, {spec.replications} replication(s)")

    jobs = []
    configs = []
    for name, policy in policies.items():
        for r in range(spec.replications):
            jobs.append((name, r))
            configs.append(base.with_overrides(policy=policy, seed=spec.seed + r))
    results = dict(zip(jobs, run_many(configs, spec.workers)))

    per_replication: Dict[str, List[float]] = {
        name: [results[(name, r)] for r in range(spec.replications)] for name in policies
    }
    means = {name: float(np.mean(values)) for name, values in per_replication.items()}
    for name, value in means.items():
        logger.info(f"{name}: {value:.4f} Mb/s")

    return RandomOccupancyResult(throughput_mbps=means, schedule=schedule,
                                 per_replication=per_replication)
