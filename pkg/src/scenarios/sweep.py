"""Replicated legacy/NPCA simulations over the occupancy scenarios."""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy import stats

from src.analytic.ratio import throughput_ratio
from src.scenarios.models import ScenarioResult, SweepSpec
from src.simcore.engine import run_sim
from src.simcore.metrics import measured_throughput
from src.simcore.models import AccessPolicy, SimConfig

logger = logging.getLogger(__name__)

CI_LEVEL = 0.95
CROSSOVER_FIT_DEGREE = 3


def simulate_mbps(config: SimConfig) -> float:
    """Total delivered throughput of one run in Mb/s."""
    return measured_throughput(run_sim(config), config.sim_time_s).total_mbps


def run_many(configs: Sequence[SimConfig], workers: int = 1) -> List[float]:
    """Simulate every config; results come back in input order."""
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(simulate_mbps, configs))
    return [simulate_mbps(c) for c in configs]


def ci_halfwidth(samples: Sequence[float], level: float = CI_LEVEL) -> float:
    """Student-t half-width of the mean; 0 for a single sample."""
    n = len(samples)
    if n < 2:
        return 0.0
    spread = float(np.std(samples, ddof=1))
    return float(stats.t.ppf(0.5 + level / 2.0, n - 1)) * spread / math.sqrt(n)


def run_sweep(spec: SweepSpec) -> List[ScenarioResult]:
    """Analytic and simulated ratios for every grid point and l, ordered by (l, p1)."""
    points = spec.points()
    base = spec.base
    reps = range(spec.replications)
    if spec.replications == 1:
        logger.warning("Single replication: confidence half-widths are reported as 0")

    logger.info(f"Sweeping scenario {spec.scenario.value}: {len(points)} points x "
                f"{len(spec.l_values)} l values x {spec.replications} replications")

    # legacy runs do not depend on l and are shared by every l
    jobs: List[Tuple] = []
    configs: List[SimConfig] = []
    for p1, p2 in points:
        for r in reps:
            jobs.append(("legacy", p1, p2, None, r))
            configs.append(base.with_overrides(obss_p1=p1, obss_p2=p2, seed=base.seed + r,
                                               policy=AccessPolicy.legacy()))
            for l in spec.l_values:
                jobs.append(("npca", p1, p2, l, r))
                configs.append(base.with_overrides(obss_p1=p1, obss_p2=p2, l=l, seed=base.seed + r,
                                                   policy=AccessPolicy.npca()))

    results: Dict[Tuple, float] = dict(zip(jobs, run_many(configs, spec.workers)))

    rows = []
    for l in spec.l_values:
        for p1, p2 in points:
            legacy = [results[("legacy", p1, p2, None, r)] for r in reps]
            npca = [results[("npca", p1, p2, l, r)] for r in reps]
            rows.append(_summarize(p1, p2, l, legacy, npca))
    return rows


def _summarize(p1: float, p2: float, l: float, legacy: List[float],
               npca: List[float]) -> ScenarioResult:
    legacy_mean = float(np.mean(legacy))
    npca_mean = float(np.mean(npca))
    if legacy_mean > 0:
        sim_ratio = npca_mean / legacy_mean
    else:
        logger.warning(f"No legacy throughput at p1={p1}, p2={p2}: sim_ratio set to 0")
        sim_ratio = 0.0
    ratios = [n / g for n, g in zip(npca, legacy) if g > 0]

    return ScenarioResult(
        p1=p1,
        p2=p2,
        l=l,
        analytic_ratio=throughput_ratio(p1, p2, l),
        sim_legacy_mbps=legacy_mean,
        sim_npca_mbps=npca_mean,
        sim_ratio=sim_ratio,
        ci_halfwidth=ci_halfwidth(ratios)
    )


def simulated_crossover(rows: Sequence[ScenarioResult],
                        degree: int = CROSSOVER_FIT_DEGREE) -> Optional[float]:
    """Occupancy where the simulated ratio first rises through 1.

    With enough grid points a least-squares polynomial is fitted to the
    ratios and its first upward crossing of 1 is returned, which keeps a
    single noisy point from moving the estimate. Shorter sweeps fall back
    to linear interpolation between neighbours. Rows are expected to share
    one l; they are sorted by p1 first.
    """
    ordered = sorted(rows, key=lambda r: r.p1)
    if len(ordered) > degree + 1:
        p = np.array([r.p1 for r in ordered])
        fit = Polynomial.fit(p, [r.sim_ratio for r in ordered], degree)
        slope = fit.deriv()
        crossings = sorted(float(root.real) for root in (fit - 1.0).roots()
                           if abs(root.imag) < 1e-9 and p[0] <= root.real <= p[-1])
        for root in crossings:
            if slope(root) > 0:
                return root
        return None

    for left, right in zip(ordered, ordered[1:]):
        if left.sim_ratio < 1.0 <= right.sim_ratio:
            span = right.sim_ratio - left.sim_ratio
            return left.p1 + (1.0 - left.sim_ratio) * (right.p1 - left.p1) / span
    return None
