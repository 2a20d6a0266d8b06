"""Simulator against closed forms over an occupancy grid."""

import logging
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.analytic.bianchi import bianchi_model, throughput_vs_occupancy
from src.analytic.two_channel import OccupancyPair, legacy_throughput, npca_overhead_throughput
from src.scenarios.models import DEFAULT_L_VALUES, ValidationReport, ValidationRow
from src.scenarios.sweep import run_many
from src.simcore.models import AccessPolicy, PolicyKind, SimConfig

logger = logging.getLogger(__name__)

VALIDATION_OCCUPANCIES = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)


def saturation_mbps(base: SimConfig) -> float:
    """Single-channel saturation throughput S for the base config, in Mb/s."""
    model = bianchi_model(base.n_stations, base.cw_min, base.cw_max, base.ampdu_bytes * 8, base.mac)
    return model.s_bps / 1e6


def analytic_mbps(s_mbps: float, occ: OccupancyPair, l: float, kind: PolicyKind) -> float:
    """Closed-form total throughput of a policy; the models are linear in S, so Mb/s in gives Mb/s out."""
    s_p1 = throughput_vs_occupancy(s_mbps, occ.p1)
    if kind is PolicyKind.LEGACY:
        return legacy_throughput(s_p1, occ).total_bps
    return npca_overhead_throughput(s_p1, occ, l).total_bps


def validation_grid(base: SimConfig, occupancies: Sequence[float] = VALIDATION_OCCUPANCIES,
                    l_values: Sequence[float] = DEFAULT_L_VALUES, replications: int = 5,
                    workers: int = 1) -> ValidationReport:
    """Relative deviation of simulated legacy and NPCA throughput for every (p1, p2, l).

    Each (p1, p2, l) yields one legacy and one NPCA row; the legacy
    simulation is shared across l.
    """
    s_mbps = saturation_mbps(base)
    pairs = [(p1, p2) for p1 in occupancies for p2 in occupancies]
    logger.info(f"Validation grid: {len(pairs)} occupancy pairs x {len(l_values)} l values, "
                f"S={s_mbps:.3f} Mb/s")

    jobs: List[Tuple] = []
    configs: List[SimConfig] = []
    for p1, p2 in pairs:
        for r in range(replications):
            jobs.append((PolicyKind.LEGACY, p1, p2, None, r))
            configs.append(base.with_overrides(obss_p1=p1, obss_p2=p2, seed=base.seed + r,
                                               policy=AccessPolicy.legacy()))
            for l in l_values:
                jobs.append((PolicyKind.NPCA, p1, p2, l, r))
                configs.append(base.with_overrides(obss_p1=p1, obss_p2=p2, l=l, seed=base.seed + r,
                                                   policy=AccessPolicy.npca()))
    results: Dict[Tuple, float] = dict(zip(jobs, run_many(configs, workers)))

    report = ValidationReport()
    for l in l_values:
        for p1, p2 in pairs:
            occ = OccupancyPair(p1, p2)
            for kind in (PolicyKind.LEGACY, PolicyKind.NPCA):
                key_l = None if kind is PolicyKind.LEGACY else l
                sim = float(np.mean([results[(kind, p1, p2, key_l, r)]
                                     for r in range(replications)]))
                analytic = analytic_mbps(s_mbps, occ, l, kind)
                deviation = abs(sim - analytic) / analytic if analytic > 0 else 0.0
                report.rows.append(ValidationRow(p1, p2, l, kind.value, analytic, sim, deviation))

    worst = report.worst
    if worst is not None:
        logger.info(f"Worst deviation {worst.deviation:.3%} ({worst.model} at p1={worst.p1}, "
                    f"p2={worst.p2}, l={worst.l})")
    return report
