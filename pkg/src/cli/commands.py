"""Subcommand implementations."""

import json
import logging
import math
import os
import time
from typing import Dict, List

from src.analytic.ratio import crossover_threshold
from src.analytic.two_channel import (OccupancyPair, legacy_factor, npca_classic_factor,
                                      npca_overhead_factor)
from src.cli.io import RunManifest, prepare_output_dir, write_csv, write_json
from src.scenarios.models import (OCCUPANCY_CLASSES, SCENARIO_GRIDS, RandomOccupancySpec,
                                  Scenario, SweepSpec, grid_values)
from src.scenarios.random_occupancy import run_random_occupancy
from src.scenarios.sweep import run_sweep, simulated_crossover
from src.scenarios.validation import validation_grid
from src.simcore.engine import run_sim
from src.simcore.metrics import measured_throughput
from src.simcore.models import AccessPolicy, PolicyKind, SimConfig
from src.utils.config import config
from src.utils.errors import ConfigError, UsageError

logger = logging.getLogger(__name__)

ANALYTIC_COLUMNS = ["p1", "p2", "l", "s_leg_factor", "s_npca_star_factor", "s_npca_factor", "ratio"]
SCENARIO_COLUMNS = ["p1", "p2", "l", "analytic_ratio", "sim_legacy_mbps", "sim_npca_mbps",
                    "sim_ratio", "ci_halfwidth"]
VALIDATION_COLUMNS = ["p1", "p2", "l", "model", "analytic_mbps", "sim_mbps", "deviation"]


def _check_occupancy(name: str, value: float, allow_one: bool) -> None:
    if not math.isfinite(value) or value < 0.0 or value > 1.0 or (value == 1.0 and not allow_one):
        bound = "[0, 1]" if allow_one else "[0, 1)"
        hint = "" if allow_one else f" ({name} = 1 makes the NPCA secondary term singular)"
        raise UsageError(f"--{name} must be in {bound}, got {value}{hint}")


def _check_overhead(values: List[float]) -> None:
    for l in values:
        if not math.isfinite(l) or l < 1.0:
            raise UsageError(f"--l must be >= 1, got {l}")


def _out_dir(args) -> str:
    return args.out or config.output_dir()


def _l_values(args) -> List[float]:
    values = list(args.l) if args.l else list(config.get("sweep.l_values", [1.8, 2.0, 2.2]))
    _check_overhead(values)
    return values


def _grid_step(args, scenario: Scenario) -> float:
    if args.grid_step is not None:
        return args.grid_step
    if scenario is Scenario.C:
        return config.get("sweep.scenario_c_step", 0.05)
    return config.get("sweep.grid_step", 0.02)


def load_sim_config(path: str) -> SimConfig:
    """Read a flat run configuration file."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"run configuration not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"cannot parse {path}: {e}")
    return SimConfig.from_dict(data)


def analytic_row(p1: float, p2: float, l: float) -> Dict:
    occ = OccupancyPair(p1, p2)
    s_leg = legacy_factor(occ)
    s_npca = npca_overhead_factor(occ, l)
    return {
        "p1": p1,
        "p2": p2,
        "l": l,
        "s_leg_factor": s_leg,
        "s_npca_star_factor": npca_classic_factor(occ),
        "s_npca_factor": s_npca,
        "ratio": s_npca / s_leg
    }


def cmd_analytic(args) -> int:
    """Closed-form factors and ratio for one point or a scenario grid."""
    l_values = list(args.l) if args.l else [2.0]
    _check_overhead(l_values)
    if args.sweep:
        scenario = Scenario(args.sweep)
        (lo, hi), p2 = SCENARIO_GRIDS[scenario]
        points = [(p, p if p2 is None else p2) for p in grid_values(lo, hi, _grid_step(args, scenario))]
    else:
        if args.p1 is None or args.p2 is None:
            raise UsageError("--p1 and --p2 are required unless --sweep is given")
        _check_occupancy("p1", args.p1, allow_one=False)
        _check_occupancy("p2", args.p2, allow_one=True)
        points = [(args.p1, args.p2)]

    rows = [analytic_row(p1, p2, l) for l in l_values for p1, p2 in points]
    for row in rows:
        print(", ".join(f"{k}={row[k]:.6g}" for k in ANALYTIC_COLUMNS))
    for l in l_values:
        p_star = crossover_threshold(l)
        print(f"crossover l={l:g}: " + ("none" if p_star is None else f"p*={p_star:.6f}"))

    if args.out:
        start = time.perf_counter()
        out_dir = prepare_output_dir(args.out)
        csv_path = write_csv(rows, os.path.join(out_dir, "analytic.csv"), ANALYTIC_COLUMNS)
        manifest = RunManifest(
            command="analytic",
            config={"sweep": args.sweep, "grid_step": args.grid_step, "p1": args.p1,
                    "p2": args.p2, "l": l_values},
            seeds=[],
            wall_clock_s=time.perf_counter() - start,
            outputs=[os.path.basename(csv_path)]
        )
        manifest.write(out_dir)
    return 0


def _base_config(args) -> SimConfig:
    base = load_sim_config(args.config)
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "sim_time", None) is not None:
        overrides["sim_time_s"] = args.sim_time
    return base.with_overrides(**overrides) if overrides else base


def cmd_simulate(args) -> int:
    """One simulation run; writes its metrics as CSV and JSON."""
    out_dir = prepare_output_dir(_out_dir(args))
    sim_config = _base_config(args)

    overrides = {}
    if args.policy:
        kind = PolicyKind(args.policy)
        overrides["policy"] = (AccessPolicy.hybrid(config.get("hybrid.thre1", 0.6),
                                                   config.get("hybrid.k1", 50000))
                               if kind is PolicyKind.HYBRID else AccessPolicy(kind))
    for flag, key in (("p1", "obss_p1"), ("p2", "obss_p2"), ("l", "l")):
        value = getattr(args, flag)
        if value is not None:
            overrides[key] = value
    if overrides:
        sim_config = sim_config.with_overrides(**overrides)

    start = time.perf_counter()
    logger.info(f"Simulating {sim_config.policy.kind.value} for {sim_config.sim_time_s}s "
                f"(seed {sim_config.seed})")
    metrics = run_sim(sim_config)
    throughput = measured_throughput(metrics, sim_config.sim_time_s)

    row = {
        "policy": sim_config.policy.kind.value,
        "seed": sim_config.seed,
        "primary_mbps": throughput.primary_mbps,
        "secondary_mbps": throughput.secondary_mbps,
        "total_mbps": throughput.total_mbps,
        "switch_count": metrics.switch_count,
        "overhead_count": metrics.overhead_count,
        "measured_p1": metrics.measured_p1,
        "measured_p2": metrics.measured_p2,
        "primary_successes": metrics.primary.success_count,
        "secondary_successes": metrics.secondary.success_count,
        "primary_collisions": metrics.primary.collision_count,
        "secondary_collisions": metrics.secondary.collision_count,
        "primary_overhead_slots": metrics.primary.overhead_slots,
        "secondary_overhead_slots": metrics.secondary.overhead_slots,
        "total_slots": metrics.total_slots
    }
    print(", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in row.items()))

    csv_path = write_csv([row], os.path.join(out_dir, "metrics.csv"))
    json_path = write_json(metrics.to_dict(), os.path.join(out_dir, "metrics.json"))
    manifest = RunManifest(
        command="simulate",
        config=sim_config.to_dict(),
        seeds=[sim_config.seed],
        wall_clock_s=time.perf_counter() - start,
        outputs=[os.path.basename(csv_path), os.path.basename(json_path)]
    )
    manifest.write(out_dir)
    return 0


def cmd_sweep(args) -> int:
    """Scenario A/B/C sweeps, the validation grid, or the random-occupancy experiment."""
    if args.scenario == "random-occupancy":
        return cmd_hybrid_experiment(args)

    l_values = _l_values(args)
    replications = (args.replications if args.replications is not None
                    else config.get("sweep.replications", 5))
    if replications < 1:
        raise UsageError(f"--replications must be >= 1, got {replications}")
    out_dir = prepare_output_dir(_out_dir(args))
    base = _base_config(args)
    if args.sim_time is None:
        base = base.with_overrides(sim_time_s=config.get("sweep.sim_time_s", 10.0))

    start = time.perf_counter()
    outputs = []
    step = None
    if args.scenario == "validation":
        report = validation_grid(base, l_values=l_values, replications=replications,
                                 workers=args.workers)
        outputs.append(write_csv([r.to_dict() for r in report.rows],
                                 os.path.join(out_dir, "validation.csv"), VALIDATION_COLUMNS))
        outputs.append(write_csv([report.worst.to_dict()],
                                 os.path.join(out_dir, "validation_worst.csv"), VALIDATION_COLUMNS))
    else:
        scenario = Scenario(args.scenario)
        step = _grid_step(args, scenario)
        spec = SweepSpec(scenario=scenario, l_values=tuple(l_values), grid_step=step,
                         replications=replications, base=base, workers=args.workers)
        rows = run_sweep(spec)

        crossovers = []
        for l in spec.l_values:
            family = [r for r in rows if r.l == l]
            outputs.append(write_csv([r.to_dict() for r in family],
                                     os.path.join(out_dir, f"scenario_{scenario.value}_l{l:g}.csv"),
                                     SCENARIO_COLUMNS))
            if scenario is Scenario.C:
                analytic = crossover_threshold(l)
                simulated = simulated_crossover(family)
                logger.info(f"l={l:g}: analytic crossover {analytic}, simulated {simulated}")
                if analytic is not None and simulated is not None:
                    crossovers.append({"l": l, "analytic_crossover": analytic,
                                       "simulated_crossover": simulated})
                else:
                    logger.warning(f"No crossover found for l={l:g}; left out of the crossover table")
        if scenario is Scenario.C:
            outputs.append(write_csv(crossovers, os.path.join(out_dir, "scenario_c_crossover.csv"),
                                     ["l", "analytic_crossover", "simulated_crossover"]))

    manifest = RunManifest(
        command=f"sweep {args.scenario}",
        config={"base": base.to_dict(), "l_values": l_values, "grid_step": step,
                "replications": replications},
        seeds=[base.seed + r for r in range(replications)],
        wall_clock_s=time.perf_counter() - start,
        outputs=[os.path.basename(p) for p in outputs]
    )
    manifest.write(out_dir)
    return 0


def cmd_hybrid_experiment(args) -> int:
    """Legacy vs NPCA vs hybrid under randomly redrawn occupancies."""
    if args.l and len(args.l) > 1:
        raise UsageError(f"the random-occupancy experiment takes a single --l, got {args.l}")
    l = args.l[0] if args.l else config.get("random_occupancy.l", 2.2)
    _check_overhead([l])
    replications = args.replications if args.replications is not None else 1
    if replications < 1:
        raise UsageError(f"--replications must be >= 1, got {replications}")

    out_dir = prepare_output_dir(_out_dir(args))
    base = load_sim_config(args.config)
    seed = args.seed if args.seed is not None else base.seed

    def setting(value, key, default):
        return value if value is not None else config.get(key, default)

    spec = RandomOccupancySpec(
        period_s=setting(args.period, "random_occupancy.period_s", 1.0),
        n_periods=setting(args.n_periods, "random_occupancy.n_periods", 200),
        occupancy_classes=OCCUPANCY_CLASSES[:1] if args.idle_only else OCCUPANCY_CLASSES,
        l=l,
        thre1=setting(args.thre1, "hybrid.thre1", 0.6),
        k1=setting(args.k1, "hybrid.k1", 50000),
        seed=seed,
        replications=replications,
        base=base,
        workers=args.workers
    )

    start = time.perf_counter()
    result = run_random_occupancy(spec)
    for row in result.rows():
        print(f"{row['model']}: {row['throughput_mbps']:.4f} Mb/s")

    outputs = [
        write_csv(result.rows(), os.path.join(out_dir, "random_occupancy_summary.csv"),
                  ["model", "throughput_mbps"]),
        write_csv([{"period": i, "p1": p1, "p2": p2} for i, (p1, p2) in enumerate(result.schedule)],
                  os.path.join(out_dir, "random_occupancy_schedule.csv"), ["period", "p1", "p2"])
    ]
    manifest = RunManifest(
        command="hybrid-experiment",
        config={"base": base.to_dict(), "period_s": spec.period_s, "n_periods": spec.n_periods,
                "occupancy_classes": [list(c) for c in spec.occupancy_classes], "l": spec.l,
                "thre1": spec.thre1, "k1": spec.k1, "replications": spec.replications},
        seeds=[seed + r for r in range(spec.replications)],
        wall_clock_s=time.perf_counter() - start,
        outputs=[os.path.basename(p) for p in outputs]
    )
    manifest.write(out_dir)
    return 0
