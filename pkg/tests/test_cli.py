import json

import pandas as pd
import pytest

from src.cli.io import RunManifest, make_run_id, write_csv
from src.cli.main import EXIT_CONFIG, EXIT_RUNTIME, EXIT_USAGE, main
from src.simcore.models import AccessPolicy, SimConfig
from src.utils.errors import ConfigError, DomainError


def _manifest(out):
    paths = sorted(out.glob("manifest_*.json"))
    assert len(paths) == 1
    return json.loads(paths[0].read_text())


def test_analytic_point(capsys):
    assert main(["analytic", "--p1", "0.8", "--p2", "0.2", "--l", "2.0"]) == 0
    out = capsys.readouterr().out
    assert "ratio=2.00347" in out
    assert "crossover l=2: p*=0.61" in out


def test_analytic_idle_primary_ratio_is_one(capsys):
    assert main(["analytic", "--p1", "0", "--p2", "0.5", "--l", "2.2"]) == 0
    assert "ratio=1\n" in capsys.readouterr().out


def test_analytic_rejects_singular_primary(capsys):
    assert main(["analytic", "--p1", "1.0", "--p2", "0.2", "--l", "2.0"]) == EXIT_USAGE
    assert "singular" in capsys.readouterr().err


def test_analytic_requires_point_or_sweep():
    assert main(["analytic", "--l", "2.0"]) == EXIT_USAGE


def test_analytic_csv(tmp_path):
    out = tmp_path / "analytic"
    assert main(["analytic", "--sweep", "a", "--l", "1.8", "2.0", "2.2", "--out", str(out)]) == 0
    frame = pd.read_csv(out / "analytic.csv")
    assert list(frame.columns) == ["p1", "p2", "l", "s_leg_factor", "s_npca_star_factor",
                                   "s_npca_factor", "ratio"]
    assert len(frame) == 11 * 3
    assert (frame["ratio"] > 1).all()
    manifest = _manifest(out)
    assert manifest["outputs"] == ["analytic.csv"]


def test_analytic_no_crossover_without_overhead(capsys):
    assert main(["analytic", "--p1", "0.5", "--p2", "0.5", "--l", "1.0"]) == 0
    assert "crossover l=1: none" in capsys.readouterr().out


def test_unknown_policy_is_usage_error(run_config_file, tmp_path):
    assert main(["simulate", "--config", str(run_config_file), "--policy", "greedy",
                 "--out", str(tmp_path)]) == EXIT_USAGE


def test_simulate_is_deterministic(run_config_file, tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    for out in (first, second):
        assert main(["simulate", "--config", str(run_config_file), "--policy", "npca",
                     "--seed", "5", "--out", str(out)]) == 0
    assert (first / "metrics.csv").read_bytes() == (second / "metrics.csv").read_bytes()
    assert (first / "metrics.json").read_bytes() == (second / "metrics.json").read_bytes()
    assert b"\r\n" not in (first / "metrics.csv").read_bytes()

    m1 = _manifest(first)
    m2 = _manifest(second)
    assert m1["run_id"] == m2["run_id"]
    assert m1["seeds"] == [5]
    assert m1["config"]["policy"] == {"kind": "npca"}


def test_simulate_missing_key(tmp_path, table3_dict):
    del table3_dict["slot_us"]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(table3_dict))
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path / "out")]) == EXIT_CONFIG

    with pytest.raises(ConfigError) as info:
        SimConfig.from_dict(table3_dict)
    assert info.value.key == "slot_us"


def test_simulate_bad_type(table3_dict):
    table3_dict["n_stations"] = "ten"
    with pytest.raises(ConfigError) as info:
        SimConfig.from_dict(table3_dict)
    assert info.value.key == "n_stations"


def test_default_file_is_the_default_config(table3_dict):
    assert SimConfig.from_dict(table3_dict) == SimConfig()


def test_config_round_trip():
    configs = [
        SimConfig(),
        SimConfig(obss_p1=0.3, obss_p2=0.6, l=2.2, seed=9, policy=AccessPolicy.npca()),
        SimConfig(policy=AccessPolicy.hybrid(0.6, 500), obss_ppdu_us=2000.0),
        SimConfig(obss_schedule=[(0.2, 0.3), (0.7, 0.1)], schedule_period_s=0.5),
    ]
    for config in configs:
        assert SimConfig.from_dict(json.loads(json.dumps(config.to_dict()))) == config


def test_sweep_writes_one_file_per_l(run_config_file, tmp_path):
    out = tmp_path / "sweep"
    assert main(["sweep", "--scenario", "a", "--config", str(run_config_file), "--l", "1.8", "2.2",
                 "--grid-step", "0.2", "--replications", "1", "--sim-time", "0.2",
                 "--out", str(out)]) == 0
    for name in ("scenario_a_l1.8.csv", "scenario_a_l2.2.csv"):
        frame = pd.read_csv(out / name)
        assert list(frame["p1"]) == [0.6, 0.8]
    assert _manifest(out)["outputs"] == [
        "scenario_a_l1.8.csv", "scenario_a_l2.2.csv"]


def test_sweep_unwritable_output(run_config_file, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("not a directory")
    assert main(["sweep", "--scenario", "b", "--config", str(run_config_file),
                 "--out", str(blocker)]) == EXIT_RUNTIME


def test_hybrid_experiment_summary(run_config_file, tmp_path):
    out = tmp_path / "hybrid"
    assert main(["hybrid-experiment", "--config", str(run_config_file), "--n-periods", "2",
                 "--period", "0.1", "--seed", "3", "--out", str(out)]) == 0
    summary = pd.read_csv(out / "random_occupancy_summary.csv")
    assert list(summary.columns) == ["model", "throughput_mbps"]
    assert list(summary["model"]) == ["Legacy", "NPCA", "Hybrid"]
    assert len(pd.read_csv(out / "random_occupancy_schedule.csv")) == 2


def test_hybrid_experiment_takes_one_l(run_config_file, tmp_path):
    assert main(["hybrid-experiment", "--config", str(run_config_file), "--l", "1.8", "2.0",
                 "--out", str(tmp_path)]) == EXIT_USAGE


def test_non_finite_values_are_refused(tmp_path):
    with pytest.raises(DomainError):
        write_csv([{"x": float("nan")}], str(tmp_path / "bad.csv"))


def test_run_id_is_stable():
    assert make_run_id("simulate", {"a": 1, "b": 2}, [1]) == make_run_id("simulate", {"b": 2, "a": 1}, [1])
    assert make_run_id("simulate", {"a": 1}, [1]) != make_run_id("simulate", {"a": 1}, [2])


def test_l_is_not_read_as_an_abbreviation(capsys):
    assert main(["--log-level", "WARNING", "analytic", "--p1", "0.8", "--p2", "0.2",
                 "--l", "2.0"]) == 0
    assert "ratio=2.00347" in capsys.readouterr().out
    assert main(["analytic", "--p", "0.8", "--p2", "0.2", "--l", "2.0"]) == EXIT_USAGE


def test_manifest_named_after_run(tmp_path):
    manifest = RunManifest(command="simulate", config={"a": 1}, seeds=[1])
    path = manifest.write(str(tmp_path))
    assert path.endswith(f"manifest_{manifest.run_id}.json")
    assert json.loads((tmp_path / manifest.file_name).read_text())["run_id"] == manifest.run_id


def test_sweeps_sharing_a_directory_keep_their_manifests(run_config_file, tmp_path):
    out = tmp_path / "shared"
    for scenario in ("a", "b"):
        assert main(["sweep", "--scenario", scenario, "--config", str(run_config_file),
                     "--l", "2.0", "--grid-step", "0.2", "--replications", "1",
                     "--sim-time", "0.2", "--out", str(out)]) == 0
    manifests = [json.loads(p.read_text()) for p in sorted(out.glob("manifest_*.json"))]
    assert len(manifests) == 2
    outputs = sorted(name for m in manifests for name in m["outputs"])
    assert outputs == ["scenario_a_l2.csv", "scenario_b_l2.csv"]
    for name in outputs:
        assert (out / name).exists()


@pytest.mark.parametrize("command", ["sweep", "hybrid-experiment"])
def test_zero_replications_is_usage_error(run_config_file, tmp_path, command):
    argv = [command, "--config", str(run_config_file), "--replications", "0", "--out", str(tmp_path)]
    if command == "sweep":
        argv += ["--scenario", "a"]
    assert main(argv) == EXIT_USAGE


@pytest.mark.parametrize("flag", ["--p1", "--p2"])
def test_nan_occupancy_is_usage_error(capsys, flag):
    argv = ["analytic", "--p1", "0.5", "--p2", "0.5", "--l", "2.0"]
    argv[argv.index(flag) + 1] = "nan"
    assert main(argv) == EXIT_USAGE
    assert "must be in" in capsys.readouterr().err
