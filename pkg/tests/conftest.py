"""Shared fixtures."""

import json
from pathlib import Path

import pytest

from src.analytic.timing import MacTiming
from src.simcore.models import SimConfig

REPO_ROOT = Path(__file__).resolve().parent.parent
TABLE3_PATH = REPO_ROOT / "config" / "table3.json"


@pytest.fixture
def timing():
    return MacTiming.from_table3()


@pytest.fixture
def table3_dict():
    with open(TABLE3_PATH, encoding="utf-8") as f:
        return json.load(f)


@pytest.fixture
def run_config_file(tmp_path, table3_dict):
    """Short-run copy of the default run configuration."""
    data = dict(table3_dict, sim_time_s=0.2, obss_p1=0.3, obss_p2=0.3)
    path = tmp_path / "run.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


@pytest.fixture
def short_config():
    return SimConfig(sim_time_s=1.0)
