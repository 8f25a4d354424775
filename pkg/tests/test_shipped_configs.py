"""End-to-end runs of every shipped config through the CLI."""
import json
from pathlib import Path

import numpy as np
import pytest

from solvcirc.cli import main

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def test_config_dir_present():
    assert CONFIG_DIR.is_dir()
    assert len(list(CONFIG_DIR.glob("*.json"))) >= 5


@pytest.mark.parametrize("name", ["oracle_q2_dressed_swap.json", "oracle_q4_general.json"])
def test_shipped_oracle_configs_agree(name, tmp_path):
    out = tmp_path / "o.csv"
    code = main(["oracle", "--config", str(CONFIG_DIR / name), "--out", str(out)])
    assert code == 0
    for line in out.read_text().strip().split("\n")[1:]:
        assert float(line.split(",")[1]) < 1e-10


def test_shipped_configs_pass_check(tmp_path):
    for name in ("oracle_q2_dressed_swap.json", "oracle_q4_general.json",
                 "entropy_saturation.json", "fixed_point_q2.json"):
        assert main(["check", "--config", str(CONFIG_DIR / name)]) == 0


def test_saturation_config_reaches_max_entropy(tmp_path):
    out = tmp_path / "saturation.csv"
    code = main(["evolve", "--config", str(CONFIG_DIR / "entropy_saturation.json"),
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 42
    final_s = float(lines[-1].split(",")[1])
    assert abs(final_s - 4 * np.log(2)) < 1e-3


def test_renyi_config_cross_checks(tmp_path):
    out = tmp_path / "renyi.csv"
    code = main(["renyi", "--config", str(CONFIG_DIR / "renyi_cluster.json"),
                 "--oracle", "--out", str(out)])
    assert code == 0
    rows = [line.split(",") for line in out.read_text().strip().split("\n")[1:]]
    assert len(rows) == 6  # n in {2,3} x t in {1,2,3}
    for f in rows:
        assert abs(float(f[2]) - float(f[3])) < 1e-8
        assert 0.0 <= float(f[5]) <= 2.0 + 1e-8


def test_fixed_point_config(capsys):
    code = main(["fixed-point", "--config", str(CONFIG_DIR / "fixed_point_q2.json")])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["fixed_point_residual"] < 1e-10
    assert payload["solvable_left_residual"] < 1e-10
