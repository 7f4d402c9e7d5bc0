import json
import math

import pytest
from click.testing import CliRunner

from carbonpairs import TripletStore
from carbonpairs.cli import _parse_bind, main

from conftest import write_catalog_file


@pytest.fixture
def runner():
    return CliRunner()


def test_parse_bind():
    assert _parse_bind("127.0.0.1:8000") == ("127.0.0.1", 8000)
    assert _parse_bind("0.0.0.0:80") == ("0.0.0.0", 80)
    with pytest.raises(Exception):
        _parse_bind("no-port")


def test_simulate_writes_csv_and_json(runner, tmp_path):
    out = tmp_path / "sim.csv"
    result = runner.invoke(
        main,
        ["simulate", "--policy", "random", "--n", "12", "--seeds", "2", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    assert out.exists()
    mirror = json.loads(out.with_suffix(".json").read_text())
    assert mirror["policy"] == "random"
    assert "rmse_raw" in result.output or "rmse_raw" in out.read_text()


def test_simulate_rejects_unknown_policy(runner, tmp_path):
    result = runner.invoke(main, ["simulate", "--policy", "bogus", "--out", str(tmp_path / "x.csv")])
    assert result.exit_code != 0


def test_fit_prints_table_and_writes_outputs(runner, tmp_path):
    catalog_path = write_catalog_file(tmp_path / "unit.json", [1, 1, 1])
    log_path = tmp_path / "log.jsonl"
    with TripletStore(log_path) as store:
        store.append_triplet("s1", 1, 2, math.e)
    out = tmp_path / "fit.csv"
    result = runner.invoke(
        main,
        ["fit", "--log", str(log_path), "--catalog", str(catalog_path), "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    assert "n_observations=1" in result.output
    assert out.exists() and out.with_suffix(".json").exists()
    mirror = json.loads(out.with_suffix(".json").read_text())
    assert mirror["n_observations"] == 1
    assert mirror["rows"][0]["perceived_kg"] == pytest.approx(1.6099296, abs=1e-6)


def test_export_writes_chart_csv(runner, tmp_path):
    log_path = tmp_path / "log.jsonl"
    log_path.write_text("")
    out = tmp_path / "chart.csv"
    result = runner.invoke(main, ["export", "--log", str(log_path), "--out", str(out)])
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert lines[0] == "action_id,title,perceived_kg,true_kg,log10_ratio"
    assert len(lines) == 19
