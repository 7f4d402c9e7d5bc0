import csv
import json
import math

import numpy as np
import pytest

from carbonpairs import TripletStore, build_prior, default_catalog_path, load_catalog, prior_mean_scalar
from carbonpairs.evaluation import (
    SyntheticRespondent,
    default_checkpoints,
    export_perception,
    fit_from_log,
    run_experiment,
    simulate_answer,
    write_experiment_csv,
    write_json_mirror,
)
from carbonpairs.inference import posterior_from_prior

from conftest import write_catalog_file


@pytest.fixture(scope="module")
def shipped_respondent():
    catalog = load_catalog(default_catalog_path())
    return SyntheticRespondent.from_catalog(catalog, response_noise_sq=1.0)


def test_zero_noise_answer_is_exact_true_ratio(shipped_catalog):
    respondent = SyntheticRespondent.from_catalog(shipped_catalog, response_noise_sq=0.0)
    rng = np.random.default_rng(1)
    answer = simulate_answer(respondent, (16, 1), rng)
    assert (answer.i, answer.j) == (16, 1)
    assert answer.y == pytest.approx(2300 / 17, rel=1e-12)
    assert answer.y == pytest.approx(135.2941176, abs=1e-6)


def test_simulated_answers_are_seed_reproducible(shipped_catalog):
    respondent = SyntheticRespondent.from_catalog(shipped_catalog, response_noise_sq=1.0)
    first = simulate_answer(respondent, (3, 11), np.random.default_rng(42))
    second = simulate_answer(respondent, (3, 11), np.random.default_rng(42))
    third = simulate_answer(respondent, (3, 11), np.random.default_rng(43))
    assert first == second
    assert first != third


def test_simulated_answers_are_clamped_to_service_bounds():
    respondent = SyntheticRespondent(true_log_weights=np.array([0.0, 20.0]), response_noise_sq=0.0)
    rng = np.random.default_rng(2)
    assert simulate_answer(respondent, (2, 1), rng).y == 1000.0
    assert simulate_answer(respondent, (1, 2), rng).y == 0.001


def test_negative_noise_rejected():
    with pytest.raises(ValueError, match="nonnegative"):
        SyntheticRespondent(true_log_weights=np.zeros(2), response_noise_sq=-1.0)


def test_default_checkpoints():
    assert default_checkpoints(200) == (10, 25, 50, 100, 200)
    assert default_checkpoints(60) == (10, 25, 50, 60)
    assert default_checkpoints(5) == (5,)
    assert default_checkpoints(10) == (10,)


def test_run_experiment_validates_arguments(shipped_respondent, shipped_catalog):
    hyper = build_prior(shipped_catalog)
    with pytest.raises(ValueError, match="unknown policy"):
        run_experiment("greedy", 10, 1, shipped_respondent, hyper)
    with pytest.raises(ValueError, match="n_questions"):
        run_experiment("random", 0, 1, shipped_respondent, hyper)
    with pytest.raises(ValueError, match="n_seeds"):
        run_experiment("random", 10, 0, shipped_respondent, hyper)


def test_random_policy_report_is_reproducible(shipped_respondent, shipped_catalog):
    hyper = build_prior(shipped_catalog)
    first = run_experiment("random", 30, 3, shipped_respondent, hyper)
    second = run_experiment("random", 30, 3, shipped_respondent, hyper)
    assert first == second  # byte-for-byte: every float identical
    assert first.checkpoints == (10, 25, 30)
    assert list(first.checkpoints) == sorted(first.checkpoints)
    assert all(x >= 0 for x in first.rmse_raw)


def test_round_robin_policy_runs(shipped_respondent, shipped_catalog):
    hyper = build_prior(shipped_catalog)
    report = run_experiment("round_robin", 20, 2, shipped_respondent, hyper)
    assert report.policy == "round_robin"
    assert report.min_info_gain > 0


def test_zero_noise_active_policy_converges_in_differences(shipped_catalog):
    respondent = SyntheticRespondent.from_catalog(shipped_catalog, response_noise_sq=0.0)
    hyper = build_prior(shipped_catalog)
    report = run_experiment("active", 150, 1, respondent, hyper)
    # noiseless answers: the identifiable (difference) part keeps improving
    assert report.rmse_centered[-1] < report.rmse_centered[0]
    assert report.rmse_centered[-1] < 0.35
    # catalog respondent has mean(v) = prior anchor, so raw tracks centered
    assert report.rmse_raw[-1] == pytest.approx(report.rmse_centered[-1], abs=0.05)


def test_shifted_respondent_raw_rmse_converges_to_anchor_offset(shipped_catalog):
    # shifting every true weight by +1 moves only the all-ones component,
    # which no comparison can see; raw error bottoms out at the shift
    shifted = SyntheticRespondent(
        true_log_weights=shipped_catalog.log_footprints() + 1.0,
        response_noise_sq=0.0,
    )
    hyper = build_prior(shipped_catalog)
    report = run_experiment("active", 150, 1, shifted, hyper)
    assert report.rmse_raw[-1] == pytest.approx(1.0, abs=0.15)
    assert report.rmse_centered[-1] < 0.35


def test_experiment_csv_and_json_mirror(tmp_path, shipped_respondent, shipped_catalog):
    hyper = build_prior(shipped_catalog)
    report = run_experiment("random", 25, 2, shipped_respondent, hyper)
    csv_path = write_experiment_csv(report, tmp_path / "report.csv")
    json_path = write_json_mirror(report.to_dict(), csv_path)
    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["policy", "checkpoint", "rmse_raw", "rmse_centered", "mean_info_gain"]
    assert len(rows) == 1 + len(report.checkpoints)
    assert rows[1][0] == "random"
    mirrored = json.loads(json_path.read_text())
    assert mirrored["policy"] == "random"
    assert mirrored["checkpoints"] == list(report.checkpoints)
    assert mirrored["rmse_centered"] == list(report.rmse_centered)


def test_fit_from_empty_log_reports_prior(tmp_path, shipped_catalog):
    log_path = tmp_path / "empty.jsonl"
    log_path.write_text("")
    report = fit_from_log(log_path, default_catalog_path())
    expected = math.exp(prior_mean_scalar(shipped_catalog))
    assert report.n_observations == 0
    assert len(report.rows) == 18
    for row in report.rows:
        assert row.perceived_kg == pytest.approx(expected, rel=1e-12)


def test_fit_single_triplet_fixture_matches_closed_form(tmp_path):
    catalog_path = write_catalog_file(tmp_path / "unit.json", [1, 1, 1])
    log_path = tmp_path / "one.jsonl"
    with TripletStore(log_path) as store:
        store.append_triplet("s1", 1, 2, math.e)
    report = fit_from_log(log_path, catalog_path)
    perceived = {row.action_id: row.perceived_kg for row in report.rows}
    assert perceived[1] == pytest.approx(1.6099296, abs=1e-6)
    assert perceived[2] == pytest.approx(0.6211452, abs=1e-6)
    assert perceived[3] == 1.0
    assert report.n_observations == 1


def test_fit_matches_service_perception_on_same_log(tmp_path):
    from fastapi.testclient import TestClient

    from carbonpairs.service import ServiceConfig, create_app

    log_path = tmp_path / "shared.jsonl"
    config = ServiceConfig(log_path=log_path, answers_per_second=None)
    client = TestClient(create_app(config))
    session_id = client.post("/api/sessions").json()["session_id"]
    for y in (4.0, 0.2, 9.0, 1.5):
        pair = client.get(f"/api/sessions/{session_id}/question").json()["pair"]
        assert client.post(f"/api/sessions/{session_id}/answers", json={"pair": pair, "y": y}).status_code == 204
    service_rows = {row["id"]: row["perceived_kg"] for row in client.get("/api/perception").json()["actions"]}

    report = fit_from_log(log_path, default_catalog_path())
    assert report.n_observations == 4
    for row in report.rows:
        assert abs(row.perceived_kg - service_rows[row.action_id]) < 1e-8


def test_export_perception_writes_chart_data(tmp_path, shipped_catalog):
    posterior = posterior_from_prior(build_prior(shipped_catalog))
    out = export_perception(posterior, shipped_catalog, tmp_path / "chart.csv")
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["action_id", "title", "perceived_kg", "true_kg", "log10_ratio"]
    assert len(rows) == 19  # header + 18 actions
    assert rows[1][1].startswith("Take the train")


def test_export_log10_ratio_zero_when_perception_equals_truth(tmp_path):
    catalog = load_catalog(write_catalog_file(tmp_path / "unit.json", [1, 1]))
    posterior = posterior_from_prior(build_prior(catalog))
    out = export_perception(posterior, catalog, tmp_path / "chart.csv")
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    assert [float(r[4]) for r in rows] == [0.0, 0.0]
