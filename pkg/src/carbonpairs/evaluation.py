"""Offline simulation, policy benchmarking, batch fitting, and chart export.

A synthetic respondent answers comparisons from a fixed latent log-weight
vector plus Gaussian noise, which lets question-selection policies be
benchmarked without human data. Recovery error is reported two ways:
comparisons only identify weights up to an additive constant, so alongside
the raw RMSE we report the RMSE after removing the all-ones component from
both vectors (the part the data can actually pin down; the prior mean
anchors the rest).
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .catalog import Catalog, PriorSpec, build_prior, load_catalog
from .inference import (
    Posterior,
    Triplet,
    perceived_footprint,
    posterior_from_dataset,
    posterior_from_prior,
    posterior_update,
)
from .selector import information_gain, select_pair
from .session import DEFAULT_Y_BOUNDS
from .store import read_triplet_log

POLICIES = ("active", "random", "round_robin")


@dataclass(frozen=True)
class SyntheticRespondent:
    """Latent truth that generates answers: ln y = v_i - v_j + noise."""

    true_log_weights: np.ndarray
    response_noise_sq: float

    def __post_init__(self):
        # zero noise is allowed: it gives the deterministic consistency probe
        if self.response_noise_sq < 0:
            raise ValueError(f"response_noise_sq must be nonnegative, got {self.response_noise_sq}")
        self.true_log_weights.flags.writeable = False

    @classmethod
    def from_catalog(cls, catalog: Catalog, response_noise_sq: float = 1.0) -> "SyntheticRespondent":
        return cls(
            true_log_weights=catalog.log_footprints().copy(),
            response_noise_sq=response_noise_sq,
        )


def simulate_answer(
    respondent: SyntheticRespondent,
    pair: tuple[int, int],
    rng: np.random.Generator,
    y_bounds: tuple[float, float] = DEFAULT_Y_BOUNDS,
) -> Triplet:
    """Draw one noisy answer for the pair, clamped to the accepted range."""
    i, j = pair
    v = respondent.true_log_weights
    log_ratio = v[i - 1] - v[j - 1] + rng.normal(0.0, math.sqrt(respondent.response_noise_sq))
    y = min(max(math.exp(log_ratio), y_bounds[0]), y_bounds[1])
    return Triplet(i=i, j=j, y=y)


def default_checkpoints(n_questions: int) -> tuple[int, ...]:
    """Geometric-ish checkpoints {10, 25, 50, 100, 200, ...} capped at n."""
    points = [10, 25]
    while points[-1] * 2 <= 100_000_000:
        points.append(points[-1] * 2)
    kept = [p for p in points if p <= n_questions]
    if not kept or kept[-1] != n_questions:
        kept.append(n_questions)
    return tuple(kept)


def _rmse(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sqrt(np.mean((a - b) ** 2)))


def _drop_ones_component(a: np.ndarray) -> np.ndarray:
    return a - a.mean()


@dataclass(frozen=True)
class ExperimentReport:
    policy: str
    seeds: tuple[int, ...]
    checkpoints: tuple[int, ...]
    rmse_raw: tuple[float, ...]  # mean over seeds at each checkpoint
    rmse_centered: tuple[float, ...]  # all-ones component removed from both vectors
    mean_info_gain: tuple[float, ...]  # mean per-question gain up to each checkpoint
    min_info_gain: float  # smallest single-question gain over all seeds/steps
    per_seed_rmse_raw: tuple[tuple[float, ...], ...]
    per_seed_rmse_centered: tuple[tuple[float, ...], ...]

    def to_dict(self) -> dict:
        return asdict(self)


def _run_policy_once(
    policy: str,
    n_questions: int,
    respondent: SyntheticRespondent,
    hyper: PriorSpec,
    seed: int,
    checkpoints: tuple[int, ...],
) -> tuple[list[float], list[float], list[float], float]:
    rng = np.random.default_rng(seed)
    posterior = posterior_from_prior(hyper)
    m = hyper.size
    all_pairs = [(i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)]
    v = respondent.true_log_weights
    checkpoint_set = set(checkpoints)

    gains: list[float] = []
    rmse_raw: list[float] = []
    rmse_centered: list[float] = []
    gain_at_checkpoint: list[float] = []
    for step in range(1, n_questions + 1):
        if policy == "active":
            pair = select_pair(posterior, (), hyper.sigma_n_sq)
        elif policy == "random":
            pair = all_pairs[int(rng.integers(len(all_pairs)))]
        elif policy == "round_robin":
            pair = all_pairs[(step - 1) % len(all_pairs)]
        else:
            raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
        gains.append(information_gain(posterior, pair[0], pair[1], hyper.sigma_n_sq))
        answer = simulate_answer(respondent, pair, rng)
        posterior = posterior_update(posterior, answer, hyper)
        if step in checkpoint_set:
            rmse_raw.append(_rmse(posterior.mean, v))
            rmse_centered.append(_rmse(_drop_ones_component(posterior.mean), _drop_ones_component(v)))
            gain_at_checkpoint.append(float(np.mean(gains)))
    return rmse_raw, rmse_centered, gain_at_checkpoint, min(gains)


def run_experiment(
    policy: str,
    n_questions: int,
    n_seeds: int,
    respondent: SyntheticRespondent,
    hyper: PriorSpec,
    checkpoints: tuple[int, ...] | None = None,
    max_workers: int | None = None,
) -> ExperimentReport:
    """Benchmark one question-selection policy on a synthetic respondent.

    Per seed: start from the prior, repeatedly pick a pair (by policy),
    draw a noisy answer, update the posterior; record recovery RMSE at the
    checkpoints. Seeds run independently and are merged in seed order, so
    reports are reproducible.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    if n_questions < 1:
        raise ValueError(f"n_questions must be >= 1, got {n_questions}")
    if n_seeds < 1:
        raise ValueError(f"n_seeds must be >= 1, got {n_seeds}")
    checkpoints = checkpoints or default_checkpoints(n_questions)
    seeds = tuple(range(n_seeds))

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(
            pool.map(
                lambda seed: _run_policy_once(policy, n_questions, respondent, hyper, seed, checkpoints),
                seeds,
            )
        )

    per_seed_raw = tuple(tuple(r[0]) for r in results)
    per_seed_centered = tuple(tuple(r[1]) for r in results)
    mean_gains = np.mean([r[2] for r in results], axis=0)
    return ExperimentReport(
        policy=policy,
        seeds=seeds,
        checkpoints=checkpoints,
        rmse_raw=tuple(float(x) for x in np.mean(per_seed_raw, axis=0)),
        rmse_centered=tuple(float(x) for x in np.mean(per_seed_centered, axis=0)),
        mean_info_gain=tuple(float(x) for x in mean_gains),
        min_info_gain=float(min(r[3] for r in results)),
        per_seed_rmse_raw=per_seed_raw,
        per_seed_rmse_centered=per_seed_centered,
    )


@dataclass(frozen=True)
class PerceptionRow:
    action_id: int
    title: str
    perceived_kg: float
    true_kg: float
    log10_ratio: float


@dataclass(frozen=True)
class FitReport:
    rows: tuple[PerceptionRow, ...]
    n_observations: int
    rmse_log_raw: float
    rmse_log_centered: float

    def to_dict(self) -> dict:
        return asdict(self)


def perception_rows(posterior: Posterior, catalog: Catalog) -> tuple[PerceptionRow, ...]:
    perceived = perceived_footprint(posterior)
    return tuple(
        PerceptionRow(
            action_id=action.id,
            title=action.title,
            perceived_kg=perceived[action.id],
            true_kg=action.true_footprint,
            log10_ratio=math.log10(perceived[action.id] / action.true_footprint),
        )
        for action in catalog.actions
    )


def fit_from_log(
    log_path: str | Path,
    catalog_path: str | Path,
    sigma_n_sq: float | None = None,
    sigma_p_sq: float | None = None,
) -> FitReport:
    """Batch-fit the posterior from a triplet log and compare to truth."""
    catalog = load_catalog(catalog_path)
    hyper = build_prior(
        catalog,
        sigma_p_sq if sigma_p_sq is not None else 10.0,
        sigma_n_sq if sigma_n_sq is not None else 1.0,
    )
    records = read_triplet_log(log_path)
    posterior = posterior_from_dataset((r.as_triplet() for r in records), hyper)
    v = catalog.log_footprints()
    return FitReport(
        rows=perception_rows(posterior, catalog),
        n_observations=posterior.n_observations,
        rmse_log_raw=_rmse(posterior.mean, v),
        rmse_log_centered=_rmse(_drop_ones_component(posterior.mean), _drop_ones_component(v)),
    )


def write_perception_csv(rows: tuple[PerceptionRow, ...], output_path: str | Path) -> Path:
    output_path = Path(output_path)
    with open(output_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["action_id", "title", "perceived_kg", "true_kg", "log10_ratio"])
        for row in rows:
            writer.writerow([row.action_id, row.title, row.perceived_kg, row.true_kg, row.log10_ratio])
    return output_path


def export_perception(posterior: Posterior, catalog: Catalog, output_path: str | Path) -> Path:
    """Write the perceived-vs-true table as chart-ready CSV."""
    return write_perception_csv(perception_rows(posterior, catalog), output_path)


def write_experiment_csv(report: ExperimentReport, output_path: str | Path) -> Path:
    output_path = Path(output_path)
    with open(output_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["policy", "checkpoint", "rmse_raw", "rmse_centered", "mean_info_gain"])
        for idx, checkpoint in enumerate(report.checkpoints):
            writer.writerow(
                [
                    report.policy,
                    checkpoint,
                    report.rmse_raw[idx],
                    report.rmse_centered[idx],
                    report.mean_info_gain[idx],
                ]
            )
    return output_path


def write_json_mirror(payload: dict, csv_path: str | Path) -> Path:
    """Write the JSON twin of a CSV report next to it."""
    json_path = Path(csv_path).with_suffix(".json")
    json_path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return json_path
