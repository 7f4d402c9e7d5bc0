"""Exact Gaussian posterior over perceived log-footprints.

One comparison "action i has y times the impact of action j" is a linear
measurement of the latent log-footprint vector: ln y = w_i - w_j + noise.
With a Gaussian prior the posterior stays Gaussian and has a closed form,
so both batch fitting and per-answer incremental updates are exact.

The precision matrix and information vector are the source of truth;
covariance and mean are recomputed from them by a Cholesky solve after
every update. Repeated covariance-side rank-one updates would accumulate
drift, the precision-side update does not.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .catalog import PriorSpec

logger = logging.getLogger(__name__)

# Added to the precision diagonal only if factorization fails, which cannot
# happen while the prior variance is finite; kept as a last-resort escape hatch.
JITTER = 1e-10


class NotPositiveDefiniteError(ValueError):
    """A covariance/precision matrix failed its Cholesky factorization."""


@dataclass(frozen=True)
class Triplet:
    """One observation: action `i` has impact ratio `y` over action `j`."""

    i: int
    j: int
    y: float

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError(f"comparison needs two distinct actions, got i = j = {self.i}")
        if self.i < 1 or self.j < 1:
            raise ValueError(f"action ids must be >= 1, got ({self.i}, {self.j})")
        if not math.isfinite(self.y) or self.y <= 0:
            raise ValueError(f"impact ratio must be a positive finite number, got {self.y!r}")

    @property
    def log_ratio(self) -> float:
        return math.log(self.y)


@dataclass(frozen=True)
class Posterior:
    """Gaussian belief N(mean, covariance) over the log-footprint vector.

    A value type: updates return a new Posterior. `precision` and
    `info_vector` are the natural parameters (info_vector = precision @ mean
    up to round-off); `covariance` is kept symmetrized.
    """

    mean: np.ndarray
    covariance: np.ndarray
    precision: np.ndarray
    info_vector: np.ndarray
    n_observations: int

    def __post_init__(self):
        for array in (self.mean, self.covariance, self.precision, self.info_vector):
            array.flags.writeable = False

    @property
    def size(self) -> int:
        return self.mean.shape[0]


def comparison_vector(i: int, j: int, size: int) -> np.ndarray:
    """Vector that is +1 at entry i, -1 at entry j, 0 elsewhere (1-based ids)."""
    if i == j:
        raise ValueError(f"comparison needs two distinct actions, got i = j = {i}")
    if not (1 <= i <= size and 1 <= j <= size):
        raise ValueError(f"action ids ({i}, {j}) out of range 1..{size}")
    x = np.zeros(size)
    x[i - 1] = 1.0
    x[j - 1] = -1.0
    return x


def _factor(precision: np.ndarray):
    try:
        return cho_factor(precision, lower=True)
    except np.linalg.LinAlgError:
        logger.warning("precision factorization failed; retrying with %g jitter", JITTER)
        try:
            return cho_factor(precision + JITTER * np.eye(precision.shape[0]), lower=True)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefiniteError("precision matrix is not positive definite") from exc


def _moments(precision: np.ndarray, info_vector: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mean and symmetrized covariance from the natural parameters."""
    factor = _factor(precision)
    covariance = cho_solve(factor, np.eye(precision.shape[0]))
    covariance = (covariance + covariance.T) / 2.0
    mean = cho_solve(factor, info_vector)
    return mean, covariance


def posterior_from_prior(prior: PriorSpec) -> Posterior:
    """Zero-observation posterior: mean = prior mean, covariance spherical."""
    m = prior.size
    return Posterior(
        mean=prior.mean.copy(),
        covariance=prior.sigma_p_sq * np.eye(m),
        precision=np.eye(m) / prior.sigma_p_sq,
        info_vector=prior.mean / prior.sigma_p_sq,
        n_observations=0,
    )


def posterior_update(posterior: Posterior, triplet: Triplet, hyper: PriorSpec) -> Posterior:
    """Fold one triplet into the posterior via the rank-one precision update.

    Equivalent (within solve round-off) to refitting the whole extended
    dataset in batch.
    """
    x = comparison_vector(triplet.i, triplet.j, posterior.size)
    noise_precision = 1.0 / hyper.sigma_n_sq
    precision = posterior.precision + noise_precision * np.outer(x, x)
    info_vector = posterior.info_vector + noise_precision * triplet.log_ratio * x
    mean, covariance = _moments(precision, info_vector)
    return Posterior(
        mean=mean,
        covariance=covariance,
        precision=precision,
        info_vector=info_vector,
        n_observations=posterior.n_observations + 1,
    )


def posterior_from_dataset(triplets: Iterable[Triplet], hyper: PriorSpec) -> Posterior:
    """Batch posterior over a whole dataset of triplets.

    Accumulates the data terms of the precision matrix and information
    vector (each comparison touches four precision entries), then solves
    once for the moments.
    """
    triplets = list(triplets)
    if not triplets:
        return posterior_from_prior(hyper)

    m = hyper.size
    noise_precision = 1.0 / hyper.sigma_n_sq
    precision = np.eye(m) / hyper.sigma_p_sq
    info_vector = hyper.mean / hyper.sigma_p_sq
    for triplet in triplets:
        if triplet.i > m or triplet.j > m:
            raise ValueError(f"action ids ({triplet.i}, {triplet.j}) out of range 1..{m}")
        a, b = triplet.i - 1, triplet.j - 1
        precision[a, a] += noise_precision
        precision[b, b] += noise_precision
        precision[a, b] -= noise_precision
        precision[b, a] -= noise_precision
        scaled_log_ratio = noise_precision * triplet.log_ratio
        info_vector[a] += scaled_log_ratio
        info_vector[b] -= scaled_log_ratio

    mean, covariance = _moments(precision, info_vector)
    return Posterior(
        mean=mean,
        covariance=covariance,
        precision=precision,
        info_vector=info_vector,
        n_observations=len(triplets),
    )


def posterior_from_moments(mean: np.ndarray, covariance: np.ndarray, n_observations: int = 0) -> Posterior:
    """Posterior wrapping externally supplied moments (experiments, tests)."""
    mean = np.asarray(mean, dtype=float).copy()
    covariance = np.asarray(covariance, dtype=float)
    if covariance.shape != (mean.shape[0], mean.shape[0]):
        raise ValueError(f"covariance shape {covariance.shape} does not match mean length {mean.shape[0]}")
    if np.max(np.abs(covariance - covariance.T)) > 1e-10:
        raise ValueError("covariance must be symmetric")
    covariance = (covariance + covariance.T) / 2.0
    try:
        factor = cho_factor(covariance, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("covariance matrix is not positive definite") from exc
    precision = cho_solve(factor, np.eye(covariance.shape[0]))
    precision = (precision + precision.T) / 2.0
    info_vector = cho_solve(factor, mean)
    return Posterior(
        mean=mean,
        covariance=covariance,
        precision=precision,
        info_vector=info_vector,
        n_observations=n_observations,
    )


def perceived_footprint(posterior: Posterior) -> Mapping[int, float]:
    """Per-action perceived footprint in kg: entrywise exp of the mean."""
    return {action_id: float(v) for action_id, v in enumerate(np.exp(posterior.mean), start=1)}


def log_likelihood(triplets: Iterable[Triplet], w: np.ndarray, sigma_n_sq: float) -> float:
    """Log-likelihood of observed log-ratios under weights `w`.

    Each triplet contributes the Gaussian log-density of ln y centered at
    w_i - w_j with variance sigma_n_sq. Empty dataset gives 0.
    """
    if sigma_n_sq <= 0:
        raise ValueError(f"sigma_n_sq must be positive, got {sigma_n_sq}")
    w = np.asarray(w, dtype=float)
    total = 0.0
    log_norm = -0.5 * math.log(2.0 * math.pi * sigma_n_sq)
    for triplet in triplets:
        if triplet.i > w.shape[0] or triplet.j > w.shape[0]:
            raise ValueError(f"action ids ({triplet.i}, {triplet.j}) out of range 1..{w.shape[0]}")
        residual = triplet.log_ratio - (w[triplet.i - 1] - w[triplet.j - 1])
        total += log_norm - residual * residual / (2.0 * sigma_n_sq)
    return total
