"""Question selection: Gaussian entropy and greedy information gain.

The next question is the unordered action pair whose comparison would
shrink the posterior entropy the most. For a rank-one Gaussian update the
entropy drop depends only on the quadratic form of the comparison vector
under the current covariance, so the argmax never looks at answers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Collection

import numpy as np

from .inference import NotPositiveDefiniteError, Posterior


class PairsExhaustedError(Exception):
    """Every unordered action pair is excluded; nothing left to ask."""


@dataclass(frozen=True)
class PairScore:
    """Selection score of one unordered pair (i < j)."""

    i: int
    j: int
    quadratic_form: float  # sigma_ii + sigma_jj - 2 sigma_ij
    info_gain: float


def entropy(posterior: Posterior) -> float:
    """Differential entropy of the posterior, in nats.

    M/2 (1 + ln 2 pi) + 1/2 ln det(covariance), with the log-determinant
    taken as twice the log-diagonal sum of the Cholesky factor.
    """
    try:
        chol = np.linalg.cholesky(posterior.covariance)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("covariance matrix is not positive definite") from exc
    m = posterior.size
    half_log_det = float(np.sum(np.log(np.diag(chol))))
    return m / 2.0 * (1.0 + math.log(2.0 * math.pi)) + half_log_det


def pair_score(posterior: Posterior, i: int, j: int, sigma_n_sq: float) -> PairScore:
    """Quadratic form and entropy drop for comparing actions i and j."""
    if i == j:
        raise ValueError(f"comparison needs two distinct actions, got i = j = {i}")
    if not (1 <= i <= posterior.size and 1 <= j <= posterior.size):
        raise ValueError(f"action ids ({i}, {j}) out of range 1..{posterior.size}")
    a, b = min(i, j), max(i, j)
    cov = posterior.covariance
    quadratic_form = float(cov[a - 1, a - 1] + cov[b - 1, b - 1] - 2.0 * cov[a - 1, b - 1])
    return PairScore(
        i=a,
        j=b,
        quadratic_form=quadratic_form,
        info_gain=0.5 * math.log1p(quadratic_form / sigma_n_sq),
    )


def information_gain(posterior: Posterior, i: int, j: int, sigma_n_sq: float) -> float:
    """Entropy reduction from one more (i, j) comparison, in nats."""
    return pair_score(posterior, i, j, sigma_n_sq).info_gain


def _normalized_exclusions(exclusions: Collection[tuple[int, int]]) -> set[tuple[int, int]]:
    return {(min(i, j), max(i, j)) for i, j in exclusions}


def select_pair(
    posterior: Posterior,
    exclusions: Collection[tuple[int, int]] = (),
    sigma_n_sq: float = 1.0,
) -> tuple[int, int]:
    """Non-excluded unordered pair with the largest information gain.

    Maximizes the quadratic form directly (same argmax as the gain, which
    is monotone in it). Ties break to the lexicographically smallest
    (i, j): with scores laid out row-major over the upper triangle, the
    first maximum is exactly that pair.
    """
    m = posterior.size
    diag = np.diag(posterior.covariance)
    scores = diag[:, None] + diag[None, :] - 2.0 * posterior.covariance
    scores[np.tril_indices(m)] = -np.inf
    for i, j in _normalized_exclusions(exclusions):
        if 1 <= i <= m and 1 <= j <= m:
            scores[i - 1, j - 1] = -np.inf

    flat_argmax = int(np.argmax(scores))
    i, j = divmod(flat_argmax, m)
    if not np.isfinite(scores[i, j]):
        raise PairsExhaustedError(f"all {m * (m - 1) // 2} unordered pairs are excluded")
    return i + 1, j + 1
