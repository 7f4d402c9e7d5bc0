"""Population-level perceived carbon footprint from pairwise comparisons.

Core pieces: a validated action catalog with a constant-mean spherical
prior, an exact Gaussian posterior over perceived log-footprints, a greedy
information-gain question selector, an append-only triplet log, a quiz
session engine, and an HTTP service plus offline simulation CLI on top.
"""

from .catalog import (
    Action,
    Catalog,
    CatalogError,
    PriorSpec,
    build_prior,
    default_catalog_path,
    load_catalog,
    prior_mean_scalar,
)
from .inference import (
    NotPositiveDefiniteError,
    Posterior,
    Triplet,
    comparison_vector,
    log_likelihood,
    perceived_footprint,
    posterior_from_dataset,
    posterior_from_moments,
    posterior_from_prior,
    posterior_update,
)
from .selector import PairScore, PairsExhaustedError, entropy, information_gain, pair_score, select_pair
from .session import QuestionCard, QuizEngine, ResultsSummary, SessionState
from .store import StoreCorruptionError, TripletRecord, TripletStore, read_triplet_log

__version__ = "0.1.0"

__all__ = [
    "Action",
    "Catalog",
    "CatalogError",
    "PriorSpec",
    "build_prior",
    "default_catalog_path",
    "load_catalog",
    "prior_mean_scalar",
    "NotPositiveDefiniteError",
    "Posterior",
    "Triplet",
    "comparison_vector",
    "log_likelihood",
    "perceived_footprint",
    "posterior_from_dataset",
    "posterior_from_moments",
    "posterior_from_prior",
    "posterior_update",
    "PairScore",
    "PairsExhaustedError",
    "entropy",
    "information_gain",
    "pair_score",
    "select_pair",
    "QuestionCard",
    "QuizEngine",
    "ResultsSummary",
    "SessionState",
    "StoreCorruptionError",
    "TripletRecord",
    "TripletStore",
    "read_triplet_log",
    "__version__",
]
