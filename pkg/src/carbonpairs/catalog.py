"""Action catalog loading and prior construction.

The catalog is a static JSON file shipped with a deployment: a list of
comparable everyday actions, each with a ground-truth footprint in
kgCO2-equivalent. Footprints are stored in linear kg units; all modelling
happens on their natural logs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

DEFAULT_SIGMA_P_SQ = 10.0
DEFAULT_SIGMA_N_SQ = 1.0


class CatalogError(ValueError):
    """A catalog document violates the catalog file contract."""


@dataclass(frozen=True)
class Action:
    """One comparable behaviour with its ground-truth footprint."""

    id: int
    title: str
    description: str
    true_footprint: float  # kgCO2e, linear units

    @property
    def log_footprint(self) -> float:
        return math.log(self.true_footprint)


@dataclass(frozen=True)
class Catalog:
    """Ordered, validated set of actions. Immutable after load."""

    actions: tuple[Action, ...]

    @property
    def size(self) -> int:
        return len(self.actions)

    def action(self, action_id: int) -> Action:
        if not 1 <= action_id <= self.size:
            raise CatalogError(f"unknown action id {action_id}")
        return self.actions[action_id - 1]

    def log_footprints(self) -> np.ndarray:
        """Natural logs of the true footprints, indexed by id order."""
        out = np.array([a.log_footprint for a in self.actions])
        out.flags.writeable = False
        return out


@dataclass(frozen=True)
class PriorSpec:
    """Hyperparameters of the Gaussian belief before any comparison.

    The prior mean is a constant vector (one shared scalar per action) and
    the prior covariance is spherical, so only its variance is stored.
    """

    mean: np.ndarray
    sigma_p_sq: float
    sigma_n_sq: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma_p_sq) and self.sigma_p_sq > 0):
            raise ValueError(f"sigma_p_sq must be positive, got {self.sigma_p_sq}")
        if not (math.isfinite(self.sigma_n_sq) and self.sigma_n_sq > 0):
            raise ValueError(f"sigma_n_sq must be positive, got {self.sigma_n_sq}")
        self.mean.flags.writeable = False

    @property
    def size(self) -> int:
        return self.mean.shape[0]


def _parse_action(record: object, position: int) -> Action:
    if not isinstance(record, dict):
        raise CatalogError(f"record #{position}: expected an object, got {type(record).__name__}")
    try:
        action_id = record["id"]
        title = record["title"]
        description = record["description"]
        kg = record["kg_co2e"]
    except KeyError as exc:
        raise CatalogError(f"record #{position}: missing field {exc.args[0]!r}") from None
    if not isinstance(action_id, int) or isinstance(action_id, bool):
        raise CatalogError(f"record #{position}: id must be an integer, got {action_id!r}")
    if not isinstance(title, str) or not isinstance(description, str):
        raise CatalogError(f"action id {action_id}: title and description must be strings")
    if isinstance(kg, bool) or not isinstance(kg, (int, float)) or not math.isfinite(kg):
        raise CatalogError(f"action id {action_id}: kg_co2e must be a finite number, got {kg!r}")
    if kg <= 0:
        raise CatalogError(f"action id {action_id}: non-positive footprint {kg!r}")
    return Action(id=action_id, title=title, description=description, true_footprint=float(kg))


def load_catalog(source: str | Path) -> Catalog:
    """Load and validate a catalog JSON document.

    Any invariant violation (duplicate id, non-contiguous ids, non-positive
    footprint, fewer than two actions) rejects the whole file with a
    diagnostic naming the offending record.
    """
    path = Path(source)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CatalogError(f"malformed catalog document {path}: {exc}") from exc
    if not isinstance(raw, list):
        raise CatalogError(f"catalog document {path} must be a top-level array")

    actions = [_parse_action(record, pos) for pos, record in enumerate(raw, start=1)]

    seen: set[int] = set()
    for action in actions:
        if action.id in seen:
            raise CatalogError(f"duplicate action id {action.id}")
        seen.add(action.id)
    if len(actions) < 2:
        raise CatalogError(f"catalog needs at least 2 actions, got {len(actions)}")
    expected = set(range(1, len(actions) + 1))
    if seen != expected:
        missing = sorted(expected - seen)
        raise CatalogError(f"action ids must form 1..{len(actions)}; missing {missing}")

    actions.sort(key=lambda a: a.id)
    return Catalog(actions=tuple(actions))


def default_catalog_path() -> Path:
    """Path of the 18-action catalog shipped with the package."""
    return Path(resources.files("carbonpairs").joinpath("data/actions_18.json"))


def prior_mean_scalar(catalog: Catalog) -> float:
    """Arithmetic mean of the log true footprints.

    Anchors the additive constant that pairwise comparisons alone cannot
    identify, so that estimated and true footprints live on the same scale.
    """
    return float(np.mean(catalog.log_footprints()))


def build_prior(
    catalog: Catalog,
    sigma_p_sq: float = DEFAULT_SIGMA_P_SQ,
    sigma_n_sq: float = DEFAULT_SIGMA_N_SQ,
) -> PriorSpec:
    """Constant-mean, spherical-covariance prior for the catalog's actions."""
    c = prior_mean_scalar(catalog)
    return PriorSpec(
        mean=np.full(catalog.size, c),
        sigma_p_sq=float(sigma_p_sq),
        sigma_n_sq=float(sigma_n_sq),
    )
