"""Quiz sessions against the shared population posterior.

A session is one participant's run of adaptively chosen questions. Every
session selects its next question from the same global posterior (which
already reflects all other participants' answers), excluding only pairs
it has itself asked. Answers are committed immediately: log first, then
posterior, so an acknowledged answer is always replayable.
"""

from __future__ import annotations

import math
import random
import secrets
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .catalog import Action, Catalog, PriorSpec
from .inference import Posterior, Triplet, perceived_footprint, posterior_update
from .selector import select_pair
from .store import TripletStore

ACTIVE = "active"
FINISHED = "finished"

DEFAULT_Y_BOUNDS = (1e-3, 1e3)


class UnknownSessionError(KeyError):
    """No session with the given id."""


class SessionFinishedError(Exception):
    """The session has already been finished."""


class PairNotPendingError(ValueError):
    """The submitted pair is not the most recently served open question."""


class RatioOutOfRangeError(ValueError):
    """The submitted impact ratio falls outside the accepted bounds."""


@dataclass
class SessionState:
    session_id: str
    created_at: datetime
    rng_seed: int
    asked: set[tuple[int, int]] = field(default_factory=set)
    answered: list[Triplet] = field(default_factory=list)
    status: str = ACTIVE
    pending: tuple[int, int] | None = None
    _rng: random.Random = field(init=False, repr=False)

    def __post_init__(self):
        self._rng = random.Random(self.rng_seed)


@dataclass(frozen=True)
class QuestionCard:
    """One comparison as presented: canonical pair plus display order."""

    pair: tuple[int, int]
    left: Action
    right: Action


@dataclass(frozen=True)
class ResultsEntry:
    action_id: int
    perceived_kg: float
    true_kg: float
    log10_error: float


@dataclass(frozen=True)
class ResultsSummary:
    entries: tuple[ResultsEntry, ...]
    n_total_observations: int
    n_session_answers: int


class QuizEngine:
    """Sessions, the global posterior, and the triplet log, wired together.

    All posterior mutations go through one lock (the writer queue); reads
    take the latest committed snapshot without blocking on writers.
    """

    def __init__(
        self,
        catalog: Catalog,
        hyper: PriorSpec,
        store: TripletStore,
        y_bounds: tuple[float, float] = DEFAULT_Y_BOUNDS,
    ):
        lo, hi = y_bounds
        if not (0 < lo < 1 < hi):
            raise ValueError(f"ratio bounds must satisfy 0 < lo < 1 < hi, got {y_bounds}")
        self.catalog = catalog
        self.hyper = hyper
        self.store = store
        self.y_bounds = (float(lo), float(hi))
        self._posterior = store.rebuild_posterior(hyper)
        self._sessions: dict[str, SessionState] = {}
        self._lock = threading.Lock()

    @property
    def posterior(self) -> Posterior:
        """Latest committed posterior snapshot."""
        return self._posterior

    def _session(self, session_id: str) -> SessionState:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise UnknownSessionError(session_id) from None

    def start_session(self, seed: int | None = None) -> SessionState:
        if seed is None:
            seed = secrets.randbits(63)
        session = SessionState(
            session_id=uuid.uuid4().hex,
            created_at=datetime.now(timezone.utc),
            rng_seed=seed,
        )
        with self._lock:
            self._sessions[session.session_id] = session
        return session

    def next_question(self, session_id: str) -> QuestionCard:
        """Serve the maximally informative pair this session has not seen.

        Raises PairsExhaustedError once the session has asked every
        unordered pair.
        """
        with self._lock:
            session = self._session(session_id)
            if session.status != ACTIVE:
                raise SessionFinishedError(session_id)
            pair = select_pair(self._posterior, session.asked, self.hyper.sigma_n_sq)
            session.asked.add(pair)
            session.pending = pair
            i, j = pair
            left_id, right_id = (i, j) if session._rng.random() < 0.5 else (j, i)
        return QuestionCard(
            pair=pair,
            left=self.catalog.action(left_id),
            right=self.catalog.action(right_id),
        )

    def submit_answer(self, session_id: str, pair: tuple[int, int], y: float) -> Triplet:
        """Ingest one answer: y is the impact ratio of pair[0] over pair[1].

        The pair must be the pending question of the session, in either
        orientation; storage is canonicalized to i < j (flipping y to 1/y
        as needed), which leaves the posterior unchanged.
        """
        lo, hi = self.y_bounds
        if not isinstance(y, (int, float)) or not math.isfinite(y) or not lo <= y <= hi:
            raise RatioOutOfRangeError(f"impact ratio must be within [{lo}, {hi}], got {y!r}")
        a, b = pair
        with self._lock:
            session = self._session(session_id)
            if session.status != ACTIVE:
                raise SessionFinishedError(session_id)
            if session.pending is None or {a, b} != set(session.pending):
                raise PairNotPendingError(
                    f"pair ({a}, {b}) is not the pending question of session {session_id}"
                )
            canonical = Triplet(i=min(a, b), j=max(a, b), y=float(y) if a < b else 1.0 / float(y))
            # Durability before visibility: if the append fails, the
            # posterior must not change.
            self.store.append_triplet(session_id, canonical.i, canonical.j, canonical.y)
            self._posterior = posterior_update(self._posterior, canonical, self.hyper)
            session.answered.append(canonical)
            session.pending = None
        return canonical

    def finish_session(self, session_id: str) -> ResultsSummary:
        """Close the session and summarize the population's current belief.

        Idempotent: finishing again recomputes the summary from the
        current posterior.
        """
        with self._lock:
            session = self._session(session_id)
            session.status = FINISHED
            session.pending = None
            posterior = self._posterior
            n_session_answers = len(session.answered)
        perceived = perceived_footprint(posterior)
        entries = tuple(
            ResultsEntry(
                action_id=action.id,
                perceived_kg=perceived[action.id],
                true_kg=action.true_footprint,
                log10_error=math.log10(perceived[action.id] / action.true_footprint),
            )
            for action in self.catalog.actions
        )
        return ResultsSummary(
            entries=entries,
            n_total_observations=posterior.n_observations,
            n_session_answers=n_session_answers,
        )
