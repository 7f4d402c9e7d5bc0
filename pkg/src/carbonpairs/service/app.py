"""HTTP API over the quiz engine.

Endpoints:
    POST /api/sessions                -> 201 {session_id}
    GET  /api/sessions/{id}/question  -> 200 QuestionOut
    POST /api/sessions/{id}/answers   -> 204
    POST /api/sessions/{id}/finish    -> 200 ResultsOut
    GET  /api/perception              -> 200 PerceptionOut

Errors are JSON {code, message}. Answer ingestion is serialized by the
engine's writer lock; reads never wait on it.
"""

from __future__ import annotations

import threading
import time
from collections import defaultdict, deque

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..catalog import load_catalog, build_prior
from ..inference import perceived_footprint
from ..selector import PairsExhaustedError
from ..session import (
    PairNotPendingError,
    QuizEngine,
    RatioOutOfRangeError,
    SessionFinishedError,
    UnknownSessionError,
)
from ..store import TripletStore
from .config import ServiceConfig
from .schemas import (
    AnswerIn,
    ErrorOut,
    PerceptionOut,
    PerceptionRow,
    QuestionOut,
    ResultRow,
    ResultsOut,
    SessionCreateIn,
    SessionOut,
)


class RateLimiter:
    """Sliding one-second window per client key."""

    def __init__(self, per_second: float):
        self._per_second = per_second
        self._events: dict[str, deque[float]] = defaultdict(deque)
        self._lock = threading.Lock()

    def allow(self, key: str) -> bool:
        now = time.monotonic()
        with self._lock:
            window = self._events[key]
            while window and now - window[0] > 1.0:
                window.popleft()
            if len(window) >= self._per_second:
                return False
            window.append(now)
            return True


def _error(status_code: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status_code, content=ErrorOut(code=code, message=message).model_dump())


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    """Build the service: load catalog, replay the log, expose the API."""
    config = config or ServiceConfig()
    catalog = load_catalog(config.catalog_path)
    hyper = build_prior(catalog, config.sigma_p_sq, config.sigma_n_sq)
    store = TripletStore(config.log_path)
    engine = QuizEngine(catalog, hyper, store, y_bounds=config.y_bounds)
    limiter = RateLimiter(config.answers_per_second) if config.answers_per_second else None

    app = FastAPI(title="carbonpairs", version="0.1.0")
    app.state.engine = engine
    app.state.config = config
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(UnknownSessionError)
    async def _unknown_session(request: Request, exc: UnknownSessionError):
        return _error(404, "unknown_session", f"unknown session {exc.args[0]}")

    @app.exception_handler(PairsExhaustedError)
    async def _exhausted(request: Request, exc: PairsExhaustedError):
        return _error(409, "exhausted", str(exc))

    @app.exception_handler(SessionFinishedError)
    async def _finished(request: Request, exc: SessionFinishedError):
        return _error(409, "finished", f"session {exc.args[0]} is already finished")

    @app.exception_handler(PairNotPendingError)
    async def _not_pending(request: Request, exc: PairNotPendingError):
        return _error(409, "not_pending", str(exc))

    @app.exception_handler(RatioOutOfRangeError)
    async def _bad_ratio(request: Request, exc: RatioOutOfRangeError):
        return _error(422, "invalid_ratio", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _bad_request(request: Request, exc: RequestValidationError):
        return _error(422, "validation_error", str(exc.errors()))

    @app.post("/api/sessions", status_code=201, response_model=SessionOut)
    def create_session(body: SessionCreateIn | None = None) -> SessionOut:
        session = engine.start_session(seed=body.seed if body else None)
        return SessionOut(session_id=session.session_id)

    @app.get(
        "/api/sessions/{session_id}/question",
        response_model=QuestionOut,
        responses={404: {"model": ErrorOut}, 409: {"model": ErrorOut}},
    )
    def next_question(session_id: str) -> QuestionOut:
        card = engine.next_question(session_id)
        return QuestionOut(
            pair=card.pair,
            left={"id": card.left.id, "title": card.left.title, "description": card.left.description},
            right={"id": card.right.id, "title": card.right.title, "description": card.right.description},
        )

    @app.post(
        "/api/sessions/{session_id}/answers",
        status_code=204,
        responses={404: {"model": ErrorOut}, 409: {"model": ErrorOut}, 422: {"model": ErrorOut}},
    )
    def submit_answer(session_id: str, body: AnswerIn, request: Request) -> Response:
        if limiter is not None:
            client = request.client.host if request.client else "unknown"
            if not limiter.allow(client):
                return _error(429, "rate_limited", "too many answers; slow down")
        engine.submit_answer(session_id, tuple(body.pair), body.y)
        return Response(status_code=204)

    @app.post(
        "/api/sessions/{session_id}/finish",
        response_model=ResultsOut,
        responses={404: {"model": ErrorOut}},
    )
    def finish_session(session_id: str) -> ResultsOut:
        summary = engine.finish_session(session_id)
        return ResultsOut(
            actions=[
                ResultRow(
                    id=entry.action_id,
                    perceived_kg=entry.perceived_kg,
                    true_kg=entry.true_kg,
                    log10_error=entry.log10_error,
                )
                for entry in summary.entries
            ],
            n_total_observations=summary.n_total_observations,
            n_session_answers=summary.n_session_answers,
        )

    @app.get("/api/perception", response_model=PerceptionOut)
    def perception() -> PerceptionOut:
        posterior = engine.posterior
        perceived = perceived_footprint(posterior)
        return PerceptionOut(
            actions=[
                PerceptionRow(
                    id=action.id,
                    title=action.title,
                    perceived_kg=perceived[action.id],
                    true_kg=action.true_footprint,
                )
                for action in engine.catalog.actions
            ],
            n_observations=posterior.n_observations,
        )

    return app
