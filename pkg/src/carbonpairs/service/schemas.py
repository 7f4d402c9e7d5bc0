"""Request/response models of the quiz API.

These are the wire contract consumed by the browser quiz and by scripted
clients; field names are stable.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class SessionCreateIn(BaseModel):
    seed: int | None = None


class SessionOut(BaseModel):
    session_id: str


class ActionCard(BaseModel):
    id: int
    title: str
    description: str


class QuestionOut(BaseModel):
    pair: tuple[int, int]
    left: ActionCard
    right: ActionCard


class AnswerIn(BaseModel):
    # y is the impact ratio of pair[0] over pair[1] as stated by the user.
    pair: tuple[int, int]
    y: float


class ResultRow(BaseModel):
    id: int
    perceived_kg: float
    true_kg: float
    log10_error: float


class ResultsOut(BaseModel):
    actions: list[ResultRow]
    n_total_observations: int
    n_session_answers: int


class PerceptionRow(BaseModel):
    id: int
    title: str
    perceived_kg: float
    true_kg: float


class PerceptionOut(BaseModel):
    actions: list[PerceptionRow]
    n_observations: int


class ErrorOut(BaseModel):
    code: str
    message: str = Field(default="")
