"""Service configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..catalog import DEFAULT_SIGMA_N_SQ, DEFAULT_SIGMA_P_SQ, default_catalog_path
from ..session import DEFAULT_Y_BOUNDS


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    catalog_path: Path = field(default_factory=default_catalog_path)
    log_path: Path = Path("triplets.log")
    sigma_n_sq: float = DEFAULT_SIGMA_N_SQ
    sigma_p_sq: float = DEFAULT_SIGMA_P_SQ
    y_bounds: tuple[float, float] = DEFAULT_Y_BOUNDS
    cors_origins: tuple[str, ...] = ("*",)
    # Per-IP answer ingestion cap; None disables limiting.
    answers_per_second: float | None = 5.0

    def __post_init__(self):
        if self.sigma_n_sq <= 0 or self.sigma_p_sq <= 0:
            raise ValueError("variances must be positive")
        lo, hi = self.y_bounds
        if not (0 < lo < 1 < hi):
            raise ValueError(f"ratio bounds must satisfy 0 < lo < 1 < hi, got {self.y_bounds}")
        if self.answers_per_second is not None and self.answers_per_second <= 0:
            raise ValueError("answers_per_second must be positive or None")
