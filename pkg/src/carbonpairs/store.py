"""Durable, append-only triplet log.

One JSON object per line: {"seq", "session_id", "ts", "i", "j", "y"}.
The log is the canonical record of everything the population has answered;
the in-memory posterior is always reconstructible by replaying it. Records
are flushed and fsynced before an append is acknowledged, so an
acknowledged answer survives a crash. A torn trailing line (the crash
artifact of an unacknowledged write) is skipped on load with a warning;
damage anywhere else is treated as corruption.
"""

from __future__ import annotations

import json
import logging
import math
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .catalog import PriorSpec
from .inference import Posterior, Triplet, posterior_from_dataset

logger = logging.getLogger(__name__)

_FIELDS = ("seq", "session_id", "ts", "i", "j", "y")


class StoreCorruptionError(RuntimeError):
    """The triplet log is damaged somewhere other than its trailing line."""


@dataclass(frozen=True)
class TripletRecord:
    seq: int
    session_id: str
    ts: str  # UTC instant, ISO 8601
    i: int
    j: int
    y: float

    def as_triplet(self) -> Triplet:
        return Triplet(i=self.i, j=self.j, y=self.y)


def _parse_line(line: str, lineno: int) -> TripletRecord:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"line {lineno}: invalid JSON: {exc}") from exc
    if not isinstance(raw, dict) or any(key not in raw for key in _FIELDS):
        raise ValueError(f"line {lineno}: expected fields {_FIELDS}")
    record = TripletRecord(
        seq=raw["seq"],
        session_id=raw["session_id"],
        ts=raw["ts"],
        i=raw["i"],
        j=raw["j"],
        y=float(raw["y"]),
    )
    if record.i >= record.j:
        raise ValueError(f"line {lineno}: pair ({record.i}, {record.j}) is not in canonical i < j order")
    if not math.isfinite(record.y) or record.y <= 0:
        raise ValueError(f"line {lineno}: impact ratio must be positive and finite, got {record.y!r}")
    return record


def read_triplet_log(path: str | Path) -> list[TripletRecord]:
    """Read a whole triplet log in seq order.

    Raises StoreCorruptionError on a malformed non-trailing line or a seq
    gap; a malformed trailing line is dropped with a warning.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    records: list[TripletRecord] = []
    for lineno, line in enumerate(lines, start=1):
        try:
            record = _parse_line(line, lineno)
        except ValueError as exc:
            if lineno == len(lines):
                logger.warning("dropping torn trailing line of %s: %s", path, exc)
                break
            raise StoreCorruptionError(f"{path}: {exc}") from exc
        if record.seq != len(records) + 1:
            raise StoreCorruptionError(
                f"{path}: line {lineno}: seq {record.seq} breaks the gapless 1..N sequence"
            )
        records.append(record)
    return records


class TripletStore:
    """Single-writer append handle over one triplet log file."""

    def __init__(self, path: str | Path):
        self._path = Path(path)
        self._records = read_triplet_log(self._path) if self._path.exists() else []
        self._repair_tail()
        self._fh = open(self._path, "a", encoding="utf-8", newline="\n")

    def _repair_tail(self) -> None:
        """Make the file end exactly at the last acknowledged record.

        A crash mid-write can leave a torn trailing line (never
        acknowledged: discard it) or a complete final record missing its
        newline (acknowledged: restore the terminator). Without this,
        the next append would glue onto the damaged line.
        """
        if not self._path.exists():
            return
        data = self._path.read_bytes()
        offset = 0
        for _ in range(len(self._records)):
            newline = data.find(b"\n", offset)
            if newline == -1:
                with open(self._path, "ab") as fh:
                    fh.write(b"\n")
                return
            offset = newline + 1
        if offset != len(data):
            logger.warning(
                "truncating %d torn trailing bytes of %s", len(data) - offset, self._path
            )
            with open(self._path, "r+b") as fh:
                fh.truncate(offset)

    @property
    def path(self) -> Path:
        return self._path

    def append_triplet(self, session_id: str, i: int, j: int, y: float) -> TripletRecord:
        """Durably append one canonical (i < j) triplet and return its record.

        The line is flushed and fsynced before returning; a failure here
        means the answer was never acknowledged and must not reach the
        posterior.
        """
        if i >= j:
            raise ValueError(f"store requires canonical orientation i < j, got ({i}, {j})")
        Triplet(i=i, j=j, y=y)  # reject invalid ids/ratios before touching the file
        record = TripletRecord(
            seq=len(self._records) + 1,
            session_id=session_id,
            ts=datetime.now(timezone.utc).isoformat(),
            i=i,
            j=j,
            y=float(y),
        )
        line = json.dumps(
            {"seq": record.seq, "session_id": record.session_id, "ts": record.ts,
             "i": record.i, "j": record.j, "y": record.y},
            separators=(",", ":"),
        )
        self._fh.write(line + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())
        self._records.append(record)
        return record

    def load_all(self) -> list[TripletRecord]:
        """All durably stored records, re-read from disk, in seq order."""
        if not self._path.exists():
            return []
        return read_triplet_log(self._path)

    def rebuild_posterior(self, hyper: PriorSpec) -> Posterior:
        """Replay the whole log through the batch posterior."""
        return posterior_from_dataset((r.as_triplet() for r in self.load_all()), hyper)

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "TripletStore":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
