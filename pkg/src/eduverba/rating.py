"""Append-only ledger of human clue ratings and its summaries.

One JSON record per line, each carrying a checksum of its own canonical
form so torn writes are detectable. Later records supersede earlier ones
for the same (example_id, clue_index, annotator) key; nothing is ever
rewritten in place.
"""

from __future__ import annotations

import enum
import hashlib
import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from .errors import InvalidIndex, InvalidRating, UnknownExample

MACHINE_ANNOTATOR = "__system__"


class Rating(enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    SKIP = "SKIP"
    EMPTY = "EMPTY"


HUMAN_RATINGS = (Rating.A, Rating.B, Rating.C, Rating.D, Rating.E, Rating.SKIP)


@dataclass(frozen=True)
class RatingRecord:
    example_id: str
    clue_index: int
    rating: Rating
    annotator: str
    rated_at: str  # ISO-8601 UTC

    def key(self) -> tuple[str, int, str]:
        return (self.example_id, self.clue_index, self.annotator)

    def to_dict(self) -> dict:
        return {
            "example_id": self.example_id,
            "clue_index": self.clue_index,
            "rating": self.rating.value,
            "annotator": self.annotator,
            "rated_at": self.rated_at,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RatingRecord":
        return cls(
            example_id=data["example_id"],
            clue_index=int(data["clue_index"]),
            rating=Rating(data["rating"]),
            annotator=data["annotator"],
            rated_at=data.get("rated_at", ""),
        )


def _canonical(data: dict) -> str:
    return json.dumps(data, sort_keys=True, ensure_ascii=False,
                      separators=(",", ":"))


def _checksum(data: dict) -> str:
    return hashlib.sha256(_canonical(data).encode("utf-8")).hexdigest()[:12]


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class RatingLedger:
    """Durable store of rating records bound to a set of known example ids.

    Writes append one checksummed line and fsync before returning, so a
    rating acknowledged to a caller is already on disk. A single ledger
    instance serializes its writers; keep one instance per file.
    """

    def __init__(self, path: str | Path, known_ids: Iterable[str] | None = None):
        self.path = Path(path)
        self.known_ids = set(known_ids) if known_ids is not None else None
        self._lock = threading.Lock()
        self._records: list[RatingRecord] = []
        if self.path.exists():
            self._records = list(self._load())

    def _load(self) -> Iterable[RatingRecord]:
        lines = self.path.read_text(encoding="utf-8").splitlines()
        for lineno, line in enumerate(lines):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
                stored = data.pop("checksum", None)
                if stored != _checksum(data):
                    raise ValueError("checksum mismatch")
                yield RatingRecord.from_dict(data)
            except (ValueError, KeyError) as exc:
                if lineno == len(lines) - 1:
                    break  # torn final line from an interrupted write
                raise ValueError(
                    f"{self.path}:{lineno + 1}: corrupt ledger line ({exc})")

    def validate(self, example_id: str, clue_index: int) -> None:
        if self.known_ids is not None and example_id not in self.known_ids:
            raise UnknownExample(example_id)
        if not 0 <= clue_index <= 2:
            raise InvalidIndex(str(clue_index))

    def record(
        self,
        example_id: str,
        clue_index: int,
        rating: Rating | str,
        annotator: str,
        rated_at: str | None = None,
    ) -> RatingRecord:
        """Append one human judgment; EMPTY is reserved for the machine."""
        rating = Rating(rating)
        if rating is Rating.EMPTY and annotator != MACHINE_ANNOTATOR:
            raise InvalidRating("EMPTY is machine-assigned, not a human rating")
        self.validate(example_id, clue_index)
        record = RatingRecord(
            example_id=example_id,
            clue_index=clue_index,
            rating=rating,
            annotator=annotator,
            rated_at=rated_at or _now_iso(),
        )
        data = record.to_dict()
        data["checksum"] = _checksum(record.to_dict())
        line = _canonical(data) + "\n"
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(line)
                handle.flush()
                os.fsync(handle.fileno())
            self._records.append(record)
        return record

    def record_empty(self, example_id: str, clue_index: int) -> RatingRecord:
        """Machine-assigned marker for a clue the generator failed to produce."""
        self.validate(example_id, clue_index)
        record = RatingRecord(
            example_id=example_id, clue_index=clue_index,
            rating=Rating.EMPTY, annotator=MACHINE_ANNOTATOR,
            rated_at=_now_iso(),
        )
        data = record.to_dict()
        data["checksum"] = _checksum(record.to_dict())
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(_canonical(data) + "\n")
                handle.flush()
                os.fsync(handle.fileno())
            self._records.append(record)
        return record

    def records(self) -> list[RatingRecord]:
        with self._lock:
            return list(self._records)

    def latest(self, annotator: str | None = None) -> list[RatingRecord]:
        """Non-superseded records, optionally for one annotator."""
        current: dict[tuple[str, int, str], RatingRecord] = {}
        for record in self.records():
            current[record.key()] = record
        records = list(current.values())
        if annotator is not None:
            records = [r for r in records if r.annotator == annotator]
        return records


def rating_summary(
    ledger: RatingLedger,
    annotator: str | None = None,
    include_skip: bool = True,
) -> dict:
    """Distribution over the latest records, with the acceptable (A+B) share.

    Percentages are over non-superseded records and sum to 100 whenever any
    records exist. The distribution excluding SKIP is reported alongside.
    """
    records = ledger.latest(annotator)
    counts = {rating.value: 0 for rating in Rating}
    for record in records:
        counts[record.rating.value] += 1
    total = sum(counts.values())

    def percentages(cnt: dict[str, int]) -> dict[str, float]:
        subtotal = sum(cnt.values())
        if subtotal == 0:
            return {name: 0.0 for name in cnt}
        return {name: 100.0 * value / subtotal for name, value in cnt.items()}

    no_skip = {name: value for name, value in counts.items() if name != "SKIP"}
    pct = percentages(counts)
    pct_no_skip = percentages(no_skip)
    return {
        "total": total,
        "counts": counts,
        "percent": pct,
        "percent_excluding_skip": pct_no_skip,
        "acceptable_share": pct["A"] + pct["B"],
        "acceptable_share_excluding_skip":
            pct_no_skip.get("A", 0.0) + pct_no_skip.get("B", 0.0),
    }


def export_table(ledger: RatingLedger, path: str | Path) -> int:
    """Flat CSV of the latest records, for external analysis."""
    import csv

    records = sorted(ledger.latest(), key=lambda r: r.key())
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["example_id", "clue_index", "rating", "annotator",
                         "rated_at"])
        for record in records:
            writer.writerow([record.example_id, record.clue_index,
                             record.rating.value, record.annotator,
                             record.rated_at])
    return len(records)
