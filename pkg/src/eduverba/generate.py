"""Drive a chat-completion endpoint to produce three clues per prompt.

Responses are parsed leniently (the clue payload may be wrapped in prose
or code fences), validated for count and answer leakage, and retried with
identical parameters. The raw wire response is always preserved so failed
generations stay auditable.
"""

from __future__ import annotations

import enum
import json
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import AuthFailure, EndpointUnreachable, ParseError

API_KEY_ENV = "EDUVERBA_API_KEY"


@dataclass(frozen=True)
class GenParams:
    endpoint: str = ""
    model_name: str = "gpt-3.5-turbo"
    temperature: float = 0.1
    top_p: float = 0.75
    top_k: int = 50
    max_retries: int = 3
    timeout: float = 60.0

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if not (0 < self.top_p <= 1):
            raise ValueError("top_p must be in (0, 1]")
        if self.top_k < 1:
            raise ValueError("top_k must be positive")


class ClueStatus(enum.Enum):
    VALID = "Valid"
    EMPTY = "Empty"
    MALFORMED = "Malformed"
    LEAKED = "Leaked"


@dataclass(frozen=True)
class ClueSet:
    clues: tuple[str, ...]
    status: ClueStatus
    raw_response: str
    attempts: int

    def __post_init__(self):
        if self.status is ClueStatus.VALID:
            if len(self.clues) != 3 or any(not c.strip() for c in self.clues):
                raise ValueError("Valid clue sets need three non-empty clues")
        if self.status is ClueStatus.EMPTY and self.clues:
            raise ValueError("Empty clue sets carry no clues")

    def to_dict(self) -> dict:
        return {
            "clues": list(self.clues),
            "status": self.status.value,
            "raw_response": self.raw_response,
            "attempts": self.attempts,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClueSet":
        return cls(
            clues=tuple(data.get("clues", ())),
            status=ClueStatus(data.get("status", "Malformed")),
            raw_response=data.get("raw_response", ""),
            attempts=int(data.get("attempts", 1)),
        )


_FENCE_RE = re.compile(r"```[a-zA-Z]*\n?|```")


def parse_clues(raw: str) -> list[str]:
    """Extract the three-clue array from a model response.

    Scans for the first JSON object holding a "clues" list of strings,
    tolerating surrounding prose and code fences. Raises ParseError with
    kind WrongCount (a clue list was found but not of length 3) or
    NoStructure (nothing usable found).
    """
    text = _FENCE_RE.sub("", raw)
    decoder = json.JSONDecoder()
    wrong_count: list[str] | None = None
    for start, ch in enumerate(text):
        if ch != "{":
            continue
        try:
            obj, _ = decoder.raw_decode(text, start)
        except ValueError:
            continue
        if not isinstance(obj, dict):
            continue
        clues = obj.get("clues")
        if not isinstance(clues, list) or not all(isinstance(c, str) for c in clues):
            continue
        if len(clues) == 3:
            return clues
        if wrong_count is None:
            wrong_count = clues
    if wrong_count is not None:
        if len(wrong_count) == 0:
            raise ParseError("NoStructure", "clue list is empty")
        raise ParseError(
            "WrongCount", f"expected 3 clues, got {len(wrong_count)}")
    raise ParseError("NoStructure", "no clue object found in response")


_WORD_RE = re.compile(r"[^\W\d_]+", re.UNICODE)


def leak_check(clue: str, keyword: str) -> bool:
    """True when the clue gives the answer away.

    A keyword word of length >= 4 leaks when any clue word starts with it
    ("tapir" matches "tapirs"); shorter keyword words must match a clue
    word exactly, so 3-letter answers like "Tea" do not trip on "teacher".
    A multi-word keyword appearing wholesale as a substring also leaks.
    """
    clue_lower = clue.lower()
    keyword_lower = keyword.lower()
    if " " in keyword_lower and keyword_lower in clue_lower:
        return True
    clue_words = _WORD_RE.findall(clue_lower)
    for word in keyword_lower.split():
        if len(word) >= 4:
            if any(cw.startswith(word) for cw in clue_words):
                return True
        elif word in clue_words:
            return True
    return False


def validate_clues(clues: Sequence[str], keyword: str) -> ClueStatus:
    if any(not clue.strip() for clue in clues):
        return ClueStatus.EMPTY
    if keyword and any(leak_check(clue, keyword) for clue in clues):
        return ClueStatus.LEAKED
    return ClueStatus.VALID


@dataclass
class LlmClient:
    """HTTP chat-completions client with per-request retry.

    The transport is injectable: anything with a ``post(url, json=...,
    headers=..., timeout=...)`` method returning an object with
    ``status_code``, ``text`` and ``json()``.
    """

    params: GenParams
    session: object = None
    api_key: str | None = None
    # Retry (and finally reject) clue sets that leak the answer. Turned off
    # when reproducing corpus statistics, where leaked clues survive.
    leak_filter: bool = True

    def __post_init__(self):
        if self.session is None:
            import requests

            self.session = requests.Session()
        if self.api_key is None:
            self.api_key = os.environ.get(API_KEY_ENV, "")

    def _request(self, prompt: str) -> str:
        payload = {
            "model": self.params.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.params.temperature,
            "top_p": self.params.top_p,
            "top_k": self.params.top_k,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            response = self.session.post(
                self.params.endpoint, json=payload, headers=headers,
                timeout=self.params.timeout,
            )
        except Exception as exc:
            raise EndpointUnreachable(str(exc)) from exc
        if response.status_code in (401, 403):
            raise AuthFailure(f"endpoint rejected credentials "
                              f"(HTTP {response.status_code})")
        if response.status_code >= 400:
            raise EndpointUnreachable(
                f"HTTP {response.status_code}: {response.text[:200]}")
        body = response.json()
        try:
            return body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise EndpointUnreachable(f"malformed completion payload: {exc}")

    def generate_clues(self, prompt: str, keyword: str = "") -> ClueSet:
        """Issue the prompt, parse and validate, retrying on failure.

        Returns the first Valid result, otherwise the last failure with its
        raw response preserved. Transport errors retry too and raise
        EndpointUnreachable once attempts are exhausted; AuthFailure is
        never retried.
        """
        last: ClueSet | None = None
        transport_error: EndpointUnreachable | None = None
        for attempt in range(1, self.params.max_retries + 1):
            try:
                raw = self._request(prompt)
            except AuthFailure:
                raise
            except EndpointUnreachable as exc:
                transport_error = exc
                continue
            transport_error = None
            if not raw.strip():
                last = ClueSet((), ClueStatus.EMPTY, raw, attempt)
                continue
            try:
                clues = parse_clues(raw)
            except ParseError:
                last = ClueSet((), ClueStatus.MALFORMED, raw, attempt)
                continue
            status = validate_clues(clues, keyword)
            if status is ClueStatus.LEAKED and not self.leak_filter:
                status = ClueStatus.VALID
            if status is ClueStatus.VALID:
                return ClueSet(tuple(clues), status, raw, attempt)
            kept = () if status is ClueStatus.EMPTY else tuple(clues)
            last = ClueSet(kept, status, raw, attempt)
        if last is None:
            raise transport_error or EndpointUnreachable("no attempts made")
        return last

    def generate_many(
        self,
        jobs: Iterable[tuple[str, str]],
        concurrency: int = 4,
    ) -> list[ClueSet]:
        """Run (prompt, keyword) jobs concurrently, results in input order."""
        with ThreadPoolExecutor(max_workers=concurrency) as pool:
            return list(pool.map(
                lambda job: self.generate_clues(job[0], job[1]), jobs))
