"""Local mock of a chat-completions endpoint, for tests and offline runs.

Two responders are provided: ``ScriptedResponder`` replays a fixed list of
raw response strings, and ``FaultyClueResponder`` fabricates clue payloads
with a configurable rate of malformed, leaking, and empty responses. Fault
decisions are derived from a hash of (seed, prompt, attempt), so they are
reproducible regardless of request arrival order.
"""

from __future__ import annotations

import hashlib
import json
import re
import threading
from collections import defaultdict
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .generate import leak_check

DEFAULT_KEYWORD_PATTERN = r'Answer:\s*"([^"]+)"'


class ScriptedResponder:
    """Replays responses in order; repeats the last one when exhausted."""

    def __init__(self, responses: list[str]):
        if not responses:
            raise ValueError("need at least one scripted response")
        self.responses = list(responses)
        self._lock = threading.Lock()
        self._index = 0

    def __call__(self, prompt: str) -> str:
        with self._lock:
            index = min(self._index, len(self.responses) - 1)
            self._index += 1
        return self.responses[index]


def _unit_interval(*parts: object) -> float:
    digest = hashlib.sha256(":".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


def _scrub(text: str, keyword: str) -> str:
    """Replace any word that would trip the leak checker."""
    if not keyword or not leak_check(text, keyword):
        return text
    words = [w for w in text.split() if not leak_check(w, keyword)]
    return " ".join(words) or "entry from a reference work"


class FaultyClueResponder:
    """Fabricates clue payloads with configurable fault injection.

    The keyword is recovered from the prompt via ``keyword_pattern`` so that
    valid payloads never leak it and leaking payloads always do.
    """

    def __init__(
        self,
        malformed_rate: float = 0.0,
        leak_rate: float = 0.0,
        empty_rate: float = 0.0,
        seed: int = 0,
        keyword_pattern: str = DEFAULT_KEYWORD_PATTERN,
    ):
        if malformed_rate + leak_rate + empty_rate > 1.0:
            raise ValueError("fault rates must sum to at most 1")
        self.malformed_rate = malformed_rate
        self.leak_rate = leak_rate
        self.empty_rate = empty_rate
        self.seed = seed
        self.keyword_re = re.compile(keyword_pattern)
        self._lock = threading.Lock()
        self._attempts: dict[str, int] = defaultdict(int)

    def _valid_payload(self, keyword: str, salt: str) -> str:
        stems = (
            "Subject explained in the opening lines of its article",
            "Term whose definition appears in an encyclopedia entry",
            "Concept a student could identify from the passage given",
        )
        clues = [_scrub(f"{stem} ({salt}{i})", keyword)
                 for i, stem in enumerate(stems)]
        return json.dumps({"clues": clues})

    def __call__(self, prompt: str) -> str:
        match = self.keyword_re.search(prompt)
        keyword = match.group(1) if match else ""
        prompt_key = hashlib.sha256(prompt.encode()).hexdigest()[:16]
        with self._lock:
            self._attempts[prompt_key] += 1
            attempt = self._attempts[prompt_key]
        draw = _unit_interval(self.seed, prompt_key, attempt, "fault")
        flavor = _unit_interval(self.seed, prompt_key, attempt, "flavor")

        if draw < self.malformed_rate:
            if flavor < 0.5:
                return "I'm sorry, here are some ideas written as plain prose."
            return json.dumps({"clues": ["Only one clue was produced"]})
        if draw < self.malformed_rate + self.leak_rate:
            leaked = f"One of several topics, namely {keyword or 'the answer'}, covered here"
            return json.dumps({"clues": [
                leaked,
                "A second clue without issues",
                "A third clue without issues",
            ]})
        if draw < self.malformed_rate + self.leak_rate + self.empty_rate:
            return ""
        return self._valid_payload(keyword, prompt_key[:4])


class _Handler(BaseHTTPRequestHandler):
    server_version = "MockLLM/0.1"

    def do_POST(self):  # noqa: N802 (http.server naming)
        server: MockLlmServer = self.server.owner  # type: ignore[attr-defined]
        length = int(self.headers.get("Content-Length", 0))
        body = self.rfile.read(length).decode("utf-8") if length else "{}"
        with server.lock:
            server.request_count += 1
        if server.require_auth:
            auth = self.headers.get("Authorization", "")
            if not auth.startswith("Bearer ") or len(auth) <= len("Bearer "):
                self._send(401, {"error": "missing or bad credentials"})
                return
        try:
            payload = json.loads(body)
            messages = payload.get("messages", [])
            prompt = messages[-1]["content"] if messages else ""
        except (ValueError, KeyError, IndexError, TypeError):
            self._send(400, {"error": "bad request body"})
            return
        content = server.responder(prompt)
        self._send(200, {
            "model": payload.get("model", "mock"),
            "choices": [{"message": {"role": "assistant", "content": content}}],
        })

    def _send(self, status: int, obj: dict) -> None:
        data = json.dumps(obj).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, fmt, *args):  # keep test output quiet
        pass


class MockLlmServer:
    """Context-managed HTTP listener wrapping a responder."""

    def __init__(self, responder, port: int = 0, require_auth: bool = False):
        self.responder = responder
        self.require_auth = require_auth
        self.request_count = 0
        self.lock = threading.Lock()
        self._httpd = ThreadingHTTPServer(("127.0.0.1", port), _Handler)
        self._httpd.owner = self  # type: ignore[attr-defined]
        self._thread = threading.Thread(
            target=self._httpd.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}/v1/chat/completions"

    def __enter__(self) -> "MockLlmServer":
        self._thread.start()
        return self

    def __exit__(self, *exc_info) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        self._thread.join(timeout=5)
