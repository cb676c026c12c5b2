"""Local HTTP service backing the review UI.

The API is deliberately small: paged example listing, rating submission,
the rating summary, and puzzle assembly/preview. Rating writes go through
the single RatingLedger instance, whose append+fsync completes before the
response is sent, so anything a client saw acknowledged is on disk.

Static review-UI assets are served from ``ui_dir`` when provided.
"""

from __future__ import annotations

import errno
import json
import mimetypes
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .dataset import read_corpus
from .errors import (
    CorpusUnreadable,
    GridError,
    InvalidIndex,
    InvalidRating,
    PortInUse,
    UnknownExample,
)
from .grid import AssembleConfig, assemble, render, save_layout
from .rating import RatingLedger, rating_summary

_EXAMPLES_RE = re.compile(r"^/api/examples/([0-9A-Za-z_-]+)$")
_PUZZLES_RE = re.compile(r"^/api/puzzles/([0-9A-Za-z_-]+)$")


class ReviewService:
    """State shared by all request handler instances."""

    def __init__(
        self,
        corpus_path: str | Path,
        ledger_path: str | Path,
        ui_dir: str | Path | None = None,
        puzzles_dir: str | Path | None = None,
        default_grid: AssembleConfig | None = None,
    ):
        try:
            self.examples = read_corpus(corpus_path)
        except (OSError, ValueError, KeyError) as exc:
            raise CorpusUnreadable(f"{corpus_path}: {exc}") from exc
        self.by_id = {example.id: example for example in self.examples}
        self.ledger = RatingLedger(ledger_path, known_ids=self.by_id.keys())
        self.ui_dir = Path(ui_dir) if ui_dir else None
        self.puzzles_dir = Path(puzzles_dir) if puzzles_dir else (
            Path(ledger_path).parent / "puzzles")
        self.default_grid = default_grid or AssembleConfig()
        self._puzzle_lock = threading.Lock()

    # -- examples --

    def list_examples(self, offset: int, limit: int) -> dict:
        window = self.examples[offset:offset + limit]
        return {
            "total": len(self.examples),
            "offset": offset,
            "limit": limit,
            "examples": [example.to_dict() for example in window],
        }

    def get_example(self, example_id: str) -> dict | None:
        example = self.by_id.get(example_id)
        return example.to_dict() if example else None

    # -- puzzles --

    def assemble_puzzle(self, entry_ids: list[str], seed: int | None = None,
                        rows: int | None = None, cols: int | None = None) -> dict:
        entries = []
        for entry_id in entry_ids:
            example = self.by_id.get(entry_id)
            if example is None:
                raise UnknownExample(entry_id)
            entries.append((example.keyword, example.clues[0]))
        config = AssembleConfig(
            max_rows=rows or self.default_grid.max_rows,
            max_cols=cols or self.default_grid.max_cols,
            seed=self.default_grid.seed if seed is None else seed,
        )
        layout = assemble(entries, config)
        puzzle_id = _puzzle_id(entry_ids, config.seed)
        with self._puzzle_lock:
            self.puzzles_dir.mkdir(parents=True, exist_ok=True)
            save_layout(layout, self.puzzles_dir / f"{puzzle_id}.json")
        return {"id": puzzle_id, "layout": layout.to_dict(),
                "preview": render(layout, "text", solution=False)}

    def get_puzzle(self, puzzle_id: str) -> dict | None:
        path = self.puzzles_dir / f"{puzzle_id}.json"
        if not path.is_file():
            return None
        return {"id": puzzle_id,
                "layout": json.loads(path.read_text(encoding="utf-8"))}


def _puzzle_id(entry_ids: list[str], seed: int) -> str:
    import hashlib

    key = "|".join(entry_ids) + f"|{seed}"
    return hashlib.sha256(key.encode("utf-8")).hexdigest()[:12]


class _Handler(BaseHTTPRequestHandler):
    server_version = "eduverba/0.1"

    @property
    def service(self) -> ReviewService:
        return self.server.service  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):
        pass

    def _json(self, status: int, payload: dict) -> None:
        data = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length", 0))
        if not length:
            return {}
        return json.loads(self.rfile.read(length).decode("utf-8"))

    def do_GET(self):  # noqa: N802
        url = urlparse(self.path)
        query = parse_qs(url.query)
        if url.path == "/api/examples":
            offset = int(query.get("offset", ["0"])[0])
            limit = int(query.get("limit", ["50"])[0])
            self._json(200, self.service.list_examples(offset, limit))
            return
        match = _EXAMPLES_RE.match(url.path)
        if match:
            example = self.service.get_example(match.group(1))
            if example is None:
                self._json(404, {"error": "unknown example"})
            else:
                self._json(200, example)
            return
        if url.path == "/api/summary":
            annotator = query.get("annotator", [None])[0]
            self._json(200, rating_summary(self.service.ledger, annotator))
            return
        if url.path == "/api/ratings":
            annotator = query.get("annotator", [None])[0]
            example_id = query.get("example_id", [None])[0]
            records = self.service.ledger.latest(annotator)
            if example_id is not None:
                records = [r for r in records if r.example_id == example_id]
            self._json(200, {"records": [r.to_dict() for r in records]})
            return
        match = _PUZZLES_RE.match(url.path)
        if match:
            puzzle = self.service.get_puzzle(match.group(1))
            if puzzle is None:
                self._json(404, {"error": "unknown puzzle"})
            else:
                self._json(200, puzzle)
            return
        self._static(url.path)

    def do_POST(self):  # noqa: N802
        url = urlparse(self.path)
        try:
            body = self._read_body()
        except ValueError:
            self._json(400, {"error": "request body is not JSON"})
            return
        if url.path == "/api/ratings":
            try:
                record = self.service.ledger.record(
                    example_id=body.get("example_id", ""),
                    clue_index=int(body.get("clue_index", -1)),
                    rating=body.get("rating", ""),
                    annotator=body.get("annotator", "anonymous"),
                )
            except UnknownExample:
                self._json(404, {"error": "unknown example"})
            except (InvalidIndex, InvalidRating, ValueError) as exc:
                self._json(400, {"error": str(exc)})
            else:
                self._json(201, {"record": record.to_dict()})
            return
        if url.path == "/api/puzzles":
            entry_ids = body.get("entries", [])
            if not isinstance(entry_ids, list) or not entry_ids:
                self._json(400, {"error": "entries must be a non-empty list"})
                return
            try:
                puzzle = self.service.assemble_puzzle(
                    [str(e) for e in entry_ids],
                    seed=body.get("seed"),
                    rows=body.get("rows"), cols=body.get("cols"))
            except UnknownExample as exc:
                self._json(404, {"error": f"unknown example {exc}"})
            except GridError as exc:
                self._json(400, {"error": f"cannot assemble: {exc}"})
            else:
                self._json(201, puzzle)
            return
        self._json(404, {"error": "no such endpoint"})

    def _static(self, path: str) -> None:
        ui_dir = self.service.ui_dir
        if ui_dir is None:
            self._json(404, {"error": "no UI assets configured"})
            return
        relative = path.lstrip("/") or "index.html"
        target = (ui_dir / relative).resolve()
        if not str(target).startswith(str(ui_dir.resolve())) or not target.is_file():
            self._json(404, {"error": "not found"})
            return
        content_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        data = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


class ReviewServer:
    """Context-managed HTTP server around a ReviewService."""

    def __init__(self, service: ReviewService, port: int = 8606,
                 host: str = "127.0.0.1"):
        self.service = service
        try:
            self._httpd = ThreadingHTTPServer((host, port), _Handler)
        except OSError as exc:
            if exc.errno == errno.EADDRINUSE:
                raise PortInUse(str(port)) from exc
            raise
        self._httpd.service = service  # type: ignore[attr-defined]
        self._thread = threading.Thread(
            target=self._httpd.serve_forever, daemon=True)

    @property
    def port(self) -> int:
        return self._httpd.server_address[1]

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "ReviewServer":
        self._thread.start()
        return self

    def serve_forever(self) -> None:
        self._httpd.serve_forever()

    def shutdown(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread.is_alive():
            self._thread.join(timeout=5)

    def __enter__(self) -> "ReviewServer":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.shutdown()
