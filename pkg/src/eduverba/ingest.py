"""Page sources: live MediaWiki API and offline fixture directories.

Both sources produce immutable PageRecord values, so the rest of the
pipeline never touches the network or the filesystem again. The fixture
source (a directory of ``<category>/<title>.wiki`` + ``<title>.meta``
files) makes every downstream stage testable hermetically.
"""

from __future__ import annotations

import enum
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Callable, Iterable, Protocol, Sequence

from .errors import EmptyLead, PageNotFound, SourceUnavailable, UnknownCategory
from .textwiki import extract_bold_keywords, extract_lead_markup, strip_markup


class Importance(enum.Enum):
    TOP = "Top"
    HIGH = "High"
    MID = "Mid"
    LOW = "Low"
    UNKNOWN = "Unknown"

    @classmethod
    def parse(cls, value: str | None) -> "Importance":
        if not value:
            return cls.UNKNOWN
        for member in cls:
            if member.value.lower() == value.strip().lower():
                return member
        return cls.UNKNOWN


# Order used when several WikiProjects disagree: take the highest.
_IMPORTANCE_RANK = {
    Importance.TOP: 4,
    Importance.HIGH: 3,
    Importance.MID: 2,
    Importance.LOW: 1,
    Importance.UNKNOWN: 0,
}


def max_importance(values: Iterable[Importance]) -> Importance:
    best = Importance.UNKNOWN
    for value in values:
        if _IMPORTANCE_RANK[value] > _IMPORTANCE_RANK[best]:
            best = value
    return best


@dataclass(frozen=True)
class PageRecord:
    title: str
    lead_text: str
    keywords: tuple[str, ...]
    category: str
    views: int
    importance: Importance
    url: str
    fetched_at: str  # ISO-8601 UTC

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "lead_text": self.lead_text,
            "keywords": list(self.keywords),
            "category": self.category,
            "views": self.views,
            "importance": self.importance.value,
            "url": self.url,
            "fetched_at": self.fetched_at,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PageRecord":
        return cls(
            title=data["title"],
            lead_text=data["lead_text"],
            keywords=tuple(data.get("keywords", ())),
            category=data.get("category", ""),
            views=int(data.get("views", 0)),
            importance=Importance.parse(data.get("importance")),
            url=data.get("url", ""),
            fetched_at=data.get("fetched_at", ""),
        )


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class PageSource(Protocol):
    def list_category_pages(self, category: str, limit: int) -> list[str]: ...
    def fetch_page(self, title: str, category: str | None = None) -> PageRecord: ...
    def fetch_metadata(self, title: str) -> tuple[int, Importance, list[str], str]: ...


def build_page(
    title: str,
    raw_markup: str,
    category: str,
    views: int,
    importance: Importance,
    url: str,
) -> PageRecord:
    """Turn raw page markup plus metadata into a PageRecord.

    Raises EmptyLead when no prose survives extraction; the caller is
    expected to skip such pages.
    """
    raw_lead = extract_lead_markup(raw_markup)
    lead_text = strip_markup(raw_lead)
    if not lead_text:
        raise EmptyLead(title)
    return PageRecord(
        title=title,
        lead_text=lead_text,
        keywords=tuple(extract_bold_keywords(raw_lead)),
        category=category,
        views=views,
        importance=importance,
        url=url,
        fetched_at=_now_iso(),
    )


# --- fixture source ---------------------------------------------------------

class FixtureSource:
    """Reads pages from ``root/<category>/<title>.wiki`` (+ ``.meta``).

    The ``.meta`` sidecar holds ``key=value`` lines: ``views`` (an integer,
    or a comma-separated list of daily counts that get summed),
    ``importance``, and ``url``.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        if not self.root.is_dir():
            raise SourceUnavailable(f"fixture root not found: {self.root}")

    def categories(self) -> list[str]:
        return sorted(p.name for p in self.root.iterdir() if p.is_dir())

    def list_category_pages(self, category: str, limit: int) -> list[str]:
        cat_dir = self.root / category
        if not cat_dir.is_dir():
            raise UnknownCategory(category)
        titles = sorted(p.stem for p in cat_dir.glob("*.wiki"))
        return titles[:limit]

    def _locate(self, title: str) -> tuple[Path, str]:
        for category in self.categories():
            candidate = self.root / category / f"{title}.wiki"
            if candidate.is_file():
                return candidate, category
        raise PageNotFound(title)

    def _read_meta(self, wiki_path: Path) -> dict[str, str]:
        meta_path = wiki_path.with_suffix(".meta")
        meta: dict[str, str] = {}
        if meta_path.is_file():
            for line in meta_path.read_text(encoding="utf-8").splitlines():
                line = line.strip()
                if line and "=" in line:
                    key, value = line.split("=", 1)
                    meta[key.strip()] = value.strip()
        return meta

    def fetch_metadata(self, title: str) -> tuple[int, Importance, list[str], str]:
        wiki_path, category = self._locate(title)
        meta = self._read_meta(wiki_path)
        raw_views = meta.get("views", "0")
        views = sum(int(v) for v in raw_views.split(",") if v.strip())
        importance = Importance.parse(meta.get("importance"))
        return views, importance, [category], meta.get("url", "")

    def fetch_page(self, title: str, category: str | None = None) -> PageRecord:
        wiki_path, found_category = self._locate(title)
        views, importance, _, url = self.fetch_metadata(title)
        raw = wiki_path.read_text(encoding="utf-8")
        return build_page(
            title=title,
            raw_markup=raw,
            category=category or found_category,
            views=views,
            importance=importance,
            url=url,
        )


# --- live source ------------------------------------------------------------

class RateLimiter:
    """Thread-safe minimum interval between acquisitions."""

    def __init__(self, min_interval: float):
        self.min_interval = min_interval
        self._lock = threading.Lock()
        self._next_at = 0.0

    def wait(self) -> None:
        if self.min_interval <= 0:
            return
        with self._lock:
            now = time.monotonic()
            delay = self._next_at - now
            self._next_at = max(now, self._next_at) + self.min_interval
        if delay > 0:
            time.sleep(delay)


@dataclass
class LiveSourceConfig:
    api_base: str = "https://en.wikipedia.org/w/api.php"
    pageviews_base: str = (
        "https://wikimedia.org/api/rest_v1/metrics/pageviews/per-article/"
        "en.wikipedia/all-access/user"
    )
    page_url_base: str = "https://en.wikipedia.org/wiki/"
    user_agent: str = "eduverba/0.1 (educational crossword dataset toolkit)"
    politeness_delay: float = 0.1
    view_window_days: int = 30
    max_retries: int = 3
    timeout: float = 30.0


class LiveWikiSource:
    """MediaWiki Action API client plus the pageview REST endpoint.

    ``session`` only needs a ``get(url, params=..., headers=..., timeout=...)``
    method, so tests inject a canned transport.
    """

    def __init__(self, config: LiveSourceConfig | None = None, session=None):
        self.config = config or LiveSourceConfig()
        if session is None:
            import requests

            session = requests.Session()
        self.session = session
        self._limiter = RateLimiter(self.config.politeness_delay)

    def _get(self, url: str, params: dict | None = None) -> dict:
        headers = {"User-Agent": self.config.user_agent}
        last_error: Exception | None = None
        for attempt in range(self.config.max_retries):
            self._limiter.wait()
            try:
                response = self.session.get(
                    url, params=params, headers=headers,
                    timeout=self.config.timeout,
                )
                if response.status_code >= 500:
                    last_error = SourceUnavailable(
                        f"HTTP {response.status_code} from {url}")
                    continue
                if response.status_code == 404:
                    raise PageNotFound(url)
                response.raise_for_status()
                return response.json()
            except (PageNotFound, UnknownCategory):
                raise
            except Exception as exc:  # connection errors, bad JSON, 4xx
                last_error = exc
        raise SourceUnavailable(str(last_error))

    def _api(self, **params) -> dict:
        params.setdefault("format", "json")
        params.setdefault("formatversion", 2)
        return self._get(self.config.api_base, params)

    def list_category_pages(self, category: str, limit: int) -> list[str]:
        titles: list[str] = []
        cont: dict = {}
        while len(titles) < limit:
            data = self._api(
                action="query",
                list="categorymembers",
                cmtitle=f"Category:{category}",
                cmtype="page",
                cmlimit=min(500, limit - len(titles)),
                **cont,
            )
            members = data.get("query", {}).get("categorymembers", [])
            titles.extend(m["title"] for m in members)
            cont = data.get("continue") or {}
            if not cont:
                break
        if not titles:
            raise UnknownCategory(category)
        return titles[:limit]

    def _fetch_wikitext(self, title: str) -> str:
        data = self._api(
            action="query",
            prop="revisions",
            rvprop="content",
            rvslots="main",
            titles=title,
            redirects=1,
        )
        pages = data.get("query", {}).get("pages", [])
        if not pages or pages[0].get("missing"):
            raise PageNotFound(title)
        revisions = pages[0].get("revisions") or []
        if not revisions:
            raise PageNotFound(title)
        return revisions[0]["slots"]["main"]["content"]

    def _fetch_views(self, title: str) -> int:
        end = datetime.now(timezone.utc) - timedelta(days=1)
        start = end - timedelta(days=self.config.view_window_days - 1)
        article = title.replace(" ", "_")
        url = (
            f"{self.config.pageviews_base}/{article}/daily/"
            f"{start:%Y%m%d}00/{end:%Y%m%d}00"
        )
        try:
            data = self._get(url)
        except PageNotFound:
            return 0  # no view data recorded for the window
        return sum(item.get("views", 0) for item in data.get("items", []))

    def fetch_metadata(self, title: str) -> tuple[int, Importance, list[str], str]:
        data = self._api(
            action="query",
            prop="pageassessments|categories",
            titles=title,
            clshow="!hidden",
            cllimit=50,
        )
        pages = data.get("query", {}).get("pages", [])
        if not pages or pages[0].get("missing"):
            raise PageNotFound(title)
        page = pages[0]
        assessments = page.get("pageassessments") or {}
        importance = max_importance(
            Importance.parse(entry.get("importance"))
            for entry in assessments.values()
        ) if assessments else Importance.UNKNOWN
        categories = [
            c["title"].removeprefix("Category:")
            for c in page.get("categories", [])
        ]
        views = self._fetch_views(title)
        url = self.config.page_url_base + title.replace(" ", "_")
        return views, importance, categories, url

    def fetch_page(self, title: str, category: str | None = None) -> PageRecord:
        raw = self._fetch_wikitext(title)
        views, importance, categories, url = self.fetch_metadata(title)
        return build_page(
            title=title,
            raw_markup=raw,
            category=category or (categories[0] if categories else ""),
            views=views,
            importance=importance,
            url=url,
        )


# --- bulk fetching ----------------------------------------------------------

def fetch_pages(
    source: PageSource,
    jobs: Sequence[tuple[str, str]],
    max_workers: int = 4,
    on_skip: Callable[[str, Exception], None] | None = None,
) -> list[PageRecord]:
    """Fetch (category, title) jobs concurrently, preserving input order.

    Pages with no extractable lead are skipped (reported via ``on_skip``);
    source errors propagate.
    """
    def fetch(job: tuple[str, str]):
        category, title = job
        try:
            return source.fetch_page(title, category=category)
        except EmptyLead as exc:
            if on_skip is not None:
                on_skip(title, exc)
            return None

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(pool.map(fetch, jobs))
    return [record for record in results if record is not None]
