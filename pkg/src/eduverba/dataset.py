"""Corpus assembly, persistence, splitting, statistics, and export.

A corpus is a list of examples, each pairing a context, keyword, and
category with exactly three clues. Storage is line-delimited JSON (UTF-8,
one example per line) so files stream, diff, and append cleanly.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InvariantViolation, TestTooLarge
from .generate import ClueSet, ClueStatus
from .ingest import PageRecord
from .prompt import PromptTemplate, render_prompt
from .screen import ScreenConfig, ScreenDecision, keyword_ok

# Default taxonomy: the three most and three least frequent categories are
# fixed by the corpus description; the rest are configurable names.
DEFAULT_CATEGORIES = (
    "Geography", "Science", "Applied Science", "History", "Literature",
    "Society", "Technology", "Arts", "Music", "Sports", "Politics",
    "Religion", "Philosophy", "Mathematics", "Health", "Economics",
    "Nature", "Biography", "Games", "Education",
)


def canonical_json(obj) -> str:
    """Stable serialization used everywhere a byte-identical file matters."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False,
                      separators=(",", ":"))


def example_id(url: str, keyword: str) -> str:
    digest = hashlib.sha256(f"{url}\x1f{keyword}".encode("utf-8")).hexdigest()
    return digest[:16]


@dataclass(frozen=True)
class ClueInstructExample:
    id: str
    context: str
    keyword: str
    category: str
    clues: tuple[str, str, str]
    source_url: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "context": self.context,
            "keyword": self.keyword,
            "category": self.category,
            "clues": list(self.clues),
            "source_url": self.source_url,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClueInstructExample":
        clues = tuple(data["clues"])
        if len(clues) != 3:
            raise InvariantViolation(
                "three_clues", f"example {data.get('id')} has {len(clues)} clues")
        return cls(
            id=data["id"],
            context=data["context"],
            keyword=data["keyword"],
            category=data["category"],
            clues=clues,  # type: ignore[arg-type]
            source_url=data.get("source_url", ""),
        )


def build_example(
    page: PageRecord,
    decision: ScreenDecision,
    clues: ClueSet,
    cfg: ScreenConfig | None = None,
    categories: Sequence[str] = DEFAULT_CATEGORIES,
) -> ClueInstructExample:
    """Combine an accepted page with its validated clues into a dataset row.

    Every invariant is re-established here rather than trusted from the
    caller; a violation names the invariant that failed.
    """
    cfg = cfg or ScreenConfig()
    if not decision.accepted or not decision.kept_keyword:
        raise InvariantViolation("decision_accepted",
                                 f"page {page.title!r} was not accepted")
    if clues.status is not ClueStatus.VALID:
        raise InvariantViolation(
            "clues_valid", f"clue set status is {clues.status.value}")
    keyword = decision.kept_keyword
    ok, reasons = keyword_ok(keyword, cfg)
    if not ok:
        raise InvariantViolation(
            "keyword_ok", f"{keyword!r}: {[r.value for r in reasons]}")
    n_words = len(page.lead_text.split())
    if not (cfg.min_context_words <= n_words <= cfg.max_context_words):
        raise InvariantViolation(
            "context_words", f"lead has {n_words} words")
    if categories and page.category not in categories:
        raise InvariantViolation(
            "category_known", f"{page.category!r} is not configured")
    return ClueInstructExample(
        id=example_id(page.url, keyword),
        context=page.lead_text,
        keyword=keyword,
        category=page.category,
        clues=(clues.clues[0], clues.clues[1], clues.clues[2]),
        source_url=page.url,
    )


# --- persistence ------------------------------------------------------------

def write_corpus(examples: Iterable[ClueInstructExample], path: str | Path) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for example in examples:
            handle.write(canonical_json(example.to_dict()) + "\n")
            count += 1
    return count


def read_corpus(path: str | Path) -> list[ClueInstructExample]:
    examples = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                examples.append(ClueInstructExample.from_dict(json.loads(line)))
    return examples


# --- split and truncation ----------------------------------------------------

def split(
    corpus: Sequence[ClueInstructExample],
    test_size: int = 600,
    seed: int = 0,
) -> tuple[list[ClueInstructExample], list[ClueInstructExample]]:
    """Deterministic stratified split into (train, test).

    Test rows are allocated per category proportionally, rounding by
    largest remainder, then sampled without replacement with the given
    seed. Train and test are disjoint and exhaustive.
    """
    if test_size > len(corpus):
        raise TestTooLarge(f"test_size {test_size} > corpus size {len(corpus)}")
    by_category: dict[str, list[int]] = {}
    for index, example in enumerate(corpus):
        by_category.setdefault(example.category, []).append(index)

    total = len(corpus)
    quotas: dict[str, int] = {}
    remainders: list[tuple[float, str]] = []
    for category, indices in sorted(by_category.items()):
        exact = test_size * len(indices) / total if total else 0.0
        quotas[category] = math.floor(exact)
        remainders.append((exact - math.floor(exact), category))
    shortfall = test_size - sum(quotas.values())
    remainders.sort(key=lambda pair: (-pair[0], pair[1]))
    for _, category in remainders[:shortfall]:
        quotas[category] += 1

    rng = random.Random(seed)
    test_indices: set[int] = set()
    for category, indices in sorted(by_category.items()):
        chosen = rng.sample(indices, quotas[category])
        test_indices.update(chosen)
    train = [ex for i, ex in enumerate(corpus) if i not in test_indices]
    test = [ex for i, ex in enumerate(corpus) if i in test_indices]
    return train, test


def truncate_training(
    train: Sequence[ClueInstructExample],
    fraction: float,
    seed: int = 0,
) -> list[ClueInstructExample]:
    """Uniform subset of size round-half-up(fraction * len(train)).

    Subsets are nested for a fixed seed: the 1% subset is contained in the
    10% subset, which is contained in the full set.
    """
    if not (0 < fraction <= 1):
        raise ValueError("fraction must be in (0, 1]")
    if fraction == 1.0:
        return list(train)
    size = math.floor(fraction * len(train) + 0.5)
    rng = random.Random(seed)
    order = list(range(len(train)))
    rng.shuffle(order)
    chosen = sorted(order[:size])
    return [train[i] for i in chosen]


# --- statistics ---------------------------------------------------------------

DEFAULT_WORD_BUCKETS = (0, 30, 50, 100, 200, 400, 600, 800, 1000, 10_000)
DEFAULT_CHAR_BUCKETS = (0, 3, 5, 8, 11, 14, 17, 20, 100)


@dataclass(frozen=True)
class DatasetStats:
    n_examples: int
    n_clues: int
    n_categories: int
    category_histogram: dict[str, int]
    context_word_hist: dict[str, int]
    clue_word_hist: dict[str, int]
    keyword_char_hist: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "n_examples": self.n_examples,
            "n_clues": self.n_clues,
            "n_categories": self.n_categories,
            "category_histogram": dict(self.category_histogram),
            "context_word_hist": dict(self.context_word_hist),
            "clue_word_hist": dict(self.clue_word_hist),
            "keyword_char_hist": dict(self.keyword_char_hist),
        }


def _bucketize(values: Iterable[int], edges: Sequence[int]) -> dict[str, int]:
    counts: Counter = Counter()
    for value in values:
        for low, high in zip(edges, edges[1:]):
            if low <= value < high:
                counts[f"[{low},{high})"] += 1
                break
        else:
            counts[f">={edges[-1]}"] += 1
    return {label: counts[label] for label in sorted(counts)}


def stats(
    corpus: Sequence[ClueInstructExample],
    word_buckets: Sequence[int] = DEFAULT_WORD_BUCKETS,
    char_buckets: Sequence[int] = DEFAULT_CHAR_BUCKETS,
) -> DatasetStats:
    categories = Counter(example.category for example in corpus)
    return DatasetStats(
        n_examples=len(corpus),
        n_clues=sum(len(example.clues) for example in corpus),
        n_categories=len(categories),
        category_histogram=dict(sorted(categories.items())),
        context_word_hist=_bucketize(
            (len(e.context.split()) for e in corpus), word_buckets),
        clue_word_hist=_bucketize(
            (len(clue.split()) for e in corpus for clue in e.clues), word_buckets),
        keyword_char_hist=_bucketize(
            (sum(1 for ch in e.keyword if ch != " ") for e in corpus),
            char_buckets),
    )


# --- instruction-format export -------------------------------------------------

def clue_payload(clues: Sequence[str]) -> str:
    """The serialized clue object used as the generation target."""
    return canonical_json({"clues": list(clues)})


def export_instruction_format(
    example: ClueInstructExample, tpl: PromptTemplate
) -> dict[str, str]:
    """One training record: the rendered prompt and its target payload."""
    return {
        "id": example.id,
        "input": render_prompt(
            tpl, example.context, example.keyword, example.category),
        "target": clue_payload(example.clues),
    }


def export_corpus(
    corpus: Sequence[ClueInstructExample],
    tpl: PromptTemplate,
    path: str | Path,
) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for example in corpus:
            handle.write(canonical_json(export_instruction_format(example, tpl)))
            handle.write("\n")
            count += 1
    return count


# --- import adapter for published corpus files ----------------------------------

DEFAULT_COLUMN_MAP = {
    "context": ("context", "text", "input_text", "source_text"),
    "keyword": ("keyword", "answer", "word"),
    "category": ("category", "topic"),
    "clues": ("clues", "outputs", "targets"),
    "clue_prefix": ("clue", "clue_", "output"),
    "url": ("source_url", "url", "link"),
    "id": ("id", "example_id", "uid"),
}


def _pick(row: dict, names: Sequence[str]):
    for name in names:
        if name in row and row[name] is not None:
            return row[name]
    return None


def _row_to_example(row: dict, column_map: dict) -> ClueInstructExample:
    context = _pick(row, column_map["context"])
    keyword = _pick(row, column_map["keyword"])
    category = _pick(row, column_map["category"]) or ""
    if context is None or keyword is None:
        raise InvariantViolation(
            "import_columns",
            f"cannot find context/keyword among {sorted(row)[:12]}")
    clues = _pick(row, column_map["clues"])
    if clues is None:
        clues = []
        for prefix in column_map["clue_prefix"]:
            found = [row[k] for k in (f"{prefix}1", f"{prefix}2", f"{prefix}3")
                     if k in row and row[k] is not None]
            if found:
                clues = found
                break
    if isinstance(clues, str):
        try:
            parsed = json.loads(clues)
            clues = parsed.get("clues", parsed) if isinstance(parsed, dict) else parsed
        except ValueError:
            clues = [c.strip() for c in clues.split("\n") if c.strip()]
    clues = list(clues)[:3]
    if len(clues) != 3:
        raise InvariantViolation(
            "three_clues", f"imported row has {len(clues)} clues")
    url = _pick(row, column_map["url"]) or ""
    row_id = _pick(row, column_map["id"]) or example_id(url or context, keyword)
    return ClueInstructExample(
        id=str(row_id), context=context, keyword=keyword, category=category,
        clues=(clues[0], clues[1], clues[2]), source_url=url,
    )


def _iter_rows(path: Path) -> Iterable[dict]:
    suffix = path.suffix.lower()
    if suffix in (".jsonl", ".ndjson"):
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    yield json.loads(line)
    elif suffix == ".json":
        data = json.loads(path.read_text(encoding="utf-8"))
        rows = data if isinstance(data, list) else data.get("data", [])
        yield from rows
    elif suffix == ".csv":
        import csv

        with open(path, encoding="utf-8", newline="") as handle:
            yield from csv.DictReader(handle)
    elif suffix == ".parquet":
        import pandas as pd

        frame = pd.read_parquet(path)
        for record in frame.to_dict(orient="records"):
            yield record
    else:
        raise InvariantViolation("import_format",
                                 f"unsupported corpus format: {path.suffix}")


def import_published(
    path: str | Path,
    column_map: dict | None = None,
) -> list[ClueInstructExample]:
    """Load the published dataset from local files of any common format.

    ``path`` may be a single file (jsonl/json/csv/parquet) or a directory
    of such files. Column names are resolved through ``column_map``,
    which accepts the same keys as DEFAULT_COLUMN_MAP.
    """
    mapping = dict(DEFAULT_COLUMN_MAP)
    for key, value in (column_map or {}).items():
        mapping[key] = tuple(value) if isinstance(value, (list, tuple)) else (value,)
    root = Path(path)
    if root.is_dir():
        files = sorted(
            p for p in root.rglob("*")
            if p.suffix.lower() in (".jsonl", ".ndjson", ".json", ".csv", ".parquet")
        )
    else:
        files = [root]
    examples = []
    for file in files:
        for row in _iter_rows(file):
            examples.append(_row_to_example(row, mapping))
    return examples


# --- manifest -------------------------------------------------------------------

@dataclass
class Manifest:
    seed: int
    config_hash: str
    counts: dict = field(default_factory=dict)
    tool_version: str = "0.1.0"

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "config_hash": self.config_hash,
            "counts": dict(self.counts),
            "tool_version": self.tool_version,
        }

    def write(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8")

    @classmethod
    def read(cls, path: str | Path) -> "Manifest":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            seed=data["seed"],
            config_hash=data["config_hash"],
            counts=data.get("counts", {}),
            tool_version=data.get("tool_version", ""),
        )
