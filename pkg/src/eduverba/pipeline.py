"""End-to-end pipeline: ingest -> screen -> prompt -> generate -> build.

The run is resumable: every page title that reaches a terminal outcome is
logged to ``state.jsonl``, and a rerun skips those pages entirely. All
output files are line-delimited and appended, so a partial run is always
loadable. Manifest counts are recomputed from the output files at the end
of each run, which keeps them reconciled across resumes.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from pathlib import Path

from .config import PipelineConfig
from .dataset import Manifest, build_example, canonical_json
from .errors import EmptyConfig, UnknownCategory
from .generate import ClueStatus, LlmClient
from .ingest import PageRecord, FixtureSource, LiveWikiSource, fetch_pages
from .prompt import default_template, load_template, render_prompt
from .screen import ScreenDecision, screen_page

logger = logging.getLogger(__name__)


def make_source(config: PipelineConfig):
    if config.source == "fixtures":
        return FixtureSource(config.fixture_root)
    return LiveWikiSource(config.live)


def load_prompt_template(config: PipelineConfig):
    if config.prompt_template_path:
        return load_template(config.prompt_template_path, config.num_clues)
    return default_template(config.num_clues)


def _append_jsonl(path: Path, rows) -> None:
    with open(path, "a", encoding="utf-8") as handle:
        for row in rows:
            handle.write(canonical_json(row) + "\n")


def _read_jsonl(path: Path) -> list[dict]:
    if not path.exists():
        return []
    rows = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows


def run_pipeline(config: PipelineConfig) -> Manifest:
    """Execute all stages and return the reconciled build manifest."""
    if not config.categories:
        raise EmptyConfig("no categories configured")
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    state_path = out / "state.jsonl"
    done = {row["title"] for row in _read_jsonl(state_path)}

    source = make_source(config)
    template = load_prompt_template(config)

    # ingest: list each category and fetch whatever is not already done
    jobs: list[tuple[str, str]] = []
    listed = 0
    for category, query in config.categories:
        try:
            titles = source.list_category_pages(query, config.pages_per_category)
        except UnknownCategory:
            logger.warning("category %r unknown at the source; skipping", query)
            continue
        listed += len(titles)
        jobs.extend((category, title) for title in titles if title not in done)

    skipped_empty: list[str] = []
    pages = fetch_pages(
        source, jobs, max_workers=config.concurrency,
        on_skip=lambda title, exc: skipped_empty.append(title))
    _append_jsonl(out / "pages.jsonl", (page.to_dict() for page in pages))
    _append_jsonl(state_path, ({"title": title, "outcome": "empty_lead"}
                               for title in skipped_empty))

    # screen
    accepted: list[tuple[PageRecord, ScreenDecision]] = []
    new_state: list[dict] = []
    reject_rows: list[dict] = []
    for page in pages:
        decision = screen_page(page, config.screen)
        if decision.accepted:
            accepted.append((page, decision))
        else:
            reasons = [reason.value for reason in decision.reasons]
            reject_rows.append({"title": page.title, "reasons": reasons})
            new_state.append({"title": page.title, "outcome": "rejected",
                              "reasons": reasons})
    _append_jsonl(out / "rejects.jsonl", reject_rows)
    _append_jsonl(
        out / "screened.jsonl",
        (page.to_dict() | {"kept_keyword": decision.kept_keyword}
         for page, decision in accepted))

    # prompt + generate
    client = LlmClient(config.gen, leak_filter=config.leak_filter)
    gen_jobs = [
        (render_prompt(template, page.lead_text, decision.kept_keyword,
                       page.category),
         decision.kept_keyword)
        for page, decision in accepted
    ]
    clue_sets = (client.generate_many(gen_jobs, concurrency=config.concurrency)
                 if gen_jobs else [])
    _append_jsonl(
        out / "clues.jsonl",
        ({"title": page.title, "keyword": decision.kept_keyword,
          **clue_set.to_dict()}
         for (page, decision), clue_set in zip(accepted, clue_sets)))

    # build
    corpus_rows = []
    category_names = [name for name, _ in config.categories]
    for (page, decision), clue_set in zip(accepted, clue_sets):
        if clue_set.status is ClueStatus.VALID:
            example = build_example(page, decision, clue_set,
                                    cfg=config.screen,
                                    categories=category_names)
            corpus_rows.append(example.to_dict())
            new_state.append({"title": page.title, "outcome": "row_written",
                              "id": example.id})
        else:
            new_state.append({"title": page.title,
                              "outcome": "generation_failed",
                              "status": clue_set.status.value})
    _append_jsonl(out / "corpus.jsonl", corpus_rows)
    _append_jsonl(state_path, new_state)

    manifest = build_manifest(
        config, out, listed,
        new_pages=len(pages), new_rows=len(corpus_rows))
    manifest.write(out / "manifest.json")
    return manifest


def build_manifest(
    config: PipelineConfig,
    out: Path,
    listed: int,
    new_pages: int = 0,
    new_rows: int = 0,
) -> Manifest:
    """Recount every stage from the files on disk."""
    state = _read_jsonl(out / "state.jsonl")
    outcomes = Counter(row["outcome"] for row in state)
    reject_reasons: Counter = Counter()
    for row in _read_jsonl(out / "rejects.jsonl"):
        for reason in row.get("reasons", []):
            reject_reasons[reason] += 1
    clue_status = Counter(
        row.get("status") for row in _read_jsonl(out / "clues.jsonl"))
    counts = {
        "pages_listed": listed,
        "pages_fetched": len(_read_jsonl(out / "pages.jsonl")),
        "skipped_empty_lead": outcomes.get("empty_lead", 0),
        "accepted": outcomes.get("row_written", 0)
        + outcomes.get("generation_failed", 0),
        "rejected": outcomes.get("rejected", 0),
        "rejected_by_reason": dict(sorted(reject_reasons.items())),
        "generation": {status: clue_status.get(status, 0)
                       for status in ("Valid", "Malformed", "Leaked", "Empty")},
        "generation_failed": outcomes.get("generation_failed", 0),
        "rows_written": len(_read_jsonl(out / "corpus.jsonl")),
        "new_pages_this_run": new_pages,
        "new_rows_this_run": new_rows,
        "no_op": new_pages == 0 and new_rows == 0,
    }
    return Manifest(seed=config.seed, config_hash=config.config_hash(),
                    counts=counts)
