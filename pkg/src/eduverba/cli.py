"""Command-line entry point.

Every pipeline stage is exposed as a subcommand so builds can run end to
end (``pipeline``) or stage by stage with inspectable intermediate files.
Exit codes: 0 success, 1 configuration error, 2 source or network error,
3 validation failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from . import dataset as ds
from . import pipeline as pl
from .config import PipelineConfig, load_config, save_config
from .errors import (
    ConfigError,
    CorpusUnreadable,
    EduverbaError,
    GenerationError,
    GridError,
    InvariantViolation,
    ParseError,
    PortInUse,
    SourceError,
    UnboundPlaceholder,
)
from .generate import ClueSet, ClueStatus, LlmClient
from .grid import AssembleConfig, assemble, render, save_layout
from .ingest import Importance, PageRecord, fetch_pages
from .metrics import adherence_report, eval_corpus, eval_generation
from .prompt import render_prompt
from .rating import RatingLedger, export_table
from .screen import ScreenConfig, screen_page
from .serve import ReviewServer, ReviewService

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOURCE = 2
EXIT_VALIDATION = 3

logger = logging.getLogger("eduverba")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are config errors (exit 1)
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _read_jsonl(path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows


def _write_jsonl(path, rows) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(ds.canonical_json(row) + "\n")
            count += 1
    return count


# --- subcommand implementations ---


def cmd_ingest(args) -> int:
    config = load_config(args.config)
    source = pl.make_source(config)
    categories = config.categories
    if args.categories:
        wanted = set(args.categories)
        categories = [pair for pair in categories if pair[0] in wanted]
    jobs = []
    for category, query in categories:
        titles = source.list_category_pages(
            query, args.limit or config.pages_per_category)
        jobs.extend((category, title) for title in titles)
    pages = fetch_pages(source, jobs, max_workers=config.concurrency)
    count = _write_jsonl(args.out, (page.to_dict() for page in pages))
    print(f"wrote {count} pages to {args.out}")
    return EXIT_OK


def _screen_config_from_args(args, base: ScreenConfig) -> ScreenConfig:
    overrides = {}
    for name in ("min_views", "min_context_words", "max_context_words",
                 "max_keyword_words", "min_keyword_chars", "max_keyword_chars"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "required_importance", None):
        overrides["required_importance"] = Importance.parse(
            args.required_importance)
    return dataclasses.replace(base, **overrides) if overrides else base


def cmd_screen(args) -> int:
    config = load_config(args.config)
    screen_config = _screen_config_from_args(args, config.screen)
    kept, rejected = [], []
    for row in _read_jsonl(getattr(args, "in")):
        page = PageRecord.from_dict(row)
        decision = screen_page(page, screen_config)
        if decision.accepted:
            kept.append(page.to_dict() | {"kept_keyword": decision.kept_keyword})
        else:
            rejected.append({"title": page.title,
                             "reasons": [r.value for r in decision.reasons]})
    _write_jsonl(args.out, kept)
    if args.report:
        _write_jsonl(args.report, rejected)
    print(f"accepted {len(kept)}, rejected {len(rejected)}")
    return EXIT_OK


def cmd_generate(args) -> int:
    config = load_config(args.config)
    if args.endpoint:
        config = dataclasses.replace(
            config, gen=dataclasses.replace(config.gen, endpoint=args.endpoint))
    if args.model:
        config = dataclasses.replace(
            config, gen=dataclasses.replace(config.gen, model_name=args.model))
    if args.template:
        config = dataclasses.replace(config, prompt_template_path=args.template)
    if not config.gen.endpoint:
        raise ConfigError("no completion endpoint configured")
    template = pl.load_prompt_template(config)
    client = LlmClient(config.gen, leak_filter=config.leak_filter)
    rows = _read_jsonl(getattr(args, "in"))
    jobs = []
    for row in rows:
        page = PageRecord.from_dict(row)
        keyword = row["kept_keyword"]
        prompt = render_prompt(template, page.lead_text, keyword, page.category)
        jobs.append((prompt, keyword))
    results = client.generate_many(jobs, concurrency=config.concurrency)
    out_rows = [
        {"title": row["title"], "keyword": row["kept_keyword"],
         **clue_set.to_dict()}
        for row, clue_set in zip(rows, results)
    ]
    _write_jsonl(args.out, out_rows)
    valid = sum(1 for r in results if r.status is ClueStatus.VALID)
    print(f"generated {valid}/{len(results)} valid clue sets")
    return EXIT_OK


def cmd_build(args) -> int:
    config = load_config(args.config)
    screened = {row["title"]: row for row in _read_jsonl(args.screened)}
    categories = [name for name, _ in config.categories]
    examples = []
    failures = 0
    for row in _read_jsonl(args.clues):
        clue_set = ClueSet.from_dict(row)
        if clue_set.status is not ClueStatus.VALID:
            failures += 1
            continue
        page_row = screened.get(row["title"])
        if page_row is None:
            failures += 1
            continue
        page = PageRecord.from_dict(page_row)
        decision = screen_page(page, config.screen)
        examples.append(ds.build_example(
            page, decision, clue_set, cfg=config.screen, categories=categories))
    ds.write_corpus(examples, args.out)
    print(f"built {len(examples)} rows ({failures} failed clue sets skipped)")
    return EXIT_OK


def cmd_stats(args) -> int:
    corpus = ds.read_corpus(getattr(args, "in"))
    result = ds.stats(corpus)
    payload = json.dumps(result.to_dict(), indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(payload + "\n", encoding="utf-8")
    print(payload)
    return EXIT_OK


def cmd_split(args) -> int:
    corpus = ds.read_corpus(getattr(args, "in"))
    train, test = ds.split(corpus, test_size=args.test_size, seed=args.seed)
    ds.write_corpus(train, args.train_out)
    ds.write_corpus(test, args.test_out)
    print(f"train {len(train)}, test {len(test)}")
    return EXIT_OK


def cmd_truncate(args) -> int:
    corpus = ds.read_corpus(getattr(args, "in"))
    subset = ds.truncate_training(corpus, args.fraction, seed=args.seed)
    ds.write_corpus(subset, args.out)
    print(f"kept {len(subset)} of {len(corpus)} rows")
    return EXIT_OK


def cmd_export(args) -> int:
    config = load_config(args.config)
    if args.template:
        config = dataclasses.replace(config, prompt_template_path=args.template)
    template = pl.load_prompt_template(config)
    corpus = ds.read_corpus(getattr(args, "in"))
    count = ds.export_corpus(corpus, template, args.out)
    print(f"exported {count} instruction records to {args.out}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    references = {e.id: e for e in ds.read_corpus(args.ref)}
    hyp_rows = _read_jsonl(args.hyp)
    pairs = []
    ids = []
    for row in hyp_rows:
        reference = references.get(row.get("id", ""))
        if reference is None:
            raise InvariantViolation(
                "hyp_ids", f"hypothesis id {row.get('id')!r} not in references")
        hyp_clues = [c for c in row.get("clues", []) if c]
        pairs.append((hyp_clues, list(reference.clues)))
        ids.append(row.get("id"))
    per_example = [
        {"id": example_id,
         "rouge1": r1.as_percent()[2],
         "rouge2": r2.as_percent()[2],
         "rougeL": rl.as_percent()[2]}
        for example_id, (r1, r2, rl) in zip(
            ids, (eval_generation(h, r) for h, r in pairs))
    ]
    scores = eval_corpus(pairs)
    report = {
        "n_examples": len(pairs),
        "rouge1": scores["rouge1"].as_percent(),
        "rouge2": scores["rouge2"].as_percent(),
        "rougeL": scores["rougeL"].as_percent(),
        "note": "aggregate triples are (recall, precision, f) x100; "
                "per-example values are F x100",
        "per_example": per_example,
    }
    payload = json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(payload + "\n", encoding="utf-8")
    print(payload)
    return EXIT_OK


def cmd_adherence(args) -> int:
    buckets = 20
    if args.histogram:
        for part in args.histogram.split(","):
            key, _, value = part.partition("=")
            if key.strip() == "buckets" and value:
                buckets = int(value)
    corpus = ds.read_corpus(args.data)
    items = ((f"{e.id}#{i}", clue, e.context)
             for e in corpus for i, clue in enumerate(e.clues))
    report = adherence_report(items, buckets=buckets)
    payload = {
        "mean_rouge_l_f": round(report.mean, 6),
        "n_clues": len(report.per_clue),
        "histogram": list(report.histogram),
        "bucket_edges": list(report.bucket_edges),
        "per_clue": [
            {"clue_id": clue_id, "best_sentence_index": index,
             "rouge_l_f": round(f, 6)}
            for clue_id, index, f in report.per_clue
        ],
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    print(text)
    return EXIT_OK


def cmd_assemble(args) -> int:
    corpus = ds.read_corpus(getattr(args, "in"))
    entries = [(e.keyword, e.clues[0]) for e in corpus]
    layout = assemble(entries, AssembleConfig(
        max_rows=args.rows, max_cols=args.cols, seed=args.seed))
    if args.layout_out:
        save_layout(layout, args.layout_out)
    document = render(layout, args.format)
    Path(args.out).write_text(document + "\n", encoding="utf-8")
    print(f"placed {len(layout.placements)} words "
          f"({len(layout.unplaced)} unplaced) -> {args.out}")
    return EXIT_OK


def cmd_ratings_export(args) -> int:
    ledger = RatingLedger(args.ledger)
    count = export_table(ledger, args.out)
    print(f"exported {count} latest ratings to {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    service = ReviewService(
        corpus_path=args.corpus,
        ledger_path=args.ledger,
        ui_dir=args.ui,
    )
    server = ReviewServer(service, port=args.port)
    print(f"serving on {server.url} "
          f"({len(service.examples)} examples); Ctrl-C to stop")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return EXIT_OK


def cmd_pipeline(args) -> int:
    config = load_config(args.config)
    if args.output_dir:
        config = dataclasses.replace(config, output_dir=args.output_dir)
    manifest = pl.run_pipeline(config)
    print(json.dumps(manifest.to_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_init_config(args) -> int:
    save_config(PipelineConfig(), args.out)
    print(f"wrote default config to {args.out}")
    return EXIT_OK


# --- parser wiring ---


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eduverba",
                     description="Educational crossword clue dataset toolkit")
    parser.add_argument("--verbose", action="store_true",
                        help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--config", default=None,
                       help="pipeline config file (or EDUVERBA_CONFIG)")
        return p

    p = add("ingest", cmd_ingest, "fetch pages into a pages.jsonl file")
    p.add_argument("--out", required=True)
    p.add_argument("--categories", nargs="*", help="restrict to these categories")
    p.add_argument("--limit", type=int, default=None)

    p = add("screen", cmd_screen, "apply quality filters to fetched pages")
    p.add_argument("--in", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None, help="rejects report path")
    p.add_argument("--min-views", dest="min_views", type=int, default=None)
    p.add_argument("--required-importance", dest="required_importance")
    p.add_argument("--min-context-words", dest="min_context_words",
                   type=int, default=None)
    p.add_argument("--max-context-words", dest="max_context_words",
                   type=int, default=None)
    p.add_argument("--max-keyword-words", dest="max_keyword_words",
                   type=int, default=None)
    p.add_argument("--min-keyword-chars", dest="min_keyword_chars",
                   type=int, default=None)
    p.add_argument("--max-keyword-chars", dest="max_keyword_chars",
                   type=int, default=None)

    p = add("generate", cmd_generate, "generate clues for screened pages")
    p.add_argument("--in", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--endpoint", default=None)
    p.add_argument("--model", default=None)
    p.add_argument("--template", default=None)

    p = add("build", cmd_build, "assemble dataset rows from screen+generate output")
    p.add_argument("--screened", required=True)
    p.add_argument("--clues", required=True)
    p.add_argument("--out", required=True)

    p = add("stats", cmd_stats, "corpus statistics")
    p.add_argument("--in", required=True)
    p.add_argument("--out", default=None)

    p = add("split", cmd_split, "stratified train/test split")
    p.add_argument("--in", required=True)
    p.add_argument("--test-size", type=int, default=600)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train-out", required=True)
    p.add_argument("--test-out", required=True)

    p = add("truncate", cmd_truncate, "nested uniform training subset")
    p.add_argument("--in", required=True)
    p.add_argument("--fraction", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = add("export", cmd_export, "write (input, target) instruction records")
    p.add_argument("--in", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--template", default=None)

    p = add("evaluate", cmd_evaluate, "score hypothesis clues against references")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--out", default=None)

    p = add("adherence", cmd_adherence, "context-adherence ROUGE-L report")
    p.add_argument("--data", required=True)
    p.add_argument("--histogram", default=None, help="e.g. buckets=20")
    p.add_argument("--out", default=None)

    p = add("assemble", cmd_assemble, "build a crossword from curated rows")
    p.add_argument("--in", required=True)
    p.add_argument("--rows", type=int, default=15)
    p.add_argument("--cols", type=int, default=15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "html", "printable"),
                   default="html")
    p.add_argument("--out", required=True)
    p.add_argument("--layout-out", default=None,
                   help="also persist the structured layout file")

    ratings = sub.add_parser("ratings", help="rating ledger utilities")
    ratings_sub = ratings.add_subparsers(dest="ratings_command", required=True)
    p = ratings_sub.add_parser("export", help="flatten the ledger to CSV")
    p.set_defaults(func=cmd_ratings_export)
    p.add_argument("--ledger", required=True)
    p.add_argument("--out", required=True)

    p = add("serve", cmd_serve, "serve the review API and UI")
    p.add_argument("--port", type=int, default=8606)
    p.add_argument("--corpus", required=True)
    p.add_argument("--ledger", required=True)
    p.add_argument("--ui", default=None, help="directory of built UI assets")

    p = add("pipeline", cmd_pipeline, "run every stage end to end")
    p.add_argument("--output-dir", default=None)

    p = add("init-config", cmd_init_config, "write a default config file")
    p.add_argument("--out", required=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verbose:
            logging.basicConfig(level=logging.INFO)
        return args.func(args)
    except (ConfigError, UnboundPlaceholder) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SourceError, GenerationError, PortInUse) as exc:
        print(f"source error: {exc}", file=sys.stderr)
        return EXIT_SOURCE
    except (InvariantViolation, ParseError, CorpusUnreadable, GridError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except EduverbaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
