import json

import pytest

from eduverba.cli import main
from eduverba.config import PipelineConfig, save_config
from eduverba.dataset import read_corpus, write_corpus
from eduverba.generate import GenParams
from eduverba.mockllm import FaultyClueResponder, MockLlmServer
from tests.conftest import FIXTURE_CATEGORIES
from tests.test_dataset import make_corpus


@pytest.fixture
def corpus_file(tmp_path):
    corpus = make_corpus({"Geography": 6, "Science": 4})
    path = tmp_path / "corpus.jsonl"
    write_corpus(corpus, path)
    return path


def write_pipeline_config(tmp_path, fixture_root, endpoint=""):
    config = PipelineConfig(
        source="fixtures",
        fixture_root=str(fixture_root),
        categories=[(name, name) for name in FIXTURE_CATEGORIES],
        pages_per_category=20,
        gen=GenParams(endpoint=endpoint, model_name="mock"),
        output_dir=str(tmp_path / "build"),
    )
    path = tmp_path / "config.json"
    save_config(config, path)
    return path


def test_usage_error_exits_1(capsys):
    assert main(["stats"]) == 1  # missing --in
    assert main(["not-a-command"]) == 1


def test_stats_command(corpus_file, capsys):
    assert main(["stats", "--in", str(corpus_file)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["n_examples"] == 10
    assert out["n_clues"] == 30


def test_split_and_truncate_commands(corpus_file, tmp_path):
    train, test = tmp_path / "train.jsonl", tmp_path / "test.jsonl"
    assert main(["split", "--in", str(corpus_file), "--test-size", "2",
                 "--seed", "5", "--train-out", str(train),
                 "--test-out", str(test)]) == 0
    assert len(read_corpus(train)) == 8
    assert len(read_corpus(test)) == 2
    subset = tmp_path / "sub.jsonl"
    assert main(["truncate", "--in", str(train), "--fraction", "0.5",
                 "--seed", "1", "--out", str(subset)]) == 0
    assert len(read_corpus(subset)) == 4


def test_export_and_evaluate_roundtrip(corpus_file, tmp_path, capsys):
    exported = tmp_path / "export.jsonl"
    assert main(["export", "--in", str(corpus_file),
                 "--out", str(exported)]) == 0
    rows = [json.loads(line) for line in exported.read_text().splitlines()]
    assert len(rows) == 10
    assert all("input" in row and "target" in row for row in rows)

    # hypotheses identical to references score a perfect 100
    hyp = tmp_path / "hyp.jsonl"
    with open(hyp, "w", encoding="utf-8") as handle:
        for example in read_corpus(corpus_file):
            handle.write(json.dumps(
                {"id": example.id, "clues": list(example.clues)}) + "\n")
    scores_path = tmp_path / "scores.json"
    assert main(["evaluate", "--hyp", str(hyp), "--ref", str(corpus_file),
                 "--out", str(scores_path)]) == 0
    scores = json.loads(scores_path.read_text())
    assert scores["rougeL"][2] == 100.0


def test_adherence_command(corpus_file, tmp_path):
    out = tmp_path / "adherence.json"
    assert main(["adherence", "--data", str(corpus_file),
                 "--histogram", "buckets=10", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["n_clues"] == 30
    assert len(report["histogram"]) == 10
    assert sum(report["histogram"]) == 30


def test_assemble_command(tmp_path):
    corpus = [
        e for e in make_corpus({"Geography": 1})
    ]
    # keywords like Keyword0 share letters, so give distinct real words
    from tests.test_dataset import make_example
    rows = [make_example(0, keyword="Volcano"), make_example(1, keyword="Canyon"),
            make_example(2, keyword="Glacier")]
    path = tmp_path / "curated.jsonl"
    write_corpus(rows, path)
    out = tmp_path / "puzzle.html"
    layout_out = tmp_path / "layout.json"
    assert main(["assemble", "--in", str(path), "--rows", "15", "--cols", "15",
                 "--seed", "7", "--format", "html", "--out", str(out),
                 "--layout-out", str(layout_out)]) == 0
    assert out.read_text().startswith("<!DOCTYPE html>")
    assert json.loads(layout_out.read_text())["placements"]


def test_ratings_export_command(tmp_path, corpus_file):
    from eduverba.rating import RatingLedger

    ledger_path = tmp_path / "ratings.jsonl"
    ledger = RatingLedger(ledger_path)
    ledger.record("anything", 0, "A", "alice")
    out = tmp_path / "table.csv"
    assert main(["ratings", "export", "--ledger", str(ledger_path),
                 "--out", str(out)]) == 0
    assert "alice" in out.read_text()


def test_pipeline_command_and_stage_commands(fixture_tree, tmp_path, capsys):
    fixture_root, _ = fixture_tree
    responder = FaultyClueResponder(malformed_rate=0.2, leak_rate=0.1, seed=9)
    with MockLlmServer(responder) as server:
        config_path = write_pipeline_config(tmp_path, fixture_root, server.url)
        assert main(["pipeline", "--config", str(config_path)]) == 0
        manifest = json.loads(capsys.readouterr().out)
        assert manifest["counts"]["rows_written"] > 0

        # stage-by-stage over a small slice
        pages = tmp_path / "pages.jsonl"
        assert main(["ingest", "--config", str(config_path),
                     "--categories", "Geography", "--limit", "5",
                     "--out", str(pages)]) == 0
        screened = tmp_path / "screened.jsonl"
        rejects = tmp_path / "rejects.jsonl"
        assert main(["screen", "--config", str(config_path),
                     "--in", str(pages), "--out", str(screened),
                     "--report", str(rejects)]) == 0
        clues = tmp_path / "clues.jsonl"
        assert main(["generate", "--config", str(config_path),
                     "--in", str(screened), "--out", str(clues)]) == 0
        built = tmp_path / "built.jsonl"
        assert main(["build", "--config", str(config_path),
                     "--screened", str(screened), "--clues", str(clues),
                     "--out", str(built)]) == 0
        assert len(read_corpus(built)) > 0


def test_missing_config_exits_1(tmp_path):
    assert main(["pipeline", "--config", str(tmp_path / "nope.json")]) == 1


def test_unreachable_endpoint_exits_2(tmp_path, fixture_tree):
    fixture_root, _ = fixture_tree
    config_path = write_pipeline_config(
        tmp_path, fixture_root, "http://127.0.0.1:9/unreachable")
    assert main(["pipeline", "--config", str(config_path)]) == 2


def test_screen_threshold_flags(fixture_tree, tmp_path):
    fixture_root, _ = fixture_tree
    config_path = write_pipeline_config(tmp_path, fixture_root)
    pages = tmp_path / "pages.jsonl"
    main(["ingest", "--config", str(config_path), "--categories", "Science",
          "--limit", "10", "--out", str(pages)])
    strict_out = tmp_path / "strict.jsonl"
    assert main(["screen", "--config", str(config_path), "--in", str(pages),
                 "--out", str(strict_out), "--min-views", "1000000"]) == 0
    assert strict_out.read_text() == ""  # nobody is that popular
