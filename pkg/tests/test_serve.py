from pathlib import Path

import pytest
import requests

from eduverba.dataset import write_corpus
from eduverba.errors import CorpusUnreadable, PortInUse
from eduverba.serve import ReviewServer, ReviewService
from tests.test_dataset import make_corpus


@pytest.fixture
def corpus(tmp_path):
    corpus = make_corpus({"Geography": 3, "Science": 2})
    path = tmp_path / "corpus.jsonl"
    write_corpus(corpus, path)
    return corpus, path


@pytest.fixture
def server(corpus, tmp_path):
    _, corpus_path = corpus
    service = ReviewService(
        corpus_path=corpus_path,
        ledger_path=tmp_path / "ratings.jsonl",
        puzzles_dir=tmp_path / "puzzles",
    )
    with ReviewServer(service, port=0) as srv:
        yield srv


def test_examples_paging(server, corpus):
    rows, _ = corpus
    body = requests.get(f"{server.url}/api/examples?offset=0&limit=2").json()
    assert body["total"] == 5
    assert len(body["examples"]) == 2
    assert body["examples"][0]["id"] == rows[0].id
    rest = requests.get(f"{server.url}/api/examples?offset=4&limit=10").json()
    assert len(rest["examples"]) == 1


def test_get_single_example(server, corpus):
    rows, _ = corpus
    response = requests.get(f"{server.url}/api/examples/{rows[2].id}")
    assert response.status_code == 200
    assert response.json()["keyword"] == rows[2].keyword
    assert requests.get(f"{server.url}/api/examples/zzz").status_code == 404


def test_rating_round_trip(server, corpus, tmp_path):
    rows, _ = corpus
    payload = {"example_id": rows[0].id, "clue_index": 1,
               "rating": "A", "annotator": "alice"}
    response = requests.post(f"{server.url}/api/ratings", json=payload)
    assert response.status_code == 201
    # the mutation is on disk before the response
    ledger_text = (tmp_path / "ratings.jsonl").read_text()
    assert rows[0].id in ledger_text
    summary = requests.get(f"{server.url}/api/summary").json()
    assert summary["total"] == 1
    assert summary["counts"]["A"] == 1


def test_rating_unknown_example_404(server):
    payload = {"example_id": "missing", "clue_index": 0,
               "rating": "A", "annotator": "a"}
    assert requests.post(
        f"{server.url}/api/ratings", json=payload).status_code == 404


def test_rating_bad_requests(server, corpus):
    rows, _ = corpus
    bad_index = {"example_id": rows[0].id, "clue_index": 9,
                 "rating": "A", "annotator": "a"}
    assert requests.post(
        f"{server.url}/api/ratings", json=bad_index).status_code == 400
    bad_rating = {"example_id": rows[0].id, "clue_index": 0,
                  "rating": "Z", "annotator": "a"}
    assert requests.post(
        f"{server.url}/api/ratings", json=bad_rating).status_code == 400
    empty_by_human = {"example_id": rows[0].id, "clue_index": 0,
                      "rating": "EMPTY", "annotator": "a"}
    assert requests.post(
        f"{server.url}/api/ratings", json=empty_by_human).status_code == 400


def test_ratings_read_back(server, corpus):
    rows, _ = corpus
    for index, rating in enumerate(("A", "B")):
        requests.post(f"{server.url}/api/ratings", json={
            "example_id": rows[0].id, "clue_index": index,
            "rating": rating, "annotator": "alice"})
    requests.post(f"{server.url}/api/ratings", json={
        "example_id": rows[1].id, "clue_index": 0,
        "rating": "C", "annotator": "alice"})
    body = requests.get(
        f"{server.url}/api/ratings?example_id={rows[0].id}").json()
    assert {r["clue_index"]: r["rating"] for r in body["records"]} == \
        {0: "A", 1: "B"}
    everything = requests.get(f"{server.url}/api/ratings").json()
    assert len(everything["records"]) == 3


def test_summary_filter(server, corpus):
    rows, _ = corpus
    for annotator, rating in (("alice", "A"), ("bob", "C")):
        requests.post(f"{server.url}/api/ratings", json={
            "example_id": rows[0].id, "clue_index": 0,
            "rating": rating, "annotator": annotator})
    filtered = requests.get(
        f"{server.url}/api/summary?annotator=bob").json()
    assert filtered["total"] == 1
    assert filtered["counts"]["C"] == 1


def test_puzzle_assembly_and_fetch(server, corpus):
    rows, _ = corpus
    response = requests.post(f"{server.url}/api/puzzles", json={
        "entries": [rows[0].id, rows[1].id], "seed": 3})
    assert response.status_code == 201
    body = response.json()
    assert body["layout"]["placements"]
    fetched = requests.get(f"{server.url}/api/puzzles/{body['id']}")
    assert fetched.status_code == 200
    assert fetched.json()["layout"]["rows"] == body["layout"]["rows"]
    assert requests.get(
        f"{server.url}/api/puzzles/nope").status_code == 404


def test_puzzle_unknown_entry(server):
    response = requests.post(f"{server.url}/api/puzzles",
                             json={"entries": ["missing"]})
    assert response.status_code == 404


def test_static_assets(corpus, tmp_path):
    _, corpus_path = corpus
    ui = tmp_path / "ui"
    ui.mkdir()
    (ui / "index.html").write_text("<html>review ui</html>", encoding="utf-8")
    service = ReviewService(corpus_path, tmp_path / "r.jsonl", ui_dir=ui)
    with ReviewServer(service, port=0) as srv:
        root = requests.get(f"{srv.url}/")
        assert root.status_code == 200
        assert "review ui" in root.text
        assert requests.get(f"{srv.url}/missing.js").status_code == 404
        assert requests.get(f"{srv.url}/../secrets").status_code == 404


FRONTEND_DIR = Path(__file__).resolve().parent.parent / "frontend"


@pytest.mark.skipif(not (FRONTEND_DIR / "dist" / "main.js").is_file(),
                    reason="frontend not built (npm run build)")
def test_serves_built_review_ui(corpus, tmp_path):
    _, corpus_path = corpus
    service = ReviewService(corpus_path, tmp_path / "r.jsonl",
                            ui_dir=FRONTEND_DIR)
    with ReviewServer(service, port=0) as srv:
        index = requests.get(f"{srv.url}/")
        assert index.status_code == 200
        assert 'id="app"' in index.text
        script = requests.get(f"{srv.url}/dist/main.js")
        assert script.status_code == 200
        assert "javascript" in script.headers["Content-Type"]
        assert requests.get(f"{srv.url}/styles.css").status_code == 200


def test_corpus_unreadable(tmp_path):
    with pytest.raises(CorpusUnreadable):
        ReviewService(tmp_path / "missing.jsonl", tmp_path / "r.jsonl")


def test_port_in_use(corpus, tmp_path):
    _, corpus_path = corpus
    service = ReviewService(corpus_path, tmp_path / "r.jsonl")
    with ReviewServer(service, port=0) as first:
        with pytest.raises(PortInUse):
            ReviewServer(service, port=first.port)


def test_concurrent_raters_share_ledger(server, corpus):
    import concurrent.futures

    rows, _ = corpus
    def rate(i):
        return requests.post(f"{server.url}/api/ratings", json={
            "example_id": rows[i % len(rows)].id, "clue_index": i % 3,
            "rating": "ABCDE"[i % 5], "annotator": f"worker{i % 4}"}).status_code

    with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
        codes = list(pool.map(rate, range(40)))
    assert codes == [201] * 40
    summary = requests.get(f"{server.url}/api/summary").json()
    assert summary["total"] == len(
        {(i % len(rows), i % 3, i % 4) for i in range(40)})
