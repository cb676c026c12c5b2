"""Shared fixtures: a deterministic 100-page Wikipedia-style fixture tree.

The corpus is generated from a fixed seed so every run sees the same pages:
roughly seventy pass screening and the rest violate popularity, context
length, or keyword rules (two pages have no lead at all and are skipped
at fetch time).
"""

from __future__ import annotations

import random

import pytest

FIXTURE_CATEGORIES = ("Geography", "Science", "Society", "Literature", "History")

_SYLLABLES = ("va", "ri", "lo", "ket", "mor", "an", "zu", "pel", "tos", "dra",
              "min", "cal", "ber", "nix", "ola")

_FILLER = (
    "the region spans a wide area and supports many settlements",
    "scholars have described its role in trade and culture since antiquity",
    "its name derives from an older term recorded in early documents",
    "modern studies measure its influence on neighbouring systems",
    "several institutions maintain archives devoted to the subject",
    "the topic appears in school curricula around the world",
)


def _make_keyword(rng: random.Random, length: int) -> str:
    word = ""
    while len(word) < length:
        word += rng.choice(_SYLLABLES)
    return word[:length].capitalize()


def _make_lead(keyword: str, category: str, words: int, rng: random.Random) -> str:
    head = f"'''{keyword}''' is a notable topic in {category.lower()} studies."
    body = []
    while len((head + " " + " ".join(body)).split()) < words:
        body.append(rng.choice(_FILLER) + ".")
    text = head + " " + " ".join(body)
    tokens = text.split()
    return " ".join(tokens[:words])


def build_fixture_tree(root, n_pages: int = 100, seed: int = 1234):
    """Write a <category>/<title>.wiki+.meta tree; returns expectation counts."""
    rng = random.Random(seed)
    expected = {"accepted": 0, "rejected": 0, "empty": 0}
    for i in range(n_pages):
        category = FIXTURE_CATEGORIES[i % len(FIXTURE_CATEGORIES)]
        cat_dir = root / category
        cat_dir.mkdir(parents=True, exist_ok=True)
        title = f"{_make_keyword(rng, 7)}{i:03d}"
        roll = i % 20

        if roll == 18 and expected["empty"] < 2:
            (cat_dir / f"{title}.wiki").write_text("", encoding="utf-8")
            (cat_dir / f"{title}.meta").write_text(
                "views=20000\nimportance=Low\nurl=https://x/e\n", encoding="utf-8")
            expected["empty"] += 1
            continue

        keyword = _make_keyword(rng, rng.randint(4, 12))
        views = rng.randint(12_000, 50_000)
        importance = "Low"
        lead_words = rng.randint(40, 220)
        bad = None
        if roll in (15, 16):
            bad = "popularity"
            views = rng.randint(0, 9_000)
        elif roll == 17:
            bad = "short"
            lead_words = rng.randint(10, 25)
        elif roll == 19:
            bad = "keyword"
            keyword = "X9"  # non-alphabetic and too short

        lead = _make_lead(keyword, category, lead_words, rng)
        (cat_dir / f"{title}.wiki").write_text(
            lead + "\n\n== History ==\nTail section text.\n", encoding="utf-8")
        (cat_dir / f"{title}.meta").write_text(
            f"views={views}\nimportance={importance}\n"
            f"url=https://fixtures.example/{title}\n",
            encoding="utf-8")
        expected["rejected" if bad else "accepted"] += 1
    return expected


@pytest.fixture(scope="session")
def fixture_tree(tmp_path_factory):
    root = tmp_path_factory.mktemp("wiki_fixtures")
    expected = build_fixture_tree(root)
    return root, expected
