import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eduverba.errors import EmptyContext
from eduverba.metrics import (
    RougeScore,
    adherence_report,
    context_adherence,
    eval_corpus,
    eval_generation,
    lcs_length,
    rouge_l,
    rouge_n,
    split_sentences,
    tokenize,
)


def brute_force_lcs(a, b):
    """Independent oracle: enumerate every subsequence of the shorter side."""
    if len(a) > len(b):
        a, b = b, a
    best = 0
    for r in range(len(a), 0, -1):
        for combo in itertools.combinations(a, r):
            it = iter(b)
            if all(tok in it for tok in combo):
                return r
    return best


TOKENS = ["a", "b", "c", "d", "e"]


def test_lcs_identity_and_trivia():
    assert lcs_length([], []) == 0
    assert lcs_length(["x"], []) == 0
    seq = ["the", "cat", "sat"]
    assert lcs_length(seq, seq) == 3


def test_lcs_hand_cases():
    assert lcs_length(["a", "b", "c"], ["c", "b", "a"]) == 1
    assert lcs_length(["the", "cat", "sat"], ["the", "cat", "ran"]) == 2


def test_lcs_matches_brute_force_oracle():
    rng = random.Random(20240520)
    for _ in range(1000):
        a = [rng.choice(TOKENS) for _ in range(rng.randint(0, 10))]
        b = [rng.choice(TOKENS) for _ in range(rng.randint(0, 10))]
        assert lcs_length(a, b) == brute_force_lcs(a, b), (a, b)


def test_tokenize():
    assert tokenize("The cat, the CAT!") == ["the", "cat", "the", "cat"]
    assert tokenize("") == []
    assert tokenize("COVID-19 era") == ["covid", "19", "era"]


def test_rouge_n_identical():
    for n in (1, 2):
        score = rouge_n("the tapir eats", "the tapir eats", n)
        assert score.recall == score.precision == score.f == 1.0


def test_rouge_1_hand_computed():
    score = rouge_n("the cat sat", "the cat ran", 1)
    assert score.recall == pytest.approx(2 / 3, abs=1e-9)
    assert score.precision == pytest.approx(2 / 3, abs=1e-9)
    assert score.f == pytest.approx(2 / 3, abs=1e-9)


def test_rouge_2_hand_computed():
    score = rouge_n("the cat sat", "the cat ran", 2)
    assert score.recall == pytest.approx(0.5, abs=1e-9)
    assert score.precision == pytest.approx(0.5, abs=1e-9)
    assert score.f == pytest.approx(0.5, abs=1e-9)


def test_rouge_n_rejects_other_orders():
    with pytest.raises(ValueError):
        rouge_n("a", "b", 3)


def test_rouge_n_clipping():
    # candidate repeats "the" three times but reference has it twice
    score = rouge_n("the the the", "the x the", 1)
    assert score.precision == pytest.approx(2 / 3, abs=1e-9)
    assert score.recall == pytest.approx(2 / 3, abs=1e-9)


def test_rouge_l_hand_computed():
    assert rouge_l("same text here", "same text here").f == 1.0
    score = rouge_l("the cat sat", "the cat ran")
    assert score.f == pytest.approx(2 / 3, abs=1e-9)
    empty = rouge_l("", "anything at all")
    assert (empty.recall, empty.precision, empty.f) == (0.0, 0.0, 0.0)


def test_rouge_percent_formatting():
    score = RougeScore(0.12345, 0.5, 0.42424)
    assert score.as_percent() == (12.35, 50.0, 42.42)


token_lists = st.lists(st.sampled_from(TOKENS), max_size=12)


@given(token_lists, token_lists)
def test_lcs_property_against_oracle(a, b):
    assert lcs_length(a, b) == brute_force_lcs(a, b)


@given(st.text(max_size=60), st.text(max_size=60))
def test_rouge_l_f_symmetry(a, b):
    assert rouge_l(a, b).f == pytest.approx(rouge_l(b, a).f, abs=1e-12)


@given(st.text(max_size=60), st.text(max_size=60))
def test_rouge_l_dominated_by_rouge_1(a, b):
    # LCS is an order-constrained matching, so it never beats clipped overlap.
    assert rouge_l(a, b).f <= rouge_n(a, b, 1).f + 1e-12


@given(st.text(max_size=80), st.text(max_size=80))
def test_rouge_components_in_range(a, b):
    for score in (rouge_n(a, b, 1), rouge_n(a, b, 2), rouge_l(a, b)):
        for value in (score.recall, score.precision, score.f):
            assert 0.0 <= value <= 1.0


# --- sentence splitting ---


def test_split_single_sentence():
    assert split_sentences("One sentence") == ["One sentence"]


def test_split_basic_boundaries():
    assert split_sentences("A. B? C!") == ["A.", "B?", "C!"]


def test_split_guards_abbreviations():
    got = split_sentences("Dr. Fill solved it. It won.")
    assert got == ["Dr. Fill solved it.", "It won."]


def test_split_requires_uppercase_after_boundary():
    assert split_sentences("pi is 3.14 roughly. Yes.") == ["pi is 3.14 roughly.", "Yes."]
    assert split_sentences("lower. case continues") == ["lower. case continues"]


@settings(max_examples=300)
@given(st.text(max_size=200))
def test_split_partitions_input(text):
    joined = "".join(split_sentences(text))
    assert "".join(joined.split()) == "".join(text.split())


# --- context adherence ---


def test_adherence_exact_sentence_match():
    context = "The tapir lives in forests. It is a large herbivore. Rivers help it."
    index, f = context_adherence("It is a large herbivore.", context)
    assert index == 1
    assert f == 1.0


def test_adherence_no_overlap():
    _, f = context_adherence("zzz qqq", "The cat sat. The dog ran.")
    assert f == 0.0


def test_adherence_tie_breaks_low_index():
    index, _ = context_adherence("alpha beta", "Alpha beta here. Alpha beta there.")
    assert index == 0


def test_adherence_empty_context():
    with pytest.raises(EmptyContext):
        context_adherence("a clue", "   ")


def test_adherence_report_histogram():
    items = [
        ("c1", "exact sentence", "Exact sentence. Other text."),
        ("c2", "nothing shared", "Exact sentence. Other text."),
    ]
    report = adherence_report(items, buckets=10)
    assert sum(report.histogram) == 2
    assert report.histogram[9] == 1  # the exact match lands in the top bucket
    assert report.histogram[0] == 1
    assert report.mean == pytest.approx(0.5, abs=1e-9)


# --- generation evaluation ---


REF = ["Automated phone call used by scammers",
       "Often blocked by carriers",
       "Prerecorded message delivered in bulk"]


def test_eval_self_score_is_perfect():
    r1, r2, rl = eval_generation(REF, REF)
    assert r1.f == pytest.approx(1.0, abs=1e-9)
    assert r2.f == pytest.approx(1.0, abs=1e-9)
    assert rl.f == pytest.approx(1.0, abs=1e-9)


def test_eval_empty_hypothesis_scores_zero():
    r1, r2, rl = eval_generation([], REF)
    assert (r1.f, r2.f, rl.f) == (0.0, 0.0, 0.0)


def test_eval_single_identical_clue_is_one_third():
    _, _, rl = eval_generation([REF[1]], REF)
    assert rl.f == pytest.approx(1 / 3, abs=1e-9)


def test_eval_requires_three_references():
    with pytest.raises(ValueError):
        eval_generation(REF, REF[:2])


def test_eval_corpus_mean():
    scores = eval_corpus([(REF, REF), ([], REF)])
    assert scores["rougeL"].f == pytest.approx(0.5, abs=1e-9)
    empty = eval_corpus([])
    assert empty["rouge1"].f == 0.0
