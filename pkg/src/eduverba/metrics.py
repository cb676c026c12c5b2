"""ROUGE-1/2/L, sentence splitting, and the context-adherence score.

All scores are computed from scratch (no external ROUGE package) so results
are reproducible and auditable. Components stay in [0, 1]; scaling to the
percentage convention used in reports happens only at the formatting
boundary (``as_percent``).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EmptyContext

_TOKEN_RE = re.compile(r"[a-z0-9]+")

# Words that commonly precede a period without ending the sentence.
DEFAULT_ABBREVIATIONS = (
    "Dr", "Mr", "Mrs", "Ms", "Prof", "St", "No", "Jr", "Sr",
    "vs", "etc", "Fig", "Vol", "Col", "Gen", "Lt", "Rev", "Hon",
)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs; digits are kept."""
    return _TOKEN_RE.findall(text.lower())


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Length of the longest common subsequence of two token sequences.

    O(|a|*|b|) time, O(min(|a|, |b|)) space.
    """
    if len(b) > len(a):
        a, b = b, a
    if not b:
        return 0
    row = [0] * (len(b) + 1)
    for x in a:
        prev = 0
        for j, y in enumerate(b, start=1):
            cur = row[j]
            if x == y:
                row[j] = prev + 1
            elif row[j - 1] > row[j]:
                row[j] = row[j - 1]
            prev = cur
    return row[len(b)]


@dataclass(frozen=True)
class RougeScore:
    """Recall/precision/F triple, each in [0, 1]."""

    recall: float
    precision: float
    f: float

    def as_percent(self, digits: int = 2) -> tuple[float, float, float]:
        """Scores scaled x100 and rounded, the convention used in reports."""
        return (
            round(self.recall * 100, digits),
            round(self.precision * 100, digits),
            round(self.f * 100, digits),
        )


def _f_measure(recall: float, precision: float, beta: float = 1.0) -> float:
    denom = recall + beta * beta * precision
    if denom == 0:
        return 0.0
    return (1 + beta * beta) * recall * precision / denom


def _score(overlap: int, n_ref: int, n_cand: int) -> RougeScore:
    recall = overlap / n_ref if n_ref else 0.0
    precision = overlap / n_cand if n_cand else 0.0
    return RougeScore(recall, precision, _f_measure(recall, precision))


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: str, reference: str, n: int) -> RougeScore:
    """Clipped n-gram overlap (ROUGE-N) between two texts."""
    if n not in (1, 2):
        raise ValueError(f"n must be 1 or 2, got {n}")
    cand = _ngrams(tokenize(candidate), n)
    ref = _ngrams(tokenize(reference), n)
    overlap = sum(min(count, ref[gram]) for gram, count in cand.items())
    return _score(overlap, sum(ref.values()), sum(cand.values()))


def rouge_l(candidate: str, reference: str) -> RougeScore:
    """LCS-based ROUGE-L between two texts."""
    cand = tokenize(candidate)
    ref = tokenize(reference)
    return _score(lcs_length(cand, ref), len(ref), len(cand))


# --- sentence splitting -----------------------------------------------------

_BOUNDARY_RE = re.compile(r"[.!?]+")
_LAST_WORD_RE = re.compile(r"([A-Za-z]+)$")


def split_sentences(
    text: str,
    abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS,
) -> list[str]:
    """Rule-based sentence splitting.

    Splits after sentence-final punctuation (. ! ?) followed by whitespace
    and an uppercase letter; entries in ``abbreviations`` suppress the split
    when they immediately precede a period. The trimmed sentences partition
    the input: no character outside whitespace is dropped or duplicated.
    """
    guard = set(abbreviations)
    sentences: list[str] = []
    start = 0
    for match in _BOUNDARY_RE.finditer(text):
        end = match.end()
        # Need whitespace then an uppercase letter to call this a boundary.
        rest = text[end:]
        stripped = rest.lstrip()
        if rest == stripped or not stripped or not stripped[0].isupper():
            continue
        if "." in match.group():
            word = _LAST_WORD_RE.search(text[start:match.start()])
            if word and word.group(1) in guard:
                continue
        piece = text[start:end].strip()
        if piece:
            sentences.append(piece)
        start = end
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


# --- context adherence ------------------------------------------------------

@dataclass(frozen=True)
class AdherenceReport:
    """Best-sentence ROUGE-L per clue plus the corpus mean and a histogram."""

    per_clue: tuple[tuple[str, int, float], ...]  # (clue_id, sentence idx, f)
    mean: float
    histogram: tuple[int, ...]
    bucket_edges: tuple[float, ...]


def context_adherence(clue: str, context: str) -> tuple[int, float]:
    """Max ROUGE-L F over the context's sentences; ties go to the lowest index."""
    if not context.strip():
        raise EmptyContext("context has no sentences")
    sentences = split_sentences(context)
    if not sentences:
        raise EmptyContext("context has no sentences")
    best_index, best_f = 0, -1.0
    for i, sentence in enumerate(sentences):
        f = rouge_l(clue, sentence).f
        if f > best_f:
            best_index, best_f = i, f
    return best_index, best_f


def adherence_report(
    clue_items: Iterable[tuple[str, str, str]],
    buckets: int = 20,
) -> AdherenceReport:
    """Score (clue_id, clue, context) triples and bucket the F values.

    Buckets are uniform over [0, 1]; an F of exactly 1.0 lands in the last
    bucket.
    """
    per_clue: list[tuple[str, int, float]] = []
    counts = [0] * buckets
    for clue_id, clue, context in clue_items:
        index, f = context_adherence(clue, context)
        per_clue.append((clue_id, index, f))
        counts[min(int(f * buckets), buckets - 1)] += 1
    mean = sum(f for _, _, f in per_clue) / len(per_clue) if per_clue else 0.0
    edges = tuple(i / buckets for i in range(buckets + 1))
    return AdherenceReport(tuple(per_clue), mean, tuple(counts), edges)


# --- generation evaluation ---------------------------------------------------

def _clue_list(clues) -> list[str]:
    if hasattr(clues, "clues"):
        clues = clues.clues
    return list(clues)


def eval_generation(hypothesis, reference) -> tuple[RougeScore, RougeScore, RougeScore]:
    """Score a generated clue set against a 3-clue reference set.

    Each hypothesis clue is scored against its best-matching reference clue
    (max F); the example score is the mean over the three hypothesis slots,
    with missing slots contributing zero. An empty hypothesis therefore
    scores 0/0/0, the penalty applied to malformed model output. Accepts
    ClueSet-like objects (anything with a ``clues`` attribute) or plain
    sequences of strings.
    """
    hyp = _clue_list(hypothesis)
    ref = _clue_list(reference)
    if len(ref) != 3:
        raise ValueError(f"reference must have exactly 3 clues, got {len(ref)}")
    if len(hyp) > 3:
        raise ValueError(f"hypothesis may have at most 3 clues, got {len(hyp)}")

    results = []
    for metric in (lambda c, r: rouge_n(c, r, 1),
                   lambda c, r: rouge_n(c, r, 2),
                   rouge_l):
        slots = [RougeScore(0.0, 0.0, 0.0)] * 3
        for i, clue in enumerate(hyp):
            slots[i] = max((metric(clue, r) for r in ref), key=lambda s: s.f)
        results.append(RougeScore(
            sum(s.recall for s in slots) / 3,
            sum(s.precision for s in slots) / 3,
            sum(s.f for s in slots) / 3,
        ))
    return results[0], results[1], results[2]


def eval_corpus(
    pairs: Iterable[tuple[object, object]],
) -> dict[str, RougeScore]:
    """Mean ROUGE-1/2/L over (hypothesis, reference) pairs."""
    totals = {name: [0.0, 0.0, 0.0] for name in ("rouge1", "rouge2", "rougeL")}
    count = 0
    for hypothesis, reference in pairs:
        scores = eval_generation(hypothesis, reference)
        for name, score in zip(("rouge1", "rouge2", "rougeL"), scores):
            totals[name][0] += score.recall
            totals[name][1] += score.precision
            totals[name][2] += score.f
        count += 1
    if count == 0:
        zero = RougeScore(0.0, 0.0, 0.0)
        return {"rouge1": zero, "rouge2": zero, "rougeL": zero}
    return {
        name: RougeScore(t[0] / count, t[1] / count, t[2] / count)
        for name, t in totals.items()
    }
