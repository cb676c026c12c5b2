"""Quality filters for mined pages and their candidate keywords.

Screening never raises; it returns an auditable decision listing every
violated rule. A page passes when it is popular enough (view count above
the threshold OR top importance), its lead has an in-range word count, and
at least one bold keyword survives the keyword rules.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .ingest import Importance, PageRecord


class Reason(enum.Enum):
    LOW_POPULARITY = "LowPopularity"
    CONTEXT_TOO_SHORT = "ContextTooShort"
    CONTEXT_TOO_LONG = "ContextTooLong"
    KEYWORD_TOO_MANY_WORDS = "KeywordTooManyWords"
    KEYWORD_TOO_SHORT = "KeywordTooShort"
    KEYWORD_TOO_LONG = "KeywordTooLong"
    KEYWORD_NON_ALPHABETIC = "KeywordNonAlphabetic"
    NO_KEYWORD = "NoKeyword"


@dataclass(frozen=True)
class ScreenConfig:
    min_views: int = 10_000
    required_importance: Importance = Importance.TOP
    min_context_words: int = 30
    max_context_words: int = 1000
    max_keyword_words: int = 3
    min_keyword_chars: int = 3
    max_keyword_chars: int = 20
    # The popularity rule is a disjunction by default (views OR importance);
    # flip this to require both.
    popularity_conjunctive: bool = False
    # Restrict "alphabetic" to ASCII letters instead of any Unicode letter.
    ascii_only: bool = False

    def __post_init__(self):
        if self.min_context_words >= self.max_context_words:
            raise ValueError("min_context_words must be < max_context_words")
        if self.min_keyword_chars >= self.max_keyword_chars:
            raise ValueError("min_keyword_chars must be < max_keyword_chars")
        for name in ("min_views", "min_context_words", "max_context_words",
                     "max_keyword_words", "min_keyword_chars", "max_keyword_chars"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class ScreenDecision:
    accepted: bool
    kept_keyword: str | None = None
    reasons: tuple[Reason, ...] = field(default=())

    def __post_init__(self):
        if self.accepted != (len(self.reasons) == 0):
            raise ValueError("accepted must hold exactly when reasons is empty")
        if self.accepted and not self.kept_keyword:
            raise ValueError("accepted decisions must carry a kept keyword")


def _is_letter(ch: str, ascii_only: bool) -> bool:
    if ascii_only:
        return ("a" <= ch <= "z") or ("A" <= ch <= "Z")
    return ch.isalpha()


def keyword_ok(keyword: str, cfg: ScreenConfig) -> tuple[bool, list[Reason]]:
    """Check one whitespace-normalized keyword against the keyword rules.

    Letter counts exclude spaces, matching the crossword convention that
    answers are written without them.
    """
    reasons: list[Reason] = []
    words = keyword.split(" ")
    if len(words) > cfg.max_keyword_words:
        reasons.append(Reason.KEYWORD_TOO_MANY_WORDS)
    if any(not w for w in words):
        # Leading/trailing/double spaces break the single-space convention.
        reasons.append(Reason.KEYWORD_NON_ALPHABETIC)
    elif any(not _is_letter(ch, cfg.ascii_only) for w in words for ch in w):
        reasons.append(Reason.KEYWORD_NON_ALPHABETIC)
    letters = sum(1 for ch in keyword if ch != " ")
    if letters < cfg.min_keyword_chars:
        reasons.append(Reason.KEYWORD_TOO_SHORT)
    elif letters > cfg.max_keyword_chars:
        reasons.append(Reason.KEYWORD_TOO_LONG)
    return (not reasons, reasons)


def screen_page(page: PageRecord, cfg: ScreenConfig) -> ScreenDecision:
    """Apply every filter to a page and report all violations."""
    reasons: list[Reason] = []

    popular_views = page.views > cfg.min_views
    popular_rating = page.importance == cfg.required_importance
    if cfg.popularity_conjunctive:
        popular = popular_views and popular_rating
    else:
        popular = popular_views or popular_rating
    if not popular:
        reasons.append(Reason.LOW_POPULARITY)

    n_words = len(page.lead_text.split())
    if n_words < cfg.min_context_words:
        reasons.append(Reason.CONTEXT_TOO_SHORT)
    elif n_words > cfg.max_context_words:
        reasons.append(Reason.CONTEXT_TOO_LONG)

    kept: str | None = None
    keyword_reasons: list[Reason] = []
    for keyword in page.keywords:
        ok, why = keyword_ok(keyword, cfg)
        if ok:
            kept = keyword
            break
        keyword_reasons.extend(why)
    if kept is None:
        reasons.append(Reason.NO_KEYWORD)
        for reason in keyword_reasons:
            if reason not in reasons:
                reasons.append(reason)

    if reasons:
        return ScreenDecision(accepted=False, kept_keyword=None,
                              reasons=tuple(reasons))
    return ScreenDecision(accepted=True, kept_keyword=kept)
