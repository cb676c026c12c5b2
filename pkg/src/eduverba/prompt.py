"""Clue-generation prompt templates.

A template is plain UTF-8 text carrying the four placeholders {context},
{keyword}, {category}, and {num_clues}, each exactly once. Rendering is
pure textual substitution in a single pass, so substituted values are
never re-scanned for placeholders.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import UnboundPlaceholder

logger = logging.getLogger(__name__)

PLACEHOLDERS = ("context", "keyword", "category", "num_clues")
_PLACEHOLDER_RE = re.compile(r"\{([a-z_][a-z0-9_]*)\}")


@dataclass(frozen=True)
class PromptTemplate:
    template_text: str
    num_clues: int = 3

    def __post_init__(self):
        if self.num_clues < 1:
            raise ValueError("num_clues must be positive")
        found = _PLACEHOLDER_RE.findall(self.template_text)
        for name in PLACEHOLDERS:
            count = found.count(name)
            if count != 1:
                raise UnboundPlaceholder(
                    f"placeholder {{{name}}} must appear exactly once, found {count}")
        for name in found:
            if name not in PLACEHOLDERS:
                raise UnboundPlaceholder(f"unknown placeholder {{{name}}}")


def load_template(path: str | Path, num_clues: int = 3) -> PromptTemplate:
    return PromptTemplate(Path(path).read_text(encoding="utf-8"), num_clues)


def default_template(num_clues: int = 3) -> PromptTemplate:
    text = resources.files("eduverba.data").joinpath("default_prompt.txt") \
        .read_text(encoding="utf-8")
    return PromptTemplate(text, num_clues)


def render_prompt(
    tpl: PromptTemplate, context: str, keyword: str, category: str
) -> str:
    """Substitute the triplet (plus clue count) into the template."""
    for name, value in (("context", context), ("keyword", keyword),
                        ("category", category)):
        if not value:
            raise ValueError(f"{name} must be non-empty")
    if keyword.lower() not in context.lower():
        logger.warning("keyword %r does not occur in its context", keyword)

    values = {
        "context": context,
        "keyword": keyword,
        "category": category,
        "num_clues": str(tpl.num_clues),
    }
    return _PLACEHOLDER_RE.sub(lambda m: values[m.group(1)], tpl.template_text)
