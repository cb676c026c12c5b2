"""Lead-section extraction and markup handling for wikitext and HTML.

Only the lead matters to the pipeline: everything before the first section
heading. Bold spans are the keyword candidates; the rest of the markup is
stripped down to plain prose.
"""

from __future__ import annotations

import html as html_lib
import re

_WIKI_HEADING_RE = re.compile(r"^=={1,5}[^=\n]", re.MULTILINE)
_HTML_HEADING_RE = re.compile(r"<h[1-6][\s>]", re.IGNORECASE)
_COMMENT_RE = re.compile(r"<!--.*?-->", re.DOTALL)
_REF_RE = re.compile(r"<ref[^>/]*/\s*>|<ref[^>]*>.*?</ref>", re.DOTALL | re.IGNORECASE)
_TEMPLATE_RE = re.compile(r"\{\{[^{}]*\}\}", re.DOTALL)
_TABLE_RE = re.compile(r"\{\|.*?\|\}", re.DOTALL)
_TAG_RE = re.compile(r"</?[a-zA-Z][^>]*>")
_BOLD_WIKI_RE = re.compile(r"'''(.+?)'''")
_BOLD_HTML_RE = re.compile(r"<(b|strong)(?:\s[^>]*)?>(.*?)</\1\s*>",
                           re.DOTALL | re.IGNORECASE)
_QUOTES_RE = re.compile(r"''+")
_EXTLINK_RE = re.compile(r"\[(?:https?|ftp)://[^\s\]]+(?:\s+([^\]]*))?\]")


def detect_format(raw: str) -> str:
    """Return "wikitext" or "html", judged by the bold delimiter present."""
    if "'''" in raw:
        return "wikitext"
    if _BOLD_HTML_RE.search(raw):
        return "html"
    return "wikitext"


def extract_lead_markup(raw: str, fmt: str | None = None) -> str:
    """Raw markup of the content before the first section heading."""
    fmt = fmt or detect_format(raw)
    if fmt == "html":
        match = _HTML_HEADING_RE.search(raw)
    else:
        match = _WIKI_HEADING_RE.search(raw)
    return raw[:match.start()] if match else raw


def _normalize_ws(text: str) -> str:
    return " ".join(text.split())


def _strip_file_links(text: str) -> str:
    # [[File:...]] and [[Image:...]] may nest [[...]] inside captions, so a
    # regex is not enough; scan with a bracket counter.
    out = []
    i = 0
    lower = text.lower()
    while i < len(text):
        if text.startswith("[[", i) and (
            lower.startswith("[[file:", i) or lower.startswith("[[image:", i)
        ):
            depth = 0
            j = i
            while j < len(text):
                if text.startswith("[[", j):
                    depth += 1
                    j += 2
                elif text.startswith("]]", j):
                    depth -= 1
                    j += 2
                    if depth == 0:
                        break
                else:
                    j += 1
            i = j
        else:
            out.append(text[i])
            i += 1
    return "".join(out)


def _strip_wiki_links(text: str) -> str:
    def repl(match: re.Match) -> str:
        inner = match.group(1)
        return inner.rsplit("|", 1)[-1] if "|" in inner else inner

    # Innermost links first so [[a|[[b]]]]-style nesting unwinds.
    pattern = re.compile(r"\[\[([^\[\]]*)\]\]")
    while pattern.search(text):
        text = pattern.sub(repl, text)
    return text


def strip_wikitext(raw: str) -> str:
    """Reduce lead wikitext to plain prose with single-space runs."""
    text = _COMMENT_RE.sub("", raw)
    text = _REF_RE.sub("", text)
    for _ in range(20):  # unwind nested templates from the inside out
        stripped = _TEMPLATE_RE.sub("", text)
        if stripped == text:
            break
        text = stripped
    text = _TABLE_RE.sub("", text)
    text = _strip_file_links(text)
    text = _strip_wiki_links(text)
    text = _EXTLINK_RE.sub(lambda m: m.group(1) or "", text)
    text = _QUOTES_RE.sub("", text)
    text = _TAG_RE.sub("", text)
    text = html_lib.unescape(text)
    return _normalize_ws(text)


def strip_html(raw: str) -> str:
    """Reduce lead HTML to plain prose with single-space runs."""
    text = _COMMENT_RE.sub("", raw)
    text = _REF_RE.sub("", text)
    text = _TAG_RE.sub(" ", text)
    text = html_lib.unescape(text)
    return _normalize_ws(text)


def strip_markup(raw: str, fmt: str | None = None) -> str:
    fmt = fmt or detect_format(raw)
    return strip_html(raw) if fmt == "html" else strip_wikitext(raw)


def extract_bold_keywords(raw_lead: str) -> list[str]:
    """Bold spans of the lead, in order, whitespace-normalized, deduplicated.

    Deduplication is case-sensitive and keeps the first occurrence. The
    markup format is auto-detected from the bold delimiter.
    """
    if detect_format(raw_lead) == "html":
        spans = [m.group(2) for m in _BOLD_HTML_RE.finditer(raw_lead)]
        cleaner = strip_html
    else:
        spans = [m.group(1) for m in _BOLD_WIKI_RE.finditer(raw_lead)]
        cleaner = strip_wikitext
    keywords: list[str] = []
    seen: set[str] = set()
    for span in spans:
        keyword = _normalize_ws(cleaner(span))
        if keyword and keyword not in seen:
            seen.add(keyword)
            keywords.append(keyword)
    return keywords
