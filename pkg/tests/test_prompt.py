import logging

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eduverba.errors import UnboundPlaceholder
from eduverba.prompt import PromptTemplate, default_template, load_template, render_prompt

PIPE = PromptTemplate("{context}|{keyword}|{category}|{num_clues}")

ROBOCALL_CONTEXT = (
    "Robocall is an automated phone call that delivers a recorded message. "
    "Robocalls are often associated with political campaigns and scams."
)


def test_direct_substitution():
    assert render_prompt(PIPE, "C", "K", "G") == "C|K|G|3"


def test_num_clues_config():
    tpl = PromptTemplate("{context}|{keyword}|{category}|{num_clues}", num_clues=5)
    assert render_prompt(tpl, "C", "K", "G").endswith("|5")


def test_default_template_contains_context_verbatim():
    tpl = default_template()
    rendered = render_prompt(tpl, ROBOCALL_CONTEXT, "Robocall", "Society")
    assert ROBOCALL_CONTEXT in rendered
    # the keyword appears exactly once outside the context
    assert rendered.count("Robocall") - ROBOCALL_CONTEXT.count("Robocall") == 1
    assert "Write 3" in rendered  # asks for exactly num_clues clues
    assert "must not contain the answer" in rendered
    assert '"clues"' in rendered  # asks for the machine-parseable payload


def test_missing_placeholder_rejected():
    with pytest.raises(UnboundPlaceholder):
        PromptTemplate("{context}|{category}|{num_clues}")


def test_duplicate_placeholder_rejected():
    with pytest.raises(UnboundPlaceholder):
        PromptTemplate("{context}{context}|{keyword}|{category}|{num_clues}")


def test_unknown_placeholder_rejected():
    with pytest.raises(UnboundPlaceholder):
        PromptTemplate("{context}|{keyword}|{category}|{num_clues}|{style}")


def test_json_example_braces_are_not_placeholders():
    tpl = PromptTemplate(
        '{context}|{keyword}|{category}|{num_clues}| respond as {"clues": [...]}')
    rendered = render_prompt(tpl, "C", "K", "G")
    assert rendered.endswith('respond as {"clues": [...]}')


def test_empty_fields_rejected():
    with pytest.raises(ValueError):
        render_prompt(PIPE, "", "K", "G")


def test_warns_when_keyword_absent_from_context(caplog):
    with caplog.at_level(logging.WARNING, logger="eduverba.prompt"):
        render_prompt(PIPE, "text about nothing", "Tapir", "Science")
    assert any("Tapir" in message for message in caplog.messages)


def test_substitution_is_single_pass():
    # a context containing a placeholder token must not be re-substituted
    rendered = render_prompt(PIPE, "sneaky {keyword} here", "K", "G")
    assert rendered == "sneaky {keyword} here|K|G|3"


def test_load_template_roundtrip(tmp_path):
    path = tmp_path / "tpl.txt"
    path.write_text(PIPE.template_text, encoding="utf-8")
    assert load_template(path).template_text == PIPE.template_text


simple_text = st.text(
    alphabet=st.characters(blacklist_characters="{}", blacklist_categories=("Cs",)),
    min_size=1, max_size=40,
)


@given(simple_text, simple_text)
def test_rendering_injective_on_contexts(context_a, context_b):
    if context_a == context_b:
        return
    ra = render_prompt(PIPE, context_a, "K", "G")
    rb = render_prompt(PIPE, context_b, "K", "G")
    assert ra != rb


@given(simple_text, simple_text, simple_text)
def test_rendered_length_is_pure_substitution(context, keyword, category):
    rendered = render_prompt(PIPE, context, keyword, category)
    placeholders = len("{context}") + len("{keyword}") + len("{category}") + len("{num_clues}")
    substituted = len(context) + len(keyword) + len(category) + len(str(PIPE.num_clues))
    assert len(rendered) == len(PIPE.template_text) - placeholders + substituted
