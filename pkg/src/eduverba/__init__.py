"""eduverba: educational crossword clue dataset toolkit.

Builds context-grounded clue datasets from Wikipedia leads (ingest,
screen, prompt, generate, assemble), measures them (ROUGE metrics and
context adherence), supports human rating of clues, and lays curated
keyword-clue pairs out as playable crossword grids.
"""

from .config import PipelineConfig, load_config, save_config
from .dataset import (
    ClueInstructExample,
    DatasetStats,
    build_example,
    export_instruction_format,
    import_published,
    read_corpus,
    split,
    stats,
    truncate_training,
    write_corpus,
)
from .generate import ClueSet, ClueStatus, GenParams, LlmClient, leak_check, parse_clues
from .grid import (
    AssembleConfig,
    CrosswordLayout,
    Direction,
    Placement,
    assemble,
    normalize_answer,
    number_cells,
    render,
    validate_layout,
)
from .ingest import FixtureSource, Importance, LiveWikiSource, PageRecord, fetch_pages
from .metrics import (
    AdherenceReport,
    RougeScore,
    adherence_report,
    context_adherence,
    eval_generation,
    lcs_length,
    rouge_l,
    rouge_n,
    split_sentences,
    tokenize,
)
from .pipeline import run_pipeline
from .prompt import PromptTemplate, default_template, render_prompt
from .rating import Rating, RatingLedger, RatingRecord, rating_summary
from .screen import ScreenConfig, ScreenDecision, keyword_ok, screen_page
from .serve import ReviewServer, ReviewService
from .textwiki import extract_bold_keywords, extract_lead_markup, strip_markup

__version__ = "0.1.0"

__all__ = [
    "AdherenceReport",
    "AssembleConfig",
    "ClueInstructExample",
    "ClueSet",
    "ClueStatus",
    "CrosswordLayout",
    "DatasetStats",
    "Direction",
    "FixtureSource",
    "GenParams",
    "Importance",
    "LiveWikiSource",
    "LlmClient",
    "PageRecord",
    "PipelineConfig",
    "Placement",
    "PromptTemplate",
    "Rating",
    "RatingLedger",
    "RatingRecord",
    "ReviewServer",
    "ReviewService",
    "RougeScore",
    "ScreenConfig",
    "ScreenDecision",
    "adherence_report",
    "assemble",
    "build_example",
    "context_adherence",
    "default_template",
    "eval_generation",
    "export_instruction_format",
    "extract_bold_keywords",
    "extract_lead_markup",
    "fetch_pages",
    "import_published",
    "keyword_ok",
    "lcs_length",
    "leak_check",
    "load_config",
    "normalize_answer",
    "number_cells",
    "parse_clues",
    "rating_summary",
    "read_corpus",
    "render",
    "render_prompt",
    "rouge_l",
    "rouge_n",
    "run_pipeline",
    "save_config",
    "screen_page",
    "split",
    "split_sentences",
    "stats",
    "strip_markup",
    "tokenize",
    "truncate_training",
    "validate_layout",
    "write_corpus",
]
