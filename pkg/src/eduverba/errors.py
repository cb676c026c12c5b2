"""Exception types shared across the toolkit.

Grouped by the pipeline stage that raises them so callers can map
failures to exit codes (config -> 1, source/network -> 2, validation -> 3).
"""


class EduverbaError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(EduverbaError):
    """Bad or missing configuration (paths, templates, thresholds)."""


class EmptyConfig(ConfigError):
    """Configuration names no work to do (e.g. no categories)."""


# --- ingest ---------------------------------------------------------------

class SourceError(EduverbaError):
    """Base for page-source failures."""


class SourceUnavailable(SourceError):
    """Network or HTTP failure that persisted after retries."""


class UnknownCategory(SourceError):
    """The source has no such category."""


class PageNotFound(SourceError):
    """The source cannot resolve the page title."""


class EmptyLead(SourceError):
    """The page has no extractable lead section; caller must skip it."""


# --- prompt ---------------------------------------------------------------

class UnboundPlaceholder(ConfigError):
    """Template is missing a required placeholder or contains a stray one."""


# --- generate -------------------------------------------------------------

class GenerationError(EduverbaError):
    """Base for LLM-driver failures."""


class EndpointUnreachable(GenerationError):
    """The completion endpoint could not be reached after retries."""


class AuthFailure(GenerationError):
    """Credentials rejected by the endpoint; retrying will not help."""


class ParseError(EduverbaError):
    """Model response could not be parsed into exactly three clues.

    ``kind`` is ``"WrongCount"`` when a clue array was found but had the
    wrong number of entries, ``"NoStructure"`` when no clue array was found.
    """

    def __init__(self, kind: str, message: str = ""):
        self.kind = kind
        super().__init__(message or kind)


# --- metrics --------------------------------------------------------------

class EmptyContext(EduverbaError):
    """Adherence scoring needs at least one context sentence."""


# --- dataset --------------------------------------------------------------

class InvariantViolation(EduverbaError):
    """A dataset row failed one of its declared invariants."""

    def __init__(self, invariant: str, message: str = ""):
        self.invariant = invariant
        super().__init__(message or invariant)


class TestTooLarge(EduverbaError):
    """Requested test split exceeds the corpus size."""

    __test__ = False  # keep pytest from collecting this as a test class


# --- rating ---------------------------------------------------------------

class UnknownExample(EduverbaError):
    """Rating references an example id absent from the loaded corpus."""


class InvalidIndex(EduverbaError):
    """Clue index outside 0..2."""


class InvalidRating(EduverbaError):
    """Rating label not allowed for this writer (e.g. annotator-set EMPTY)."""


# --- grid -----------------------------------------------------------------

class GridError(EduverbaError):
    """Base for crossword-assembly failures."""


class NoEntries(GridError):
    """assemble() needs at least one entry."""


class WordTooLong(GridError):
    """A normalized answer does not fit within the configured board."""


class NonAlphabetic(GridError):
    """Answer contains characters that cannot be written into a grid."""


# --- serve ----------------------------------------------------------------

class PortInUse(EduverbaError):
    """Requested port is already bound."""


class CorpusUnreadable(EduverbaError):
    """Corpus file missing or not parseable."""
