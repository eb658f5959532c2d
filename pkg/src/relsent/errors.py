"""Exception taxonomy shared across relsent modules.

Every error raised by the library derives from RelsentError so callers
(including the CLI) can catch one base class. Ingestion errors carry
file/row/column context in the message.
"""


class RelsentError(Exception):
    """Base class for all relsent errors."""


class ParseError(RelsentError):
    """Malformed CSV input: bad header, bad date, wrong field count."""


class DuplicateDateError(ParseError):
    """The same date appears on more than one input row."""


class InsufficientDataError(RelsentError):
    """Too few rows remain to carry out the requested computation."""


class WindowNotReadyError(RelsentError):
    """A rolling window was requested before enough history exists."""


class EmptyResultError(RelsentError):
    """Every candidate date was excluded; nothing to return."""


class ZeroVarianceError(RelsentError):
    """A variance in a denominator is exactly zero."""


class DimensionError(RelsentError):
    """A vector length does not match the panel it applies to."""


class EmptySlabError(RelsentError):
    """No points fell inside the conditioning slab."""


class OneSidedFitError(RelsentError):
    """A two-sided fit was requested but one side has too few samples."""


class SpecError(RelsentError):
    """A synthetic-market spec failed validation."""


class SampleTooSmallWarning(UserWarning):
    """Result is returned but rests on fewer samples than recommended."""
