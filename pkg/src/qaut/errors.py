"""Shared exception types."""


class QautError(Exception):
    """Base class for all library errors."""


class FormatError(QautError, ValueError):
    """Malformed input text; carries a line number when one is known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SizeGuardExceeded(QautError, RuntimeError):
    """A construction would exceed its configured state-count guard."""


class UnsupportedMode(QautError, RuntimeError):
    """The requested semantics mode is not decided by this tool.

    The message names the strongest supported alternative.
    """


class BoundOverflow(QautError, RuntimeError):
    """An integer-quantifier search bound is too large to enumerate."""
