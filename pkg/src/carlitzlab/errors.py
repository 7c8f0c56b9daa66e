"""Shared exception types.

CapError covers every configured resource limit (field order, enumeration
budget, counting level, search budget); the CLI maps it to its own exit code.
"""


class CarlitzLabError(Exception):
    """Base class for library errors."""


class CapError(CarlitzLabError):
    """A configured size or budget cap would be exceeded."""


class ParseError(CarlitzLabError, ValueError):
    """Malformed textual input; carries the offending position."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        if text:
            message = f"{message} at position {pos}: {text!r}"
        super().__init__(message)


class InconsistentCountsError(CarlitzLabError):
    """Point counts admit no integral Weil polynomial."""
