"""Shared error taxonomy.

Every error raised at a public boundary is one of these, so callers
(including the foreign-function layer) can map failures to stable codes.
"""


class SigdiceError(ValueError):
    """Base class for all validation errors raised by this package."""


class LengthMismatchError(SigdiceError):
    """Two signals that must share a length do not."""


class NonFiniteError(SigdiceError):
    """An input contains NaN or infinity where finite values are required."""


class ConfigError(SigdiceError):
    """A configuration object violates its invariants."""


class ParseError(SigdiceError):
    """A file could not be parsed into a signal or sample table."""
