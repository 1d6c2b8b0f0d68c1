"""Exception hierarchy shared across the package."""


class KappaGError(Exception):
    """Base class for all errors raised by this package."""


class NonFiniteError(KappaGError):
    """Data contains NaN or infinite entries."""


class ShapeMismatchError(KappaGError):
    """Array dimensions are inconsistent with each other."""


class RankDeficientError(KappaGError):
    """The Gram matrix X'X is numerically singular."""


class SingularSystemError(KappaGError):
    """A posterior precision matrix failed to factorize."""


class DomainError(KappaGError):
    """A parameter lies outside its admissible domain."""


class EmptyTraceError(KappaGError):
    """A chain trace has no usable (post burn-in) rows."""


class InvalidConfigError(KappaGError):
    """Sampler or selection configuration is invalid."""


class ParseError(KappaGError):
    """A CSV file could not be parsed.

    ``row`` and ``column`` are 1-based file coordinates (the header is
    row 1) when the failure is tied to a single cell, else None.
    """

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column
