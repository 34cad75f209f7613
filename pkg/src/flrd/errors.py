"""Exception types raised by :mod:`flrd`.

Every error carries a short ``kind`` string; the command line front end
prints it as ``error:<kind>: message``.
"""


class FLRDError(Exception):
    """Base class for all package errors."""

    kind = "flrd"


class InvalidDimensionError(FLRDError, ValueError):
    kind = "invalid-dimension"


class InvalidDomainError(FLRDError, ValueError):
    kind = "invalid-domain"


class OutOfDomainError(FLRDError, ValueError):
    kind = "out-of-domain"


class SingularGramError(FLRDError, ValueError):
    """Raised when a Gram matrix fails its Cholesky factorization.

    ``minor`` is the 1-based order of the first leading minor that is not
    positive.
    """

    kind = "singular-gram"

    def __init__(self, message, minor=None):
        super().__init__(message)
        self.minor = minor


class UnderdeterminedError(FLRDError, ValueError):
    kind = "underdetermined"


class RankError(FLRDError, ValueError):
    kind = "rank"

    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class UnsupportedDegreeError(FLRDError, ValueError):
    kind = "unsupported-degree"


class BasisMismatchError(FLRDError, ValueError):
    kind = "basis-mismatch"


class EmptyDataError(FLRDError, ValueError):
    kind = "empty-data"


class MustCenterError(FLRDError, ValueError):
    kind = "must-center"


class InvalidPenaltyError(FLRDError, ValueError):
    kind = "invalid-penalty"


class NotPSDError(FLRDError, ValueError):
    kind = "not-psd"


class TooFewObservationsError(FLRDError, ValueError):
    kind = "too-few-observations"


class ParseError(FLRDError, ValueError):
    """Malformed input file; ``row`` and ``column`` are 1-based when known."""

    kind = "parse"

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class DimensionMismatchError(FLRDError, ValueError):
    kind = "dimension-mismatch"


class ConfigError(FLRDError, ValueError):
    kind = "config"


class DegenerateDesignWarning(UserWarning):
    """All centered curves vanish; only the penalties keep the fit well posed."""
