"""Exception types raised across the package.

Every error derives from :class:`QsuffError`, which is itself a ``ValueError``
so callers that only care about "bad input" can catch the builtin.
"""


class QsuffError(ValueError):
    pass


class NotSquare(QsuffError):
    pass


class NotHermitian(QsuffError):
    pass


class NotPSD(QsuffError):
    pass


class NotPSDOutput(NotPSD):
    pass


class DomainError(QsuffError):
    pass


class ConvergenceFailure(QsuffError):
    pass


class DimensionMismatch(QsuffError):
    pass


class InvalidState(QsuffError):
    pass


class InvalidChannel(QsuffError):
    pass


class InvalidLambda(QsuffError):
    pass


class EmptyGrid(QsuffError):
    pass


class QuadratureBudgetExceeded(QsuffError):
    pass


class SupportViolation(QsuffError):
    pass


class InvalidTruncation(QsuffError):
    pass


class EvenNodeCount(QsuffError):
    pass


class ParseError(QsuffError):
    pass
