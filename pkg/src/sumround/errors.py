"""Exception hierarchy.

Every error raised by the package derives from :class:`RoundingError`, which
is itself a ``ValueError`` so callers that only care about bad input can
catch the builtin.
"""


class RoundingError(ValueError):
    """Base class for all errors raised by sumround."""


class EmptyInput(RoundingError):
    pass


class NegativeEntry(RoundingError):
    pass


class SumNotInteger(RoundingError):
    pass


class InfeasibleTarget(RoundingError):
    """No vector in the floor/ceil box sums to the requested target."""


class LengthMismatch(RoundingError):
    pass


class InvalidExponent(RoundingError):
    pass


class ZeroComponent(RoundingError):
    """A relative error was requested for a vector with a zero entry."""


class TooManyComponents(RoundingError):
    """Exhaustive enumeration refused: too many non-integer components."""


class InvalidThreshold(RoundingError):
    pass


class PrecisionOverflow(RoundingError):
    pass


class NonPositiveVotes(RoundingError):
    pass


class EvaluationFailure(RoundingError):
    """An objective component raised or returned a non-finite value."""


class NotConvex(RoundingError):
    """Three-point convexity spot-check failed for an objective component."""
