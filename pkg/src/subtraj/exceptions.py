"""Exception hierarchy.

Every validation failure derives from :class:`SubtrajError` and from the
builtin exception a caller would naturally expect (``ValueError`` for bad
values, ``IndexError`` for bad indices).
"""


class SubtrajError(Exception):
    """Base class for all errors raised by this package."""


class EmptyTrajectory(SubtrajError, ValueError):
    pass


class MixedPointKinds(SubtrajError, ValueError):
    pass


class NonFiniteCoordinate(SubtrajError, ValueError):
    pass


class LengthMismatch(SubtrajError, ValueError):
    pass


class NonMonotoneSequence(SubtrajError, ValueError):
    pass


class IndexOutOfRange(SubtrajError, IndexError):
    pass


class NonPositiveEpsilon(SubtrajError, ValueError):
    pass


class EmptyInput(SubtrajError, ValueError):
    pass


class FamilyUnsupported(SubtrajError, ValueError):
    pass


class WrongFamily(SubtrajError, ValueError):
    pass


class SymbolicPointsUnsupported(SubtrajError, TypeError):
    pass


class EmptyDatabase(SubtrajError, ValueError):
    pass


class PairMismatch(SubtrajError, ValueError):
    pass


class BudgetExceeded(SubtrajError, RuntimeError):
    pass


class ParseError(SubtrajError, ValueError):
    """Malformed input file; ``line`` is the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NonMonotoneSeq(ParseError):
    """Rows of one trajectory are not in increasing ``seq`` order."""
