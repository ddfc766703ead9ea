"""Exception hierarchy shared by every module."""


class HemiringError(Exception):
    """Base class for all library errors."""


class UnknownStructure(HemiringError, KeyError):
    def __str__(self):
        return f"unknown structure: {self.args[0]!r}" if self.args else "unknown structure"


class NotApplicable(HemiringError):
    """An operation was requested for a structure lacking the needed capability."""


class NotDense(NotApplicable):
    pass


class NotShrinkable(NotApplicable):
    pass


class NotTotallyOrdered(NotApplicable):
    pass


class DivisionByZero(HemiringError, ZeroDivisionError):
    def __init__(self, message="division by zero", index=None):
        super().__init__(message)
        self.index = index


class NotAUnit(HemiringError, ArithmeticError):
    pass


class WrongStructure(HemiringError, ValueError):
    pass


class NonCanonicalizable(HemiringError, ValueError):
    pass


class ParseError(HemiringError, ValueError):
    """Malformed element or term text; ``position`` is a 0-based column."""

    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class NonAffineExponent(ParseError):
    pass


class NonPositiveF(HemiringError, ValueError):
    pass


class EmptyAlgebra(HemiringError, ValueError):
    pass


class IndexBeforeStart(HemiringError, IndexError):
    pass


class PrecisionBudgetExceeded(HemiringError):
    """Exact evaluation would need more bits than allowed and no enclosure exists."""


class PreconditionFailed(HemiringError):
    """A hypothesis of a theorem transformer failed (often on a finite probe)."""


class BoundViolatedOnProbe(PreconditionFailed):
    pass


class NotDecreasingOnProbe(PreconditionFailed):
    pass


class NotPositiveOnProbe(PreconditionFailed):
    pass


class NotStrictlyDecreasingOnProbe(PreconditionFailed):
    pass


class SandwichViolatedOnProbe(PreconditionFailed):
    pass


class RatioViolatedOnProbe(PreconditionFailed):
    pass


class ROne(PreconditionFailed):
    pass


class NotInvertible(PreconditionFailed):
    pass


class NoNullCertificate(PreconditionFailed):
    pass


class InvalidInputCertificate(PreconditionFailed):
    pass
