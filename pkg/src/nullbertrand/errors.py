"""Exception hierarchy shared by every module in the package."""


class NullBertrandError(Exception):
    """Base class for all package errors."""


class LexError(NullBertrandError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ParseError(NullBertrandError):
    def __init__(self, message, position, expected=None):
        text = f"{message} at position {position}"
        if expected:
            text += f" (expected {expected!r})"
        super().__init__(text)
        self.position = position
        self.expected = expected


class DomainError(NullBertrandError, ArithmeticError):
    """Raised for sqrt/ln of non-positive values and division by zero."""


class SpecError(NullBertrandError):
    """Malformed curve-spec file or unbound names."""


class PreconditionError(NullBertrandError, ValueError):
    pass


class PseudoArcViolation(NullBertrandError):
    """The curve is not null or not pseudo-arc parametrized at a sample."""


class DegenerateCurve(NullBertrandError):
    """First four derivatives are linearly dependent (k2 = 0)."""


class QuadratureError(NullBertrandError):
    pass


class RangeError(NullBertrandError, ValueError):
    pass


class ConditionFailed(NullBertrandError):
    """Neither (1,2)-Bertrand case holds for the given constants."""


class NoSolution(NullBertrandError):
    pass


class InvalidParams(NullBertrandError, ValueError):
    pass
