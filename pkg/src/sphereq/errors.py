"""Exception hierarchy shared by every sphereq module."""


class SphereqError(ValueError):
    """Base class for all library errors."""


class CompositeModulus(SphereqError):
    pass


class NonPositiveDimension(SphereqError):
    pass


class ParamMismatch(SphereqError):
    pass


class LengthMismatch(SphereqError):
    pass


class EmptyProduct(SphereqError):
    pass


class BudgetExceeded(SphereqError):
    pass


class ConstraintError(SphereqError):
    """A constraint set is empty or not valid for the group parameters."""


class WrongVariant(SphereqError):
    pass


class EvenModulus(SphereqError):
    pass


class ModulusTooSmall(SphereqError):
    pass


class IndexOutOfRange(SphereqError):
    pass


class CycleDetected(SphereqError):
    pass


class DanglingVertex(SphereqError):
    pass


class NotACollision(SphereqError):
    pass


class TargetOutsideRange(SphereqError):
    pass


class EqualInputs(SphereqError):
    pass


class ParseError(SphereqError):
    """Malformed instance text; carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvariantViolation(SphereqError):
    """Instance text parsed but describes an invalid object."""
