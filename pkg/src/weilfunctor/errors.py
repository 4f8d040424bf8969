"""Exception hierarchy shared by all modules."""


class WeilError(Exception):
    """Base class for every error raised by this package."""


class AlgebraError(WeilError, ValueError):
    """An algebra, element or homomorphism violates a required identity."""


class AlgebraMismatchError(AlgebraError):
    """Operands live in different algebras."""


class NotInvertibleError(AlgebraError, ZeroDivisionError):
    pass


class NotFormallyRealError(AlgebraError):
    pass


class DecompositionError(AlgebraError):
    """Idempotent lifting failed to converge."""


class DomainError(WeilError, ValueError):
    """A primitive was evaluated outside its domain.

    ``node`` is the index of the offending graph node when known.
    """

    def __init__(self, message, node=None, primitive=None, value=None):
        super().__init__(message)
        self.node = node
        self.primitive = primitive
        self.value = value


class ParseError(WeilError, ValueError):
    """Text could not be parsed; ``position`` is a 0-based column when known."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ChartError(WeilError, ValueError):
    """Missing transition, or a point outside a declared chart/overlap."""


class NotPolynomialError(WeilError, ValueError):
    """A polynomial-only routine met a transcendental or inverse node."""
