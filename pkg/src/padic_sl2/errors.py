"""Exception hierarchy shared by every module."""


class PadicError(Exception):
    """Base class for all errors raised by padic_sl2."""


class InvalidRational(PadicError, ValueError):
    pass


class InvalidParams(PadicError, ValueError):
    pass


class DomainError(PadicError, ValueError):
    pass


class PrecisionExhausted(PadicError, ArithmeticError):
    """A predicate could not be decided at the available p-adic precision.

    Callers may retry with a larger relative precision.
    """


class NotASquare(PadicError, ValueError):
    pass


class WrongClass(PadicError, ValueError):
    pass


class WrongSubgroup(PadicError, ValueError):
    pass


class UnsupportedCase(PadicError, NotImplementedError):
    pass


class TooLarge(PadicError, ValueError):
    pass


class InvariantViolation(PadicError, AssertionError):
    """A mathematical claim the library relies on was observed to fail.

    This should never be raised; the CLI maps it to exit code 3.
    """


class InternalInconsistency(InvariantViolation):
    pass


class NoCoverIndex(InvariantViolation):
    pass
