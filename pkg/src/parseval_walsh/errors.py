"""Exception hierarchy.

``ValidationError`` covers bad user input (CLI exit code 1);
``NumericalCheckError`` signals that a structural identity that must hold
exactly (or to machine precision) was violated (CLI exit code 2).
"""


class ParsevalWalshError(Exception):
    pass


class ValidationError(ParsevalWalshError, ValueError):
    pass


class OrderTooLargeError(ValidationError):
    pass


class NotAFrameError(ValidationError):
    """Columns do not span the ambient space (singular frame operator)."""


class InfeasibleParameterError(ValidationError):
    pass


class NumericalCheckError(ParsevalWalshError, RuntimeError):
    pass
