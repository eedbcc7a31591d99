"""Exception hierarchy shared by all modules.

``ValidationError`` covers bad user input (CLI exit code 2);
``NumericalError`` covers failures during a computation (exit code 3).
"""


class NgentError(Exception):
    pass


class ValidationError(NgentError, ValueError):
    pass


class LeakageError(ValidationError):
    """State population near the truncation edge exceeds the tolerance."""


class NumericalError(NgentError, RuntimeError):
    pass


class OptimizationError(NumericalError):
    """No start point of a multi-start search produced a feasible value."""
