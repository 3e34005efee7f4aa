"""Exception types shared across the package.

The CLI maps :class:`InputError` (and its subclasses) to exit code 2 and
:class:`NumericError` to exit code 3.
"""


class OddsForecastError(Exception):
    """Base class for errors raised by this package."""


class InputError(OddsForecastError, ValueError):
    """Arguments violate a documented precondition."""


class DomainError(InputError):
    """A special function was called outside its domain."""


class NumericError(OddsForecastError, ArithmeticError):
    """A numerical procedure failed to converge or produced no finite values."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class IngestionError(InputError):
    """Input series are malformed or misaligned."""
