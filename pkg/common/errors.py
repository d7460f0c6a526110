class EppaError(Exception):
    """Base class for all errors raised by the toolkit."""


class InputError(EppaError, ValueError):
    """Invalid structure, map or argument supplied by the caller."""


class FormatError(InputError):
    """Malformed text input."""

    def __init__(self, message: str, line_number: int = 0):
        self.line_number = line_number
        if line_number:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class CapacityError(EppaError):
    """A configured size cap or timeout was exceeded."""


class PreconditionError(EppaError):
    """A documented precondition of an algorithm does not hold."""


class ConsistencyError(EppaError, AssertionError):
    """An internal invariant was violated; the result cannot be trusted."""
