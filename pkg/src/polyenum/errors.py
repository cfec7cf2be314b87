"""Exception hierarchy shared by all engines.

Each class carries the process exit code the command line front end uses
when the exception escapes a subcommand.
"""


class PolyenumError(Exception):
    exit_code = 6


class ParseError(PolyenumError, ValueError):
    """Malformed input file.  ``line`` is 1-based, or None if unknown."""

    exit_code = 2

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(PolyenumError, ValueError):
    exit_code = 2

    def __init__(self, diagnostics):
        self.diagnostics = diagnostics
        super().__init__("; ".join(diagnostics.errors) or "invalid representation")


class ZeroDenominatorError(PolyenumError, ZeroDivisionError):
    exit_code = 2


class InfeasibleError(PolyenumError):
    exit_code = 3


class UnboundedError(PolyenumError):
    exit_code = 3


class EnumerationTimeout(PolyenumError, TimeoutError):
    exit_code = 4


class ResourceCapError(PolyenumError):
    exit_code = 5


class ArithmeticOverflow(ResourceCapError, OverflowError):
    """A 64-bit checked operation produced a value outside the int64 range."""


class InvariantViolation(PolyenumError):
    """Internal consistency failure; indicates a bug, never bad input."""

    exit_code = 6


class PivotError(InvariantViolation):
    pass


class InvalidJobError(InvariantViolation):
    pass
