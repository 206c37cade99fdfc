"""Exception hierarchy.

Every failure the library can signal derives from :class:`SchrodingerError`
so that callers (and the command line front end) can map each kind to its own
exit status.
"""


class SchrodingerError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class GridError(SchrodingerError, ValueError):
    """Invalid grid or grid mismatch between sampled functions."""

    exit_code = 3


class NonFiniteError(SchrodingerError, ValueError):
    """A sampled function contains NaN or Inf."""

    exit_code = 3


class ConvergenceError(SchrodingerError, RuntimeError):
    """An iteration did not converge within its cap."""

    exit_code = 4


class VanishingDenominatorError(SchrodingerError, ZeroDivisionError):
    """Division by a sampled function that is (numerically) zero somewhere."""

    exit_code = 5


class PoleError(SchrodingerError, ValueError):
    """Evaluation requested at omega = -i, the pole of the Laguerre representation."""

    exit_code = 6


class DomainError(SchrodingerError, ValueError):
    """Argument outside the domain of an operation (orders, truncation, roots)."""

    exit_code = 7


class ParseError(SchrodingerError, ValueError):
    """Syntax or evaluation error in a potential specification."""

    exit_code = 2

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} at offset {position}"
        super().__init__(message)
