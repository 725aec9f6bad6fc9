"""Exception hierarchy shared by all dominet modules.

The CLI maps these onto stable exit codes: ConfigError -> 2,
DataError -> 3, NumericalError -> 4.
"""


class DominetError(Exception):
    """Base class for all errors raised by dominet."""


class ConfigError(DominetError):
    """Invalid or inconsistent configuration."""


class DataError(DominetError):
    """Malformed input data: schema, parse, shape or degenerate series."""


class DimensionError(DataError):
    """Array or panel dimensions violate an operation's requirements."""


class DegenerateSeriesError(DataError):
    """A series has zero variance or is otherwise unusable."""

    def __init__(self, message, series=None):
        super().__init__(message)
        self.series = series


class NumericalError(DominetError):
    """Numerical failure inside a linear-algebra or solver kernel."""


class SingularMatrixError(NumericalError):
    """Matrix is singular or not positive definite.

    ``pivot`` is the 1-based index of the failing Cholesky pivot /
    leading principal minor when known.
    """

    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class ConvergenceError(NumericalError):
    """An iterative routine did not converge within its budget.

    ``residual`` carries the convergence measure achieved on exit.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ExactFitError(NumericalError):
    """A node regression produced a zero residual variance."""


class ContractViolation(DominetError):
    """Caller broke a documented precondition."""
