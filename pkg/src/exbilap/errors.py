"""Exception hierarchy used across the package.

Everything raised on purpose derives from ExbilapError so callers can
catch toolkit failures without swallowing genuine bugs.
"""


class ExbilapError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(ExbilapError, ValueError):
    """Invalid argument values (negative tension, bad mesh sizes, ...)."""


class FactorizationError(ExbilapError):
    """Banded LDL^T factorization broke down at a pivot.

    Attributes
    ----------
    column : int
        Zero-based column index of the offending pivot.
    """

    def __init__(self, column, message=None):
        self.column = int(column)
        super().__init__(message or f"factorization breakdown at column {column}")


class BracketError(ExbilapError):
    """Spectral bracket expansion failed to enclose the target eigenvalue."""


class ConvergenceError(ExbilapError):
    """An iterative refinement loop exhausted its budget.

    Attributes
    ----------
    record : tuple
        History of (parameter, value) pairs tried before giving up.
    """

    def __init__(self, message, record=()):
        self.record = tuple(record)
        super().__init__(message)


class UnsupportedModeError(ExbilapError):
    """Operation only available on the radial (n = 0) fiber."""


class UnsupportedRegimeError(ExbilapError):
    """Parameter regime outside what a reference routine can certify."""


class NonConvexDomainError(ParameterError):
    """Support function fails strict convexity (h + h'' <= 0 somewhere).

    Attributes
    ----------
    theta : float
        An angle at which the radius of curvature is non-positive.
    """

    def __init__(self, theta, value):
        self.theta = float(theta)
        self.value = float(value)
        super().__init__(
            f"support function not strictly convex: h + h'' = {value:.6g} "
            f"at theta = {theta:.6f}"
        )
