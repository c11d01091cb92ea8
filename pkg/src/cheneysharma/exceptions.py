"""Exception types raised across the package."""


class CheneySharmaError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(CheneySharmaError, ValueError):
    """Operator parameters (degree, Abel parameter, ...) are out of range."""


class DegenerateInputError(CheneySharmaError, ValueError):
    """An abscissa lies outside the interval the operation is defined on."""


class UndefinedSumError(CheneySharmaError, ArithmeticError):
    """An Abel-Jensen sum would need zero raised to a negative power."""


class CurveInvariantError(CheneySharmaError, ValueError):
    """A hypotenuse description violates the curved-triangle invariants."""


class OutOfDomainError(CheneySharmaError, ValueError):
    """A point or coordinate lies outside the curved triangle."""


class ConvergenceError(CheneySharmaError, RuntimeError):
    """An iterative inverse did not converge."""


class MissingDerivativeError(CheneySharmaError, ValueError):
    """A field lacks the analytic second derivative an operation needs."""


class NegativeGapError(CheneySharmaError, ArithmeticError):
    """A second-moment gap came out negative beyond rounding tolerance."""
