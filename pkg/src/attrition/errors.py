"""Exception hierarchy shared by every module."""


class AttritionError(Exception):
    """Base class for all package errors."""


class DimensionError(AttritionError, ValueError):
    """Beliefs or arrays over mismatched type spaces."""


class DomainError(AttritionError, ValueError):
    """An action outside the model's action domain."""


class EvaluationError(AttritionError, ArithmeticError):
    """A flow utility evaluated to a non-finite number."""


class ParameterError(AttritionError, ValueError):
    """Invalid numeric parameter (intensity, time step, ...)."""


class ConfigurationError(AttritionError, ValueError):
    """Invalid grid, path set or scenario configuration."""


class DegenerateAttritionError(AttritionError, ValueError):
    """The lowest type carries no mass, so there is nothing to unravel."""


class NoSolutionError(AttritionError):
    """The pooling indifference condition has no admissible root.

    ``period`` is set by the constructor to the failing period index.
    """

    def __init__(self, message: str, period: int | None = None):
        super().__init__(message)
        self.period = period


class SizeError(AttritionError, ValueError):
    """A brute-force game exceeds the enumeration bounds."""
