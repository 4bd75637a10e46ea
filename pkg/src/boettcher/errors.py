"""Exception types shared across the package.

Each class maps to one CLI exit code (see :mod:`boettcher.cli`).
"""


class BoettcherError(Exception):
    """Base class for all library errors."""


class ParameterError(BoettcherError, ValueError):
    """Invalid or mismatched input parameters."""


class DomainError(BoettcherError, ValueError):
    """Inputs are valid but outside the domain where an operation is defined."""


class HypothesisError(DomainError):
    """A theorem hypothesis (e.g. good reduction of c1) does not hold."""


class DivergenceError(DomainError):
    """Evaluation point lies outside the certified disk of convergence."""


class ResourceError(BoettcherError):
    """An enumeration or truncation budget would be exceeded."""


class IntegrityError(BoettcherError):
    """A computed table fails re-substitution into its defining equation."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree
