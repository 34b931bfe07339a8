"""Exception types raised by the estimators."""


class NumericalError(ArithmeticError):
    """A numerical routine produced an unusable result."""


class CollapsedEstimateError(NumericalError):
    """A randomized trace estimate came out non-positive, so no logarithm exists."""


class NotPSDError(NumericalError):
    """An operator that must be positive semi-definite has a clearly negative eigenvalue."""
