"""Exception and warning types raised by fgt_kernel."""


class FgtError(ValueError):
    """Base class for all library errors."""


class InvalidBandwidthError(FgtError):
    pass


class EmptySampleError(FgtError):
    pass


class InvalidParameterError(FgtError):
    pass


class InvalidConfigError(FgtError):
    pass


class DegenerateCaseError(FgtError):
    pass


class NumericalFailureError(FgtError, ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    The best available estimate and its error bound are kept on the
    exception so callers can still inspect them.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class TheoryRangeWarning(UserWarning):
    """Poverty aversion in (0, 1), outside the range the estimators cover."""


class NegativeVarianceWarning(UserWarning):
    """The asymptotic variance formula produced a negative value."""
