"""Exception hierarchy shared by every hjmad module."""


class HJMADError(Exception):
    """Base class for all errors raised by hjmad."""


class InvalidArgumentError(HJMADError, ValueError):
    """An argument violates an operation's precondition."""


class UnsupportedDimensionError(HJMADError, ValueError):
    """A grid or quadrature oracle was asked for more than two dimensions."""


class EstimationError(HJMADError, FloatingPointError):
    """The objective returned a non-finite value at a sampled point."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point
        self.trace = None


class NumericalFailureError(HJMADError, FloatingPointError):
    """An iterate became non-finite. The partial trace is attached."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
