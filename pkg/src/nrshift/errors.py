"""Exception hierarchy shared by every module."""


class NRError(Exception):
    """Base class for all errors raised by nrshift."""


class InputError(NRError, ValueError):
    """An argument violates a documented precondition."""


class NumericalError(NRError, ArithmeticError):
    """A computation produced a result outside its guaranteed accuracy."""


class ConvergenceError(NumericalError):
    """An iterative method did not converge.

    ``residuals`` holds the last residuals so callers can judge how far off
    the iteration ended up.
    """

    def __init__(self, msg, residuals=None):
        super().__init__(msg)
        self.residuals = residuals
