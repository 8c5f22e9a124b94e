"""
Exceptions raised by the numerical laboratory.
"""

__all__ = (
    'SimplicityLabError', 'DomainError', 'PreconditionError',
    'SingularMatrix', 'NumericalFailure', 'NearSpectrum',
)


class SimplicityLabError(Exception):
    """
    Base class of all errors raised by this package.
    """
    pass


class DomainError(SimplicityLabError, ValueError):
    """
    Raised when the input violates a shape, geometry or parameter precondition.
    """
    pass


class PreconditionError(DomainError):
    """
    Raised when a named mathematical precondition does not hold,
    for example a zero coupling or a non-simple profile.
    """
    pass


class NearSpectrum(DomainError):
    """
    Raised when a spectral parameter is too close to the spectrum of the unperturbed operator.
    """

    def __init__(self, message, distance=None):
        super(NearSpectrum, self).__init__(message)
        self.distance = distance


class SingularMatrix(SimplicityLabError, ArithmeticError):
    """
    Raised when an LU factorization meets a pivot below the threshold.
    """

    def __init__(self, message, pivot=None):
        super(SingularMatrix, self).__init__(message)
        self.pivot = pivot


class NumericalFailure(SimplicityLabError, ArithmeticError):
    """
    Raised when a solver does not converge or a residual contract is violated.
    The trial index is attached when the failure happened inside a sampled experiment.
    """

    def __init__(self, message, trial=None):
        super(NumericalFailure, self).__init__(message)
        self.trial = trial
