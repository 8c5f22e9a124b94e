"""
The spectral averaging inequality
``int <chi_B(H_lambda) sqrt(V) phi, sqrt(V) phi> / (1 + lambda^2) d lambda <= |B| |phi|^2``
evaluated by trapezoidal quadrature over a lambda grid.
"""
from dataclasses import dataclass
import logging

import numpy as np
from scipy import integrate

from simplicity_lab.birman_schwinger.blocks import coupling_of, operator_of
from simplicity_lab.exceptions import DomainError, NumericalFailure

__all__ = (
    'AveragingReport', 'spectral_averaging_check',
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AveragingReport:
    lhs: float
    rhs: float
    error_budget: float
    tail: float
    lambda_max: float
    points: int

    @property
    def margin(self):
        return self.rhs + self.error_budget - self.lhs

    @property
    def passed(self):
        return self.margin >= 0.0


def spectral_averaging_check(H0, V, B, phi, lambda_max=50.0, points=2001):
    """
    Integrate the spectral measure of ``sqrt(V) phi`` on the interval ``B`` against the Cauchy
    weight over ``[-lambda_max, lambda_max]``.

    The error budget is the tail ``|sqrt(V) phi|^2 (pi - 2 arctan(lambda_max))`` plus half a grid
    step times the total variation of the integrand, which bounds the quadrature error of a
    piecewise constant integrand.
    """
    A = operator_of(H0)
    coupling = coupling_of(V)
    lo, hi = (float(x) for x in B)
    if not lo <= hi:
        raise DomainError("Interval [{0}, {1}] is empty.".format(lo, hi))
    if lambda_max < 50:
        raise DomainError("The lambda grid must cover at least [-50, 50].")
    if points < 3:
        raise DomainError("The lambda grid needs at least three points.")

    phi = np.asarray(phi)
    if phi.shape != (A.shape[0],):
        raise DomainError("phi must be a vector of length {0}.".format(A.shape[0]))
    psi = coupling.sqrt @ phi
    weight = float(np.vdot(psi, psi).real)

    lambdas = np.linspace(-lambda_max, lambda_max, points)
    stack = A[None, :, :] + lambdas[:, None, None] * coupling.matrix[None, :, :]
    try:
        values, vectors = np.linalg.eigh(stack)
    except np.linalg.LinAlgError as e:
        raise NumericalFailure("Eigensolver failed on the lambda grid: {0}".format(e))

    inside = (values >= lo) & (values <= hi)
    overlaps = np.abs(np.einsum('kij,i->kj', vectors.conj(), psi)) ** 2
    integrand = np.sum(overlaps * inside, axis=1) / (1.0 + lambdas ** 2)
    lhs = float(integrate.trapezoid(integrand, lambdas))

    step = lambdas[1] - lambdas[0]
    tail = weight * (np.pi - 2.0 * np.arctan(lambda_max))
    budget = tail + 0.5 * step * float(np.abs(np.diff(integrand)).sum())
    rhs = (hi - lo) * float(np.vdot(phi, phi).real)
    logger.debug("lhs=%.6g rhs=%.6g budget=%.3g", lhs, rhs, budget)
    return AveragingReport(lhs=lhs, rhs=rhs, error_budget=float(budget), tail=float(tail), lambda_max=float(lambda_max), points=int(points))
