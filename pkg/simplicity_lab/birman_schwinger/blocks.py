"""
Birman-Schwinger blocks ``G(z) = sqrt(V) (H_0 - z)^-1 sqrt(V)`` compressed to the range of ``V``,
their boundary values, the eigenvector correspondence and threshold scans.
"""
from dataclasses import dataclass, field
import logging

import mpmath
import numpy as np
import scipy.linalg

from simplicity_lab.exceptions import DomainError, NearSpectrum, NumericalFailure, PreconditionError
from simplicity_lab.linalg import as_matrix, hermitian_eig, is_simple, lu_solve, operator_norm, resolvent
from simplicity_lab.models import Coupling, Hamiltonian

__all__ = (
    'BSBlock', 'BoundaryValue', 'CorrespondenceReport', 'ThresholdScan', 'NeumannRemainder',
    'operator_of', 'coupling_of',
    'bs_block', 'bs_boundary', 'bs_correspondence', 'simplicity_threshold_scan', 'neumann_remainder',
)

logger = logging.getLogger(__name__)

#: ``bs_block`` refuses real ``z`` closer than this (relative to the norm) to the spectrum.
REAL_AXIS_TOLERANCE = 1e-8

#: Energies this close to the unperturbed spectrum are skipped or refused.
SPECTRUM_DISTANCE = 1e-6

#: Correspondence residuals above this are recomputed in extended precision.
REFINE_THRESHOLD = 1e-10

#: Decimal digits of the extended precision.
REFINE_DPS = 40


def operator_of(H):
    """
    The matrix of a :class:`~simplicity_lab.models.Hamiltonian` or of a plain array.
    """
    return H.matrix if isinstance(H, Hamiltonian) else as_matrix(H, 'H')


def coupling_of(V):
    return V if isinstance(V, Coupling) else Coupling.from_matrix(V)


def _distance_to_spectrum(H, energy):
    values = scipy.linalg.eigvalsh(H)
    return float(np.abs(values - energy).min())


@dataclass(frozen=True)
class BSBlock:
    """
    A Birman-Schwinger block at the spectral parameter ``z``.
    """
    z: complex
    block: np.ndarray
    source: str = ''

    @property
    def imaginary_part(self):
        return (self.block - self.block.conj().T) / 2j

    def is_herglotz(self, atol=1e-10):
        """
        For ``Im z > 0`` the imaginary part is positive semidefinite.
        """
        if self.block.size == 0:
            return True
        smallest = scipy.linalg.eigvalsh(self.imaginary_part)[0]
        return bool(smallest >= -atol * (1.0 + operator_norm(self.block)))

    def is_simple(self, gap_tol=1e-8):
        return is_simple(self.block, gap_tol)


def bs_block(H0, V, z, source=''):
    """
    ``G(z)`` in the basis of ``R(V)``: the coordinates ``V`` touches when it is invertible there
    (the sites of ``C_0`` for Model B, the channels for Model A), an eigenbasis of ``V`` otherwise.
    ``V = 0`` gives an empty block.
    """
    H = operator_of(H0)
    coupling = coupling_of(V)
    z = complex(z)
    n = H.shape[0]

    if z.imag == 0.0:
        distance = _distance_to_spectrum(H, z.real)
        if distance <= REAL_AXIS_TOLERANCE * max(operator_norm(H), 1.0):
            raise NearSpectrum("z = {0} lies within {1:.3g} of the spectrum.".format(z.real, distance), distance=distance)

    if coupling.rank == 0:
        return BSBlock(z=z, block=np.zeros((0, 0), dtype=complex), source=source)

    S = coupling.sqrt_range
    X = lu_solve(H - z * np.eye(n), S.astype(complex))
    return BSBlock(z=z, block=S.conj().T @ X, source=source)


@dataclass(frozen=True)
class BoundaryValue:
    """
    Blocks at ``E + i eps`` for decreasing ``eps`` with their successive differences.
    """
    energy: float
    epsilons: tuple
    block: BSBlock
    real_block: BSBlock
    differences: tuple
    converged: bool


def bs_boundary(H0, V, E, eps_list, tol=1e-8):
    """
    Approach ``G(E + i0)`` along ``eps_list`` and compare with the direct evaluation at ``E``.
    """
    eps_list = [float(e) for e in eps_list]
    if not eps_list or any(e <= 0 for e in eps_list) or any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise PreconditionError("eps_list must be a strictly decreasing list of positive numbers.")

    H = operator_of(H0)
    distance = _distance_to_spectrum(H, E)
    if distance <= SPECTRUM_DISTANCE:
        raise NearSpectrum("E = {0} lies within {1:.3g} of the spectrum.".format(E, distance), distance=distance)

    blocks = [bs_block(H, V, E + 1j * eps) for eps in eps_list]
    differences = tuple(operator_norm(b.block - a.block) for a, b in zip(blocks, blocks[1:]))
    converged = bool(differences[-1] < tol) if differences else False
    return BoundaryValue(
        energy=float(E),
        epsilons=tuple(eps_list),
        block=blocks[-1],
        real_block=bs_block(H, V, complex(E)),
        differences=differences,
        converged=converged,
    )


@dataclass(frozen=True)
class CorrespondenceReport:
    """
    Per admissible eigenpair ``(E, u)`` of ``H_lambda``: the residual of ``G(E) sqrt(V) u = -sqrt(V) u / lambda``.
    ``refined`` lists the energies whose residual was recomputed in extended precision.
    """
    residuals: tuple
    skipped: tuple
    vanishing: tuple = field(default=())
    refined: tuple = field(default=())

    @property
    def max_residual(self):
        return max((r for _, r in self.residuals), default=0.0)

    def passed(self, tol=1e-8):
        return not self.vanishing and self.max_residual < tol


def _mp_inner(ctx, x, y):
    return ctx.fsum(ctx.conj(x[i]) * y[i] for i in range(x.rows))


def _refined_residual(H, S, lam, energy, u):
    """
    The correspondence residual of the eigenpair near ``(energy, u)``, in ``REFINE_DPS`` digits.

    ``H_lambda`` is rebuilt as ``H_0 + lambda S S*`` in extended precision, the pair is polished by
    two inverse iteration steps at the shift ``energy`` and a Rayleigh quotient, and ``G(E)`` is
    applied by an extended-precision solve.
    """
    ctx = mpmath.MPContext()
    ctx.dps = REFINE_DPS
    n = H.shape[0]
    identity = ctx.eye(n)
    H0 = ctx.matrix(H.tolist())
    root = ctx.matrix(S.tolist())
    A = H0 + root * root.H * ctx.mpf(lam)

    try:
        shifted = A - identity * ctx.mpf(energy)
        x = ctx.matrix(u.tolist())
        for _ in range(2):
            x = ctx.lu_solve(shifted, x)
            x = x * (ctx.one / ctx.norm(x))
        E = ctx.re(_mp_inner(ctx, x, A * x))

        w = root.H * x
        Gw = root.H * ctx.lu_solve(H0 - identity * E, root * w)
    except ZeroDivisionError as e:
        raise NumericalFailure("Extended precision refinement at E = {0} failed: {1}".format(energy, e))
    residual = Gw + w * (ctx.one / ctx.mpf(lam))
    return float(ctx.norm(residual) / ctx.norm(w))


def bs_correspondence(H_lam, H0, V, lam):
    """
    Check the eigenvector correspondence of ``H_lambda = H_0 + lambda V`` with the
    Birman-Schwinger block ``G(E)``. Eigenvalues within ``1e-6`` of ``sigma(H_0)`` are skipped;
    eigenpairs with ``sqrt(V) u = 0`` are listed as ``vanishing``.

    The residual is amplified by ``1 / (lambda dist(E, sigma(H_0)))``, so small couplings next
    to the unperturbed spectrum exceed double precision. Residuals above ``REFINE_THRESHOLD``
    are recomputed in extended precision.
    """
    if lam == 0:
        raise PreconditionError("The coupling lambda must be non-zero.")
    A = operator_of(H_lam)
    H = operator_of(H0)
    coupling = coupling_of(V)
    if np.abs(A - H - lam * coupling.matrix).max() > 1e-10 * max(np.abs(A).max(), 1.0):
        raise PreconditionError("H_lambda is not H_0 + lambda V.")

    unperturbed = scipy.linalg.eigvalsh(H)
    decomposition = hermitian_eig(A)
    residuals = []
    skipped = []
    vanishing = []
    refined = []
    S = coupling.sqrt_range
    identity = np.eye(H.shape[0])
    for E, u in zip(decomposition.values, decomposition.vectors.T):
        if np.abs(unperturbed - E).min() <= SPECTRUM_DISTANCE:
            skipped.append(float(E))
            continue
        w = S.conj().T @ u
        norm = np.linalg.norm(w)
        if norm <= 1e-12 * np.linalg.norm(u):
            vanishing.append(float(E))
            continue
        # G(E) w applied as one solve; forming G(E) first loses accuracy next to sigma(H_0).
        Gw = S.conj().T @ lu_solve(H - E * identity, S @ w)
        residual = float(np.linalg.norm(Gw + w / lam) / norm)
        if residual > REFINE_THRESHOLD:
            residual = _refined_residual(H, S, lam, float(E), u)
            refined.append(float(E))
        residuals.append((float(E), residual))

    if skipped:
        logger.debug("Skipped %d eigenvalues close to the unperturbed spectrum.", len(skipped))
    if refined:
        logger.debug("Refined %d ill-conditioned eigenpairs in extended precision.", len(refined))
    return CorrespondenceReport(
        residuals=tuple(residuals), skipped=tuple(skipped), vanishing=tuple(vanishing), refined=tuple(refined),
    )


@dataclass(frozen=True)
class ThresholdScan:
    """
    Simplicity of ``G(i t)`` for each tested magnitude ``t``.
    """
    magnitudes: tuple
    simple: tuple
    gaps: tuple

    @property
    def threshold(self):
        """
        Smallest tested magnitude from which on every tested block is simple, or ``None``.
        """
        found = None
        for magnitude, simple in zip(reversed(self.magnitudes), reversed(self.simple)):
            if not simple:
                break
            found = magnitude
        return found

    @property
    def first_simple(self):
        return next((m for m, s in zip(self.magnitudes, self.simple) if s), None)

    @property
    def persistent(self):
        """
        Whether simplicity, once reached, holds at every larger tested magnitude.
        """
        return self.first_simple is not None and self.first_simple == self.threshold


def simplicity_threshold_scan(H0, V, magnitudes, gap_tol=1e-8):
    """
    Scan ``z = i t`` over increasing ``magnitudes`` and record where ``G(z)`` becomes simple.
    """
    magnitudes = sorted(float(m) for m in magnitudes)
    simple = []
    gaps = []
    for magnitude in magnitudes:
        report = bs_block(H0, V, 1j * magnitude).is_simple(gap_tol)
        simple.append(report.simple)
        gaps.append(report.relative_gap)
    return ThresholdScan(magnitudes=tuple(magnitudes), simple=tuple(simple), gaps=tuple(gaps))


@dataclass(frozen=True)
class NeumannRemainder:
    remainder: float
    bound: float


def neumann_remainder(H, z, m):
    """
    Norm of ``(H - z)^-1 + (1/z) sum_{n=0}^m (H/z)^n`` together with its geometric bound
    ``(|H|/|z|)^(m+1) / (|z| - |H|)``. The bound is asserted.
    """
    H = operator_of(H)
    norm = operator_norm(H)
    if abs(z) <= norm:
        raise DomainError("The Neumann series needs |z| > |H| = {0:.6g}.".format(norm))

    n = H.shape[0]
    partial = np.zeros((n, n), dtype=complex)
    power = np.eye(n, dtype=complex)
    for _ in range(m + 1):
        partial += power
        power = power @ H / z
    remainder = operator_norm(resolvent(H, z) + partial / z)
    bound = (norm / abs(z)) ** (m + 1) / (abs(z) - norm)
    if remainder > bound * (1.0 + 1e-9) + 1e-14:
        raise NumericalFailure("Neumann remainder {0:.3g} exceeds its bound {1:.3g}.".format(remainder, bound))
    return NeumannRemainder(remainder=remainder, bound=bound)
