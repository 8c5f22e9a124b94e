"""
The two-site operator ``h_{a,b}``: the block ``chi_{C_0} (h_{a,b} - z)^-1 chi_{C_0}`` in the
symmetry basis, its low-order Neumann coefficients, the splitting of the degenerate
eigenvalue pair and the passage to a random environment.
"""
from dataclasses import dataclass, field
import logging

import numpy as np
from scipy import optimize

from simplicity_lab.exceptions import DomainError, NumericalFailure, PreconditionError
from simplicity_lab.linalg import general_eig, is_simple, lu_solve, operator_norm, resolvent_block
from simplicity_lab.models import build_two_site, sample_omega

__all__ = (
    'SymmetryBasis', 'CaseIIIMatrices', 'SplittingRow', 'SplittingTable', 'EnvironmentRow', 'EnvironmentReport',
    'symmetry_basis', 'case_iii_matrices', 'case_iii_shift', 'rescaled_block',
    'case_iii_splitting', 'case_iii_random_environment',
)

logger = logging.getLogger(__name__)

CENTRE = (0, 0)

# Columns delta_1 .. delta_4 over the sites (0,0), (0,1), (1,0), (1,1).
_DELTA = 0.5 * np.array([
    [1.0, -1.0, -1.0, 1.0],
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
])


@dataclass(frozen=True)
class SymmetryBasis:
    """
    Orthonormal basis of ``l^2(C_0)``, ``C_0 = {0,1}^2``, adapted to the reflections of the square.
    """
    matrix: np.ndarray = field(default_factory=lambda: _DELTA.copy())

    @property
    def columns(self):
        return [self.matrix[:, i] for i in range(4)]

    def arrays(self):
        """
        Each basis vector drawn as a 2x2 picture: rows run over ``j_2 = 1, 0`` (top to bottom),
        columns over ``j_1 = 0, 1``.
        """
        pictures = []
        for vector in self.columns:
            picture = np.zeros((2, 2))
            for position, (j1, j2) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
                picture[1 - j2, j1] = vector[position]
            pictures.append(picture)
        return pictures

    def conjugate(self, block):
        """
        Express a block on ``l^2(C_0)`` (site order) in this basis.
        """
        return self.matrix.T @ block @ self.matrix


def symmetry_basis():
    return SymmetryBasis()


@dataclass(frozen=True)
class CaseIIIMatrices:
    """
    The five compressions to ``C_0`` in the symmetry basis.
    """
    a: float
    b: float
    h0: np.ndarray
    h0_squared: np.ndarray
    h0_cubed: np.ndarray
    h0_v_h0: np.ndarray
    fourth_order: np.ndarray

    def as_dict(self):
        return {
            'chi_h0_chi': self.h0,
            'chi_h0^2_chi': self.h0_squared,
            'chi_h0^3_chi': self.h0_cubed,
            'chi_h0_V_h0_chi': self.h0_v_h0,
            'chi_h0_(h0+V)^2_h0_chi': self.fourth_order,
        }

    @property
    def fourth_order_shift(self):
        return 12.0 + 0.5 * (self.a ** 2 + self.b ** 2)

    @property
    def splitting_block(self):
        """
        Lower right 2x2 block of the fourth-order term after removing its multiple of the identity;
        equals ``diag(a - b, b - a)``.
        """
        return (self.fourth_order - self.fourth_order_shift * np.eye(4))[2:, 2:]


def case_iii_matrices(a, b, radius=4):
    """
    Assemble ``h_0`` and ``V_{a,b}`` on ``[-radius, radius+1]^2`` and return the compressions of
    ``h_0``, ``h_0^2``, ``h_0^3``, ``h_0 V h_0`` and ``h_0 (h_0 + V)^2 h_0`` to ``C_0``.
    Walks of length four from ``C_0`` stay inside the box, so any ``radius >= 4`` gives the same result.
    """
    H = build_two_site(a, b, radius)
    h0 = H.hopping
    V = H.potential
    idx = H.range_indices(CENTRE)
    basis = symmetry_basis()

    X = h0[:, idx]
    h0X = h0 @ X
    Y = (h0 + V) @ X
    return CaseIIIMatrices(
        a=float(a),
        b=float(b),
        h0=basis.conjugate(X[idx, :]),
        h0_squared=basis.conjugate(h0X[idx, :]),
        h0_cubed=basis.conjugate(X.T @ h0X),
        h0_v_h0=basis.conjugate(X.T @ V @ X),
        fourth_order=basis.conjugate(Y.T @ Y),
    )


def case_iii_shift(a, b, z):
    """
    The multiple of the identity removed from the rescaled block up to order ``z^-3``.
    """
    return 2.0 / z + (a + b) / (2.0 * z ** 2) + (12.0 + 0.5 * (a ** 2 + b ** 2)) / z ** 3


def rescaled_block(H, z):
    """
    ``z(-z chi (H - z)^-1 chi - I)`` in the symmetry basis, with the raw block ``chi (H - z)^-1 chi`` (site order).
    """
    idx = H.range_indices(CENTRE)
    G = resolvent_block(H.matrix, z, idx, idx)
    conjugated = symmetry_basis().conjugate(G)
    return z * (-z * conjugated - np.eye(4)), G


def _schur_root(g, start, scale):
    A = g[:2, :2]
    B = g[:2, 2:]
    C = g[2:, :2]
    D = g[2:, 2:]
    identity = np.eye(2)

    def schur_det(x):
        return np.linalg.det(D - x * identity - C @ lu_solve(A - x * identity, B))

    try:
        return complex(optimize.newton(schur_det, start, x1=start + 1e-3 * scale, tol=1e-12 * scale, maxiter=100))
    except (RuntimeError, ZeroDivisionError) as e:
        raise NumericalFailure("Schur determinant iteration failed near {0}: {1}".format(start, e))


@dataclass(frozen=True)
class SplittingRow:
    z: complex
    pair: tuple
    predicted: complex
    gap_ratio: float
    deviation: float
    schur_agreement: float
    truncation_change: float = None

    @property
    def magnitude(self):
        return abs(self.z)


@dataclass(frozen=True)
class SplittingTable:
    """
    The small eigenvalue pair of the shifted rescaled block against ``+-(a - b)/z^3``, sorted by ``|z|``.
    """
    a: float
    b: float
    radius: int
    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, 'rows', tuple(sorted(self.rows, key=lambda row: abs(row.z))))

    @property
    def deviations(self):
        return [row.deviation for row in self.rows]

    @property
    def decreasing(self):
        d = self.deviations
        return all(later < earlier for earlier, later in zip(d, d[1:]))


def case_iii_splitting(a, b, z_list, R=12, check_doubling=True, agreement_tol=1e-6):
    """
    For each ``z`` take the two smallest eigenvalues of ``g(z) - c(z) I`` and compare them with
    ``+-(a - b)/z^3``. Each eigenvalue is confirmed as a root of the Schur determinant
    ``det(D - x - C (A - x)^-1 B)``; with ``check_doubling`` the truncation radius is validated
    against ``2R``.
    """
    if a == b:
        raise PreconditionError("No splitting is predicted for a = b.")
    z_list = [complex(z) for z in z_list]
    if any(abs(z) < 10 for z in z_list):
        raise PreconditionError("The splitting asymptotics are used for |z| >= 10.")

    H = build_two_site(a, b, R)
    H_double = build_two_site(a, b, 2 * R) if check_doubling else None
    rows = []
    for z in z_list:
        g, G = rescaled_block(H, z)
        shifted = g - case_iii_shift(a, b, z) * np.eye(4)
        values = general_eig(shifted).values
        pair = sorted(values[np.argsort(np.abs(values))[:2]], key=lambda v: abs(v - (a - b) / z ** 3))

        predicted = (a - b) / z ** 3
        scale = abs(predicted)
        gap_ratio = abs(pair[0] - pair[1]) / (2.0 * scale)
        agreement = max(abs(_schur_root(shifted, v, scale) - v) for v in pair) / scale
        if agreement > agreement_tol:
            raise NumericalFailure("Eigenvalue and Schur determinant routes differ by {0:.3g} at z = {1}.".format(agreement, z))

        change = None
        if H_double is not None:
            change = float(np.abs(rescaled_block(H_double, z)[1] - G).max())
            if change > 1e-8:
                logger.warning("Truncation radius %d is too small at z = %s (doubling changes the block by %.3g).", R, z, change)

        logger.debug("z=%s pair=%s predicted=%s", z, pair, predicted)
        rows.append(SplittingRow(
            z=z,
            pair=tuple(complex(v) for v in pair),
            predicted=complex(predicted),
            gap_ratio=float(gap_ratio),
            deviation=float(abs(gap_ratio - 1.0)),
            schur_agreement=float(agreement),
            truncation_change=change,
        ))
    return SplittingTable(a=float(a), b=float(b), radius=R, rows=tuple(rows))


@dataclass(frozen=True)
class EnvironmentRow:
    L: int
    perturbation: float
    product_bound: float
    identity_residual: float
    simple: bool
    normalized_discriminant: float


@dataclass(frozen=True)
class EnvironmentReport:
    """
    ``chi_0 (h_{omega,L} - z)^-1 chi_0`` against ``chi_0 (h_{a,b} - z)^-1 chi_0`` as the random
    couplings are pushed beyond tile distance ``L``.
    """
    z: complex
    gap: float
    rows: tuple

    @property
    def stable_from(self):
        """
        Smallest ``L`` whose product bound is below half the gap.
        """
        return next((row.L for row in self.rows if row.product_bound < 0.5 * self.gap), None)

    @property
    def passed(self):
        stable = [row for row in self.rows if row.product_bound < 0.5 * self.gap]
        return bool(stable) and all(row.simple and row.normalized_discriminant > 0 for row in stable)


def case_iii_random_environment(a, b, z, L_list, disorder, R=12, trial=0):
    """
    Put the random couplings of ``disorder`` on every tile at l-infinity tile distance more than ``L``
    from ``C_0`` and compare the compressed resolvent with that of ``h_{a,b}``. The difference is the
    resolvent-identity term ``chi_0 (h_{omega,L} - z)^-1 V_{omega,L} (h_{a,b} - z)^-1 chi_0``.
    """
    if a == b:
        raise PreconditionError("The unperturbed block is degenerate for a = b.")
    if disorder.lo < 0:
        raise PreconditionError("The environment potential must be non-negative.")
    L_list = sorted(int(L) for L in L_list)
    if not L_list or L_list[0] < 1:
        raise DomainError("Environment distances must be at least 1.")

    z = complex(z)
    H = build_two_site(a, b, R)
    idx = H.range_indices(CENTRE)
    n = H.dimension
    unit = np.zeros((n, len(idx)), dtype=complex)
    unit[idx, np.arange(len(idx))] = 1.0

    X_ab = lu_solve(H.matrix - z * np.eye(n), unit)
    G_ab = X_ab[idx, :]
    gap = is_simple(G_ab).min_gap
    sample = sample_omega(disorder, H.labels, trial)

    rows = []
    for L in L_list:
        omega = H.omega.copy()
        for position, label in enumerate(H.labels):
            if max(abs(x) for x in label) > L:
                omega[position] = sample[position]
        H_L = H.with_omega(omega)
        V = np.diagonal(H_L.matrix - H.matrix)
        root = np.sqrt(V)

        X_L = lu_solve(H_L.matrix - z * np.eye(n), unit)
        G_L = X_L[idx, :]
        difference = G_ab - G_L
        identity_term = X_L.T @ (V[:, None] * X_ab)
        report = is_simple(G_L)
        rows.append(EnvironmentRow(
            L=L,
            perturbation=operator_norm(difference),
            product_bound=operator_norm(root[:, None] * X_L) * operator_norm(root[:, None] * X_ab),
            identity_residual=operator_norm(difference - identity_term) / operator_norm(G_ab),
            simple=report.simple,
            normalized_discriminant=(
                report.normalized_discriminant if report.normalized_discriminant is not None else report.gap_discriminant
            ),
        ))
    return EnvironmentReport(z=z, gap=float(gap), rows=tuple(rows))
