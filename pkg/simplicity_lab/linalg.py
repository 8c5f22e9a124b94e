"""
Dense real/complex matrix kernels.

Everything here is a thin, checked layer over LAPACK (through :mod:`scipy.linalg`):
linear solves with an explicit pivot threshold, eigendecompositions, the
characteristic polynomial, the Sylvester matrix and discriminant of a matrix,
rank revelation and Schur complements.
"""
from dataclasses import dataclass, field
import warnings

import numpy as np
import scipy.linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import pdist

from simplicity_lab.exceptions import DomainError, NumericalFailure, SingularMatrix

__all__ = (
    'PolyCoeffs', 'EigenDecomposition', 'GeneralEigenvalues', 'SimplicityReport',
    'as_matrix', 'is_hermitian', 'operator_norm',
    'lu_solve', 'resolvent', 'resolvent_block',
    'hermitian_eig', 'general_eig', 'cluster_values',
    'char_poly', 'sylvester_matrix', 'discriminant', 'discriminant_from_eigenvalues',
    'is_simple', 'column_rank', 'rank_revealing',
    'schur_resolvent', 'resolvent_identity_residual',
)

#: Relative pivot magnitude below which a matrix counts as singular.
PIVOT_TOLERANCE = 1e-14

#: Relative tolerance of the Hermitian test.
HERMITIAN_TOLERANCE = 1e-12

#: Residual contract of :func:`lu_solve`.
SOLVE_RESIDUAL = 1e-10

#: Largest size accepted by :func:`char_poly`.
CHAR_POLY_MAX_SIZE = 32

#: Largest size for which :func:`is_simple` also evaluates the Sylvester discriminant.
DISCRIMINANT_CROSS_CHECK_SIZE = 12

#: Largest size for which :func:`general_eig` isolates roots of the characteristic polynomial.
CHAR_POLY_ROOTS_MAX_SIZE = 8


def as_matrix(A, name='A'):
    """
    Return ``A`` as a 2D numpy array, checking it is square.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise DomainError("{0} must be a non-empty square matrix, got shape {1}.".format(name, A.shape))
    return A


def is_hermitian(A, rtol=HERMITIAN_TOLERANCE):
    A = np.asarray(A)
    scale = max(np.abs(A).max(initial=0.0), 1.0)
    return bool(np.abs(A - A.conj().T).max(initial=0.0) <= rtol * scale)


def operator_norm(A):
    """
    Spectral norm; zero for empty blocks.
    """
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def lu_solve(A, B, pivot_tol=PIVOT_TOLERANCE):
    """
    Solve ``A X = B`` by LU with partial pivoting.

    Raises :class:`~simplicity_lab.exceptions.SingularMatrix` when a pivot is at or below
    ``pivot_tol * max|A|``, and :class:`~simplicity_lab.exceptions.NumericalFailure` when the
    residual ``|AX - B| <= 1e-10 |A| |X|`` is not met.
    """
    A = as_matrix(A)
    B = np.asarray(B)
    if B.shape[0] != A.shape[0]:
        raise DomainError("Right hand side has {0} rows, expected {1}.".format(B.shape[0], A.shape[0]))

    scale = np.abs(A).max()
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=True)

    pivot = float(np.abs(np.diagonal(lu)).min())
    if scale == 0.0 or pivot <= pivot_tol * scale:
        raise SingularMatrix("Matrix is singular to working precision (pivot {0:.3g}).".format(pivot), pivot=pivot)

    X = scipy.linalg.lu_solve((lu, piv), B)
    residual = np.abs(A @ X - B).max(initial=0.0)
    bound = SOLVE_RESIDUAL * scale * max(np.abs(X).max(initial=0.0), 1e-300) * A.shape[0]
    if residual > bound:
        raise NumericalFailure("Solve residual {0:.3g} exceeds {1:.3g}.".format(residual, bound))
    return X


def resolvent(H, z):
    """
    The full resolvent ``(H - z)^-1``.
    """
    H = as_matrix(H, 'H')
    n = H.shape[0]
    return lu_solve(H - z * np.eye(n), np.eye(n, dtype=complex))


def resolvent_block(H, z, rows, cols):
    """
    The block ``P_rows (H - z)^-1 P_cols``, solving only for the requested columns.
    """
    H = as_matrix(H, 'H')
    n = H.shape[0]
    rhs = np.zeros((n, len(cols)), dtype=complex)
    rhs[list(cols), np.arange(len(cols))] = 1.0
    X = lu_solve(H - z * np.eye(n), rhs)
    return X[list(rows), :]


@dataclass(frozen=True)
class EigenDecomposition:
    """
    Eigenvalues sorted ascending with orthonormal eigenvectors as columns.
    """
    values: np.ndarray
    vectors: np.ndarray

    def __len__(self):
        return len(self.values)


def hermitian_eig(H):
    """
    Eigendecomposition of a Hermitian matrix.
    """
    H = as_matrix(H, 'H')
    if not is_hermitian(H):
        raise DomainError("Matrix is not Hermitian.")
    try:
        values, vectors = scipy.linalg.eigh(H, check_finite=True)
    except np.linalg.LinAlgError as e:
        raise NumericalFailure("Hermitian eigensolver did not converge: {0}".format(e))
    return EigenDecomposition(values=values, vectors=vectors)


def _sort_complex(values):
    values = np.asarray(values, dtype=complex)
    order = np.lexsort((values.imag, values.real))
    return values[order]


def cluster_values(values, tol):
    """
    Group values by single linkage: two values share a cluster when they are
    linked by a chain of steps shorter than ``tol * (diameter + 1)``.

    Returns a tuple of index tuples, ordered by their first member.
    """
    values = np.asarray(values)
    k = len(values)
    if k == 0:
        return ()
    if k == 1:
        return ((0,),)

    points = np.column_stack([values.real, values.imag]) if np.iscomplexobj(values) else values.reshape(-1, 1)
    distances = pdist(points)
    threshold = tol * (distances.max() + 1.0)

    rows, cols = np.triu_indices(k, 1)
    linked = distances < threshold
    graph = csr_matrix((np.ones(linked.sum()), (rows[linked], cols[linked])), shape=(k, k))
    _, labels = connected_components(graph, directed=False)

    clusters = {}
    for index, label in enumerate(labels):
        clusters.setdefault(label, []).append(index)
    return tuple(sorted(tuple(members) for members in clusters.values()))


@dataclass(frozen=True)
class GeneralEigenvalues:
    """
    Eigenvalues of a general matrix, sorted by real then imaginary part, with multiplicity clusters.
    """
    values: np.ndarray
    clusters: tuple

    @property
    def multiplicities(self):
        return [len(c) for c in self.clusters]


def _polish_root(A, root, steps=3):
    # Newton on det(A - x): the step is 1/tr((A - x)^-1).
    n = A.shape[0]
    for _ in range(steps):
        try:
            inverse = lu_solve(A - root * np.eye(n), np.eye(n, dtype=complex))
        except (SingularMatrix, NumericalFailure):
            break
        trace = np.trace(inverse)
        if trace == 0:
            break
        step = 1.0 / trace
        root = root + step
        if abs(step) <= 1e-15 * max(abs(root), 1.0):
            break
    return root


def general_eig(A, tol=1e-8, method='auto'):
    """
    All eigenvalues of a general square matrix, with multiplicity clusters.

    ``method='auto'`` isolates the roots of the characteristic polynomial for sizes up to 8
    (each root polished by Newton steps on the determinant), and uses the Hessenberg-QR
    iteration otherwise. ``'charpoly'`` and ``'qr'`` force either route.
    """
    A = as_matrix(A).astype(complex)
    k = A.shape[0]
    if method == 'auto':
        method = 'charpoly' if k <= CHAR_POLY_ROOTS_MAX_SIZE else 'qr'

    if method == 'charpoly':
        if k > CHAR_POLY_ROOTS_MAX_SIZE:
            raise DomainError("Characteristic polynomial roots are only used up to size {0}.".format(CHAR_POLY_ROOTS_MAX_SIZE))
        roots = np.roots(char_poly(A).coefficients[::-1])
        values = []
        for members in cluster_values(roots, tol):
            if len(members) == 1:
                values.append(_polish_root(A, roots[members[0]]))
            else:
                # Newton would pull clustered roots together.
                values.extend(roots[list(members)])
        values = np.array(values, dtype=complex)
    elif method == 'qr':
        try:
            values = scipy.linalg.eigvals(A, check_finite=True)
        except np.linalg.LinAlgError as e:
            raise NumericalFailure("QR iteration did not converge: {0}".format(e))
    else:
        raise DomainError("Unknown eigenvalue method '{0}'.".format(method))

    if not np.all(np.isfinite(values)):
        raise NumericalFailure("Eigenvalue computation produced non-finite values.")

    values = _sort_complex(values)
    return GeneralEigenvalues(values=values, clusters=cluster_values(values, tol))


@dataclass(frozen=True)
class PolyCoeffs:
    """
    Monic polynomial ``sum(a_n x^n)`` stored with ascending coefficients ``a_0 .. a_k``.
    """
    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = np.asarray(self.coefficients)
        if coefficients.ndim != 1 or len(coefficients) == 0:
            raise DomainError("Polynomial needs at least one coefficient.")
        if coefficients[-1] != 1:
            raise DomainError("Polynomial must be monic, leading coefficient is {0}.".format(coefficients[-1]))
        object.__setattr__(self, 'coefficients', coefficients)

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, self.coefficients)


def char_poly(A):
    """
    Characteristic polynomial ``det(xI - A)`` by the Faddeev-LeVerrier trace recursion.
    """
    A = as_matrix(A)
    k = A.shape[0]
    if k > CHAR_POLY_MAX_SIZE:
        raise DomainError("char_poly accepts matrices up to size {0}, got {1}.".format(CHAR_POLY_MAX_SIZE, k))

    dtype = np.result_type(A.dtype, float)
    coefficients = np.zeros(k + 1, dtype=dtype)
    coefficients[k] = 1
    identity = np.eye(k, dtype=dtype)
    M = np.zeros((k, k), dtype=dtype)
    for m in range(1, k + 1):
        M = A @ M + coefficients[k - m + 1] * identity
        coefficients[k - m] = -np.trace(A @ M) / m
    return PolyCoeffs(coefficients)


def sylvester_matrix(p):
    """
    The ``(2k-1) x (2k-1)`` Sylvester matrix of ``p`` and ``p'``:
    ``k-1`` shifted rows of ``a_k .. a_0`` followed by ``k`` shifted rows of ``k a_k .. a_1``.
    """
    k = p.degree
    if k < 1:
        raise DomainError("Sylvester matrix needs a polynomial of degree at least 1.")

    descending = p.coefficients[::-1]
    derivative = descending[:-1] * np.arange(k, 0, -1)
    size = 2 * k - 1
    S = np.zeros((size, size), dtype=descending.dtype)
    for row in range(k - 1):
        S[row, row:row + k + 1] = descending
    for row in range(k):
        S[k - 1 + row, row:row + k] = derivative
    return S


def discriminant(A):
    """
    ``F(A) = prod_{i<j} (l_j - l_i)^2`` computed as ``(-1)^(k(k-1)/2) det S(char_poly(A))``.
    A 1x1 matrix has discriminant 1.
    """
    A = as_matrix(A)
    k = A.shape[0]
    if k == 1:
        return complex(1.0)
    S = sylvester_matrix(char_poly(A))
    sign = -1.0 if (k * (k - 1) // 2) % 2 else 1.0
    return complex(sign * scipy.linalg.det(S))


def discriminant_from_eigenvalues(values):
    values = np.asarray(values, dtype=complex)
    rows, cols = np.triu_indices(len(values), 1)
    return complex(np.prod((values[cols] - values[rows]) ** 2))


@dataclass(frozen=True)
class SimplicityReport:
    """
    Outcome of :func:`is_simple`. Truthy when the spectrum is simple.

    ``normalized_discriminant`` is ``|F|^(1/(k(k-1))) / (diameter + 1)`` with ``F`` from the
    Sylvester determinant of the characteristic polynomial; ``None`` above
    ``DISCRIMINANT_CROSS_CHECK_SIZE`` or when ``F`` is not finite. ``gap_discriminant`` is the
    same normalization of the product of the computed eigenvalue gaps.
    """
    simple: bool
    min_gap: float
    diameter: float
    normalized_discriminant: float
    gap_discriminant: float
    values: np.ndarray = field(repr=False)

    def __bool__(self):
        return self.simple

    @property
    def relative_gap(self):
        return self.min_gap / (self.diameter + 1.0)

    def discriminants_agree(self, rtol=1e-6):
        if self.normalized_discriminant is None:
            return None
        scale = max(self.normalized_discriminant, self.gap_discriminant)
        return abs(self.normalized_discriminant - self.gap_discriminant) <= rtol * scale


def _sylvester_normalized(A, diameter):
    k = A.shape[0]
    if k > DISCRIMINANT_CROSS_CHECK_SIZE:
        return None
    with np.errstate(over='ignore', invalid='ignore'):
        F = abs(discriminant(A))
    if not np.isfinite(F):
        return None
    return float(F ** (1.0 / (k * (k - 1)))) / (diameter + 1.0)


def is_simple(A, gap_tol=1e-8):
    """
    Decide simplicity of the spectrum by the minimal pairwise eigenvalue distance,
    relative to ``diameter + 1``. The normalized discriminant of the characteristic
    polynomial is reported alongside as an independent cross-check.
    """
    A = as_matrix(A)
    k = A.shape[0]
    if k > CHAR_POLY_MAX_SIZE:
        raise DomainError("is_simple accepts matrices up to size {0}, got {1}.".format(CHAR_POLY_MAX_SIZE, k))

    if is_hermitian(A):
        values = hermitian_eig(A).values.astype(complex)
    else:
        values = general_eig(A, tol=gap_tol, method='qr').values

    if k == 1:
        return SimplicityReport(
            simple=True, min_gap=np.inf, diameter=0.0, normalized_discriminant=1.0, gap_discriminant=1.0, values=values,
        )

    distances = pdist(np.column_stack([values.real, values.imag]))
    min_gap = float(distances.min())
    diameter = float(distances.max())
    # Geometric mean of the gaps, computed in log space.
    log_gaps = np.log(np.maximum(distances, np.finfo(float).tiny))
    from_gaps = float(np.exp(log_gaps.mean())) / (diameter + 1.0) if min_gap > 0 else 0.0
    return SimplicityReport(
        simple=min_gap > gap_tol * (diameter + 1.0),
        min_gap=min_gap,
        diameter=diameter,
        normalized_discriminant=_sylvester_normalized(A, diameter),
        gap_discriminant=from_gaps,
        values=values,
    )


def rank_revealing(columns, tol=1e-8):
    """
    Rank of the stacked columns by QR with column pivoting.
    Returns ``(rank, magnitudes)`` with ``magnitudes`` the pivoted ``|R_ii|`` relative to the largest column norm.
    """
    M = np.column_stack([np.asarray(c) for c in columns]) if isinstance(columns, (list, tuple)) else np.asarray(columns)
    if M.size == 0:
        raise DomainError("column_rank needs a non-empty set of columns.")
    largest = np.linalg.norm(M, axis=0).max()
    if largest == 0.0:
        return 0, np.zeros(min(M.shape))
    R = scipy.linalg.qr(M, mode='r', pivoting=True)[0]
    magnitudes = np.abs(np.diagonal(R)) / largest
    return int(np.count_nonzero(magnitudes > tol)), magnitudes


def column_rank(columns, tol=1e-8):
    """
    Numerical rank: a column counts when its residual after projection exceeds ``tol`` times the largest column norm.
    """
    return rank_revealing(columns, tol)[0]


def schur_resolvent(M, z, P, rtol=1e-9, verify=True):
    """
    ``P (M - z)^-1 P`` computed as ``(A - B D^-1 C)^-1`` for the block split induced by the index set ``P``.

    With ``verify`` the result is compared with the direct inverse to ``rtol``.
    """
    M = as_matrix(M, 'M')
    n = M.shape[0]
    P = list(P)
    kept = set(P)
    Q = [i for i in range(n) if i not in kept]
    shifted = M - z * np.eye(n)

    A = shifted[np.ix_(P, P)]
    if Q:
        B = shifted[np.ix_(P, Q)]
        C = shifted[np.ix_(Q, P)]
        D = shifted[np.ix_(Q, Q)]
        A = A - B @ lu_solve(D, C)
    result = lu_solve(A, np.eye(len(P), dtype=complex))

    if verify and Q:
        direct = resolvent_block(M, z, P, P)
        deviation = operator_norm(result - direct) / max(operator_norm(direct), 1e-300)
        if deviation > rtol:
            raise NumericalFailure("Schur complement and direct inverse differ by {0:.3g} (relative).".format(deviation))
    return result


def resolvent_identity_residual(H_lam, H_mu, V, lam, mu, z):
    """
    Relative residual of ``(H_l - z)^-1 = (H_m - z)^-1 - (l - m)(H_l - z)^-1 V (H_m - z)^-1``.
    """
    R_lam = resolvent(H_lam, z)
    R_mu = resolvent(H_mu, z)
    rhs = R_mu - (lam - mu) * R_lam @ np.asarray(V) @ R_mu
    return operator_norm(R_lam - rhs) / max(operator_norm(R_lam), 1e-300)
