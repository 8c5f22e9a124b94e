"""
Reducing subspaces, span conditions and the coupling-constant limit.

Subspaces are passed either as index lists (coordinate subspaces) or as
matrices whose columns span them.
"""
from dataclasses import dataclass, field
import logging

import numpy as np
import scipy.linalg

from simplicity_lab.birman_schwinger.asymptotics import fit_power_law
from simplicity_lab.birman_schwinger.blocks import coupling_of, operator_of
from simplicity_lab.exceptions import DomainError, PreconditionError
from simplicity_lab.lattice import boundary_layer
from simplicity_lab.linalg import cluster_values, hermitian_eig, lu_solve, operator_norm, rank_revealing, resolvent_block, schur_resolvent
from simplicity_lab.models import build_model_b, build_two_tile

__all__ = (
    'ReducingSubspace', 'WeakCyclicityReport', 'SpanCheckResult', 'ConvergenceTable',
    'TransferReport', 'SpanEquivalence', 'IndependenceReport',
    'krylov_reducing', 'weak_cyclicity_check', 'span_condition', 'two_tile_span',
    'coupling_limit', 'eigenprojection_transfer', 'resolvent_span', 'coupling_independence',
)

logger = logging.getLogger(__name__)

#: New Krylov directions must exceed this fraction of the operator norm.
KRYLOV_TOLERANCE = 1e-10


def _orthonormal(M, threshold):
    if M.shape[1] == 0:
        return M
    U, s, _ = scipy.linalg.svd(M, full_matrices=False)
    return U[:, s > threshold]


def _basis(S, n):
    """
    Orthonormal columns spanning ``S`` (index list or matrix) in ``C^n``.
    """
    S = np.asarray(S)
    if S.ndim == 1:
        basis = np.zeros((n, len(S)))
        basis[S.astype(int), np.arange(len(S))] = 1.0
        return basis
    if S.shape[0] != n:
        raise DomainError("Subspace vectors have length {0}, expected {1}.".format(S.shape[0], n))
    return _orthonormal(S, 1e-12 * max(np.abs(S).max(initial=0.0), 1e-300))


@dataclass(frozen=True)
class ReducingSubspace:
    """
    Orthonormal basis of the smallest invariant subspace of a Hermitian operator containing a set of vectors.
    """
    basis: np.ndarray
    operator: np.ndarray = field(repr=False)

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def invariance_residual(self):
        Q = self.basis
        image = self.operator @ Q
        return operator_norm(image - Q @ (Q.conj().T @ image))

    def distance(self, vectors):
        """
        Distance of each column of ``vectors`` to the subspace.
        """
        vectors = np.asarray(vectors)
        vectors = vectors.reshape(len(vectors), -1)
        Q = self.basis
        return np.linalg.norm(vectors - Q @ (Q.conj().T @ vectors), axis=0)


def krylov_reducing(H, M, tol=KRYLOV_TOLERANCE):
    """
    ``span{H^n m : n >= 0, m in M}`` by a block Krylov iteration with full re-orthogonalization;
    the iteration stops when no new direction above ``tol |H|`` appears.
    """
    A = operator_of(H)
    n = A.shape[0]
    M = np.asarray(M)
    M = M.reshape(n, -1)
    threshold = tol * max(operator_norm(A), 1.0)

    Q = _orthonormal(M, tol * max(np.abs(M).max(initial=0.0), 1e-300))
    block = Q
    while block.shape[1] and Q.shape[1] < n:
        W = A @ block
        for _ in range(2):
            W = W - Q @ (Q.conj().T @ W)
        block = _orthonormal(W, threshold)
        Q = np.hstack([Q, block])
    return ReducingSubspace(basis=Q, operator=A)


@dataclass(frozen=True)
class WeakCyclicityReport:
    passed: bool
    distances: np.ndarray
    subspace_dim: int
    dimension: int

    @property
    def deficiency(self):
        """
        Dimension of the orthogonal complement of the reducing subspace.
        """
        return self.dimension - self.subspace_dim


def weak_cyclicity_check(H, V, tol=1e-8):
    """
    Distance of every eigenvector of ``H`` to the reducing subspace generated by ``R(V)``.
    In finite volume every vector is in the pure point subspace, so passing means the
    reducing subspace contains all eigenvectors.
    """
    A = operator_of(H)
    coupling = coupling_of(V)
    subspace = krylov_reducing(A, coupling.basis)
    eigenvectors = hermitian_eig(A).vectors
    distances = subspace.distance(eigenvectors)
    return WeakCyclicityReport(
        passed=bool(np.all(distances < tol)),
        distances=distances,
        subspace_dim=subspace.dim,
        dimension=A.shape[0],
    )


@dataclass(frozen=True)
class SpanCheckResult:
    """
    Rank reached by the stacked blocks ``P_X (H + mu V - z_0)^-1 P_Y`` against ``dim X``.
    """
    target_dim: int
    achieved_rank: int
    mu_values: tuple
    smallest_retained: float = None

    @property
    def passed(self):
        return self.achieved_rank == self.target_dim


def span_condition(H, X, Y, z0, mu_list, V, tol=1e-8):
    """
    Stack the columns of ``P_X (H + mu V - z_0)^-1 P_Y`` over ``mu_list`` (each normalized) and reveal their rank.
    """
    A = operator_of(H)
    n = A.shape[0]
    Xb = _basis(X, n)
    Yb = _basis(Y, n)
    if Xb.shape[1] != Yb.shape[1]:
        raise PreconditionError("span_condition needs dim X = dim Y, got {0} and {1}.".format(Xb.shape[1], Yb.shape[1]))
    z0 = complex(z0)
    if z0.imag <= 0:
        raise PreconditionError("span_condition needs Im z0 > 0.")
    V = coupling_of(V).matrix
    mu_values = tuple(float(mu) for mu in mu_list)
    k = Xb.shape[1]
    if not mu_values:
        return SpanCheckResult(target_dim=k, achieved_rank=0, mu_values=())

    columns = []
    for mu in mu_values:
        block = Xb.conj().T @ lu_solve(A + mu * V - z0 * np.eye(n), Yb.astype(complex))
        norms = np.linalg.norm(block, axis=0)
        columns.append(block / np.where(norms > 0, norms, 1.0))
    rank, magnitudes = rank_revealing(np.hstack(columns), tol)
    smallest = float(magnitudes[rank - 1]) if rank else None
    return SpanCheckResult(target_dim=k, achieved_rank=min(rank, k), mu_values=mu_values, smallest_retained=smallest)


def two_tile_span(geom, m, m_prime, f, z0, mu_list=None, seed=0, tol=1e-8):
    """
    Rank of ``chi_C (h_0^{(C,C')} + mu f_C - z_0)^-1 chi_{C'}`` stacked over ``mu``.

    Without ``mu_list``, ``|C|`` values are drawn uniformly from ``[1, 2]``; a rank failure
    triggers one fresh draw before it is reported.
    """
    H = build_two_tile(geom, m, m_prime, 0.0, f)
    X = H.range_indices(m)
    Y = H.range_indices(m_prime)
    V = H.coupling(m)
    if mu_list is not None:
        return span_condition(H, X, Y, z0, mu_list, V, tol)

    rng = np.random.default_rng(seed)
    result = span_condition(H, X, Y, z0, rng.uniform(1.0, 2.0, size=len(X)), V, tol)
    if not result.passed:
        logger.warning("Two-tile span reached rank %d of %d, resampling once.", result.achieved_rank, result.target_dim)
        result = span_condition(H, X, Y, z0, rng.uniform(1.0, 2.0, size=len(X)), V, tol)
    return result


@dataclass(frozen=True)
class ConvergenceTable:
    """
    Deviation from the two-tile limit for each coupling on the boundary layer.
    """
    lambdas: tuple
    deviations: tuple
    tol: float = 1e-4

    @property
    def slope(self):
        return fit_power_law(self.lambdas, self.deviations)[0]

    @property
    def monotone(self):
        return all(b < a for a, b in zip(self.deviations, self.deviations[1:]))

    @property
    def converged(self):
        return bool(self.deviations) and self.deviations[-1] < self.tol


def coupling_limit(geom, box, m, m_prime, mu, lambda_list, omega, z0, f=None, tol=1e-4):
    """
    Put ``mu`` on ``C = C_m``, ``0`` on ``C' = C_m'``, ``lambda`` on the layer of tiles around both
    and ``omega`` elsewhere; compare ``chi_C (H - z_0)^-1 chi_C'`` with the two-tile resolvent block.
    The block is taken from the Schur complement over the complement of the layer.
    """
    lambdas = [float(x) for x in lambda_list]
    if not lambdas or lambdas[0] <= 0 or any(b <= a for a, b in zip(lambdas, lambdas[1:])):
        raise PreconditionError("lambda_list must be increasing and positive.")
    m = tuple(m)
    m_prime = tuple(m_prime)
    f = np.ones(geom.tile_size) if f is None else f
    layer = boundary_layer(geom, box, [m, m_prime])
    tiles = geom.tiles_in_box(box)
    base = dict(omega) if isinstance(omega, dict) else dict(zip(tiles, np.asarray(omega, dtype=float)))

    limit_operator = build_two_tile(geom, m, m_prime, mu, f)
    limit = resolvent_block(
        limit_operator.matrix, z0, limit_operator.range_indices(m), limit_operator.range_indices(m_prime),
    )

    deviations = []
    for lam in lambdas:
        couplings = dict(base)
        couplings.update((tile, lam) for tile in layer.layer)
        couplings[m] = float(mu)
        couplings[m_prime] = 0.0
        H = build_model_b(box, geom, f, couplings)

        layer_indices = set(i for tile in layer.layer for i in H.range_indices(tile))
        P = [i for i in range(H.dimension) if i not in layer_indices]
        position = dict((index, p) for p, index in enumerate(P))
        inverse = schur_resolvent(H.matrix, z0, P)
        rows = [position[i] for i in H.range_indices(m)]
        cols = [position[i] for i in H.range_indices(m_prime)]
        deviations.append(operator_norm(inverse[np.ix_(rows, cols)] - limit))
        logger.debug("lambda=%g deviation=%.3g", lam, deviations[-1])

    return ConvergenceTable(lambdas=tuple(lambdas), deviations=tuple(deviations), tol=tol)


@dataclass(frozen=True)
class TransferReport:
    residuals: tuple
    skipped: tuple

    @property
    def max_residual(self):
        return max((r for _, r in self.residuals), default=0.0)


def eigenprojection_transfer(H_lam, H_mu, V, lam, mu, Y, tol=1e-10):
    """
    Residual of ``P_e P_Y = -(lambda - mu) P_e V (H_mu - e)^-1 P_Y`` for every eigenvalue ``e``
    of ``H_lambda = H_mu + (lambda - mu) V`` at distance more than ``1e-6`` from ``sigma(H_mu)``.
    Eigenvalues closer than ``tol`` (relative) share one eigenprojection.
    """
    if lam == mu:
        raise PreconditionError("The identity needs lambda != mu.")
    A = operator_of(H_lam)
    B = operator_of(H_mu)
    V = coupling_of(V).matrix
    if np.abs(A - B - (lam - mu) * V).max() > 1e-10 * max(np.abs(A).max(), 1.0):
        raise PreconditionError("H_lambda is not H_mu + (lambda - mu) V.")

    n = A.shape[0]
    Yb = _basis(Y, n)
    P_Y = Yb @ Yb.conj().T
    unperturbed = scipy.linalg.eigvalsh(B)
    decomposition = hermitian_eig(A)

    residuals = []
    skipped = []
    for members in cluster_values(decomposition.values, tol):
        e = float(np.mean(decomposition.values[list(members)]))
        if np.abs(unperturbed - e).min() <= 1e-6:
            skipped.append(e)
            continue
        U = decomposition.vectors[:, list(members)]
        lhs = U @ (U.conj().T @ P_Y)
        # P_e V (H_mu - e)^-1 = U ((H_mu - e)^-1 V U)^*
        Z = lu_solve(B - e * np.eye(n), V @ U)
        rhs = -(lam - mu) * U @ (Z.conj().T @ P_Y)
        residuals.append((e, operator_norm(lhs - rhs)))
    return TransferReport(residuals=tuple(residuals), skipped=tuple(skipped))


@dataclass(frozen=True)
class SpanEquivalence:
    krylov_dim: int
    resolvent_dim: int
    krylov_in_resolvent: float
    resolvent_in_krylov: float

    def equivalent(self, tol=1e-8):
        return (self.krylov_dim == self.resolvent_dim
                and self.krylov_in_resolvent < tol and self.resolvent_in_krylov < tol)


def resolvent_span(H, M, z_list=None, tol=1e-8):
    """
    Compare ``span{(H - z_i)^-1 m}`` with the Krylov space of ``M`` by mutual inclusion.
    The default points sit half a unit above each distinct eigenvalue of ``H``.
    """
    A = operator_of(H)
    n = A.shape[0]
    M = np.asarray(M).reshape(n, -1)
    if z_list is None:
        values = scipy.linalg.eigvalsh(A)
        z_list = [values[c[0]] + 0.5j for c in cluster_values(values, 1e-10)]

    columns = [lu_solve(A - complex(z) * np.eye(n), M.astype(complex)) for z in z_list]
    stacked = np.hstack(columns)
    stacked = stacked / np.maximum(np.linalg.norm(stacked, axis=0), 1e-300)
    U, s, _ = scipy.linalg.svd(stacked, full_matrices=False)
    span = U[:, s > tol * s[0]]

    krylov = krylov_reducing(A, M)
    Q = krylov.basis
    krylov_in_resolvent = float(np.linalg.norm(Q - span @ (span.conj().T @ Q), axis=0).max(initial=0.0))
    resolvent_in_krylov = float(krylov.distance(span).max(initial=0.0))
    return SpanEquivalence(
        krylov_dim=krylov.dim,
        resolvent_dim=span.shape[1],
        krylov_in_resolvent=krylov_in_resolvent,
        resolvent_in_krylov=resolvent_in_krylov,
    )


@dataclass(frozen=True)
class IndependenceReport:
    lambdas: tuple
    dimensions: tuple
    max_distance: float

    def independent(self, tol=1e-8):
        return len(set(self.dimensions)) == 1 and self.max_distance < tol


def coupling_independence(H0, V, lambdas):
    """
    The reducing subspace generated by ``R(V)`` is the same for every ``H_0 + lambda V``.
    """
    A = operator_of(H0)
    coupling = coupling_of(V)
    subspaces = [krylov_reducing(A + lam * coupling.matrix, coupling.basis) for lam in lambdas]
    reference = subspaces[0]
    distance = 0.0
    for subspace in subspaces[1:]:
        distance = max(distance, float(reference.distance(subspace.basis).max(initial=0.0)),
                       float(subspace.distance(reference.basis).max(initial=0.0)))
    return IndependenceReport(
        lambdas=tuple(float(lam) for lam in lambdas),
        dimensions=tuple(s.dim for s in subspaces),
        max_distance=distance,
    )
