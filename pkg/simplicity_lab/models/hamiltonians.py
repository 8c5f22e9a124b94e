"""
Finite-volume Hamiltonians ``h_0 + sum_n omega_n V_n`` of the discrete Anderson model,
the matrix-valued model (Model A), the tiled model (Model B) and the two-site operator.
"""
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
import scipy.linalg

from simplicity_lab.exceptions import DomainError
from simplicity_lab.lattice import LatticeBox, TileGeometry

__all__ = (
    'ModelKind', 'SiteTerm', 'Coupling', 'Hamiltonian',
    'hopping_matrix', 'validate_coupling_matrix', 'validate_profile',
    'build_discrete_anderson', 'build_model_a', 'build_model_b',
    'build_two_site', 'build_two_tile', 'two_site_box',
)


class ModelKind:
    DISCRETE = 'discrete'
    MODEL_A = 'model_a'
    MODEL_B = 'model_b'
    TWO_SITE = 'two_site'
    TWO_TILE = 'two_tile'

    choices = (
        (DISCRETE, 'Discrete Anderson model'),
        (MODEL_A, 'Matrix-valued Anderson model'),
        (MODEL_B, 'Tiled single-site potential'),
        (TWO_SITE, 'Two occupied tiles next to C0'),
    )


def hopping_matrix(box, channels=1):
    """
    The discrete Laplacian (adjacency of nearest neighbors) restricted to the box,
    acting componentwise on ``channels`` components.
    """
    n = box.size
    h = np.zeros((n, n))
    coordinates = box.coordinates
    strides = np.cumprod((1,) + box.shape[:0:-1])[::-1]
    for axis in range(box.dim):
        i = np.nonzero(coordinates[:, axis] < box.upper[axis])[0]
        j = i + strides[axis]
        h[i, j] = 1.0
        h[j, i] = 1.0
    if channels > 1:
        h = np.kron(h, np.eye(channels))
    return h


def validate_coupling_matrix(W):
    """
    Check ``W`` is real symmetric positive definite; return it symmetrized with its eigendecomposition.
    """
    W = np.atleast_2d(np.asarray(W, dtype=float))
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise DomainError("W must be a square matrix, got shape {0}.".format(W.shape))
    if np.abs(W - W.T).max() > 1e-12 * max(np.abs(W).max(), 1.0):
        raise DomainError("W must be symmetric.")
    W = 0.5 * (W + W.T)
    values, vectors = scipy.linalg.eigh(W)
    if values[0] <= 0:
        raise DomainError("W is not positive definite, smallest eigenvalue is {0:.6g}.".format(values[0]))
    return W, values, vectors


def validate_profile(f, geom):
    """
    Return the single-site profile as an array of shape ``geom.period``; every value must be positive.
    """
    f = np.asarray(f, dtype=float)
    if f.size != geom.tile_size:
        raise DomainError("Profile needs {0} values (one per site of C0), got {1}.".format(geom.tile_size, f.size))
    f = f.reshape(geom.period)
    if np.any(f <= 0):
        raise DomainError("Profile f must be strictly positive on C0.")
    return f


@dataclass(frozen=True, eq=False)
class SiteTerm:
    """
    One random coupling: the label it belongs to (a site or a tile index),
    the positions it acts on and its positive semidefinite profile there.
    """
    label: tuple
    indices: tuple
    profile: np.ndarray


@dataclass(frozen=True, eq=False)
class Coupling:
    """
    A non-negative potential ``V`` with ``sqrt(V)`` and an orthonormal basis of its range.
    When ``V`` is invertible on the coordinates it touches, the basis is the canonical one of those coordinates.
    """
    matrix: np.ndarray
    sqrt: np.ndarray
    basis: np.ndarray

    @classmethod
    def from_block(cls, dimension, indices, block):
        indices = list(indices)
        block = np.atleast_2d(np.asarray(block, dtype=float))
        V = np.zeros((dimension, dimension))
        V[np.ix_(indices, indices)] = block
        return cls.from_matrix(V)

    @classmethod
    def from_matrix(cls, V):
        V = np.asarray(V)
        if V.ndim != 2 or V.shape[0] != V.shape[1]:
            raise DomainError("Potential must be a square matrix.")
        n = V.shape[0]
        scale = np.abs(V).max(initial=0.0)
        if scale == 0.0:
            return cls(matrix=V, sqrt=np.zeros_like(V), basis=np.zeros((n, 0)))
        if np.abs(V - V.conj().T).max() > 1e-12 * scale:
            raise DomainError("Potential must be Hermitian.")

        values, vectors = scipy.linalg.eigh(V)
        if values[0] < -1e-12 * scale:
            raise DomainError("Potential must be non-negative, smallest eigenvalue is {0:.6g}.".format(values[0]))
        root = (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T
        if np.abs(root @ root - V).max() > 1e-12 * max(scale, 1.0):
            raise DomainError("Could not take the square root of the potential accurately.")

        support = np.nonzero(np.abs(V).max(axis=1) > 0)[0]
        restricted = scipy.linalg.eigvalsh(V[np.ix_(support, support)])
        if restricted[0] > 1e-12 * scale:
            basis = np.zeros((n, len(support)))
            basis[support, np.arange(len(support))] = 1.0
        else:
            basis = vectors[:, values > 1e-12 * scale]
        return cls(matrix=V, sqrt=root, basis=basis)

    @property
    def rank(self):
        return self.basis.shape[1]

    @cached_property
    def sqrt_range(self):
        """
        ``sqrt(V)`` restricted to the range of ``V``, as an ``N x rank`` matrix.
        """
        return self.sqrt @ self.basis

    @cached_property
    def restricted(self):
        """
        ``V`` compressed to its range.
        """
        return self.basis.conj().T @ self.matrix @ self.basis


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """
    A finite-volume Hamiltonian ``hopping + sum(omega_i * V_i)``.

    The matrix is assembled once and is exactly symmetric. ``terms[i]`` carries the
    profile of ``V_i`` and ``omega[i]`` its coupling.
    """
    kind: str
    box: LatticeBox
    hopping: np.ndarray = field(repr=False)
    terms: tuple = field(repr=False)
    omega: np.ndarray = field(repr=False)
    channels: int = 1
    geometry: TileGeometry = None
    W: np.ndarray = field(default=None, repr=False)
    W_eigenvalues: np.ndarray = field(default=None, repr=False)
    W_eigenvectors: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        if omega.shape != (len(self.terms),):
            raise DomainError("Expected {0} couplings, got {1}.".format(len(self.terms), omega.size))
        object.__setattr__(self, 'omega', omega)

        matrix = self.hopping.copy()
        for term, value in zip(self.terms, omega):
            if value:
                matrix[np.ix_(term.indices, term.indices)] += value * term.profile
        object.__setattr__(self, 'matrix', 0.5 * (matrix + matrix.T))

    @property
    def dimension(self):
        return self.matrix.shape[0]

    @property
    def potential(self):
        return self.matrix - self.hopping

    @property
    def labels(self):
        return [term.label for term in self.terms]

    @cached_property
    def _label_positions(self):
        return dict((term.label, i) for i, term in enumerate(self.terms))

    def term(self, label):
        try:
            return self.terms[self._label_positions[tuple(label)]]
        except KeyError:
            raise DomainError("No coupling with label {0}.".format(tuple(label)))

    def coupling(self, label):
        """
        The single-site potential ``V_label`` as a :class:`Coupling`.
        """
        term = self.term(label)
        return Coupling.from_block(self.dimension, term.indices, term.profile)

    def range_indices(self, label):
        return list(self.term(label).indices)

    def site_indices(self, sites):
        """
        Positions of all channels of the given sites.
        """
        k = self.channels
        return [self.box.index(site) * k + c for site in sites for c in range(k)]

    def with_omega(self, omega):
        return replace(self, omega=np.asarray(omega, dtype=float))

    def with_coupling(self, label, value):
        """
        The same Hamiltonian with the coupling of one label replaced.
        ``with_coupling(m, 0.0)`` removes the term ``omega_m V_m``.
        """
        self.term(label)
        omega = self.omega.copy()
        omega[self._label_positions[tuple(label)]] = value
        return self.with_omega(omega)


def build_discrete_anderson(box, omega):
    """
    ``h_0 + diag(omega)`` on the box.
    """
    omega = np.asarray(omega, dtype=float).ravel()
    if omega.size != box.size:
        raise DomainError("Expected one coupling per site ({0}), got {1}.".format(box.size, omega.size))
    terms = tuple(SiteTerm(label=site, indices=(i,), profile=np.ones((1, 1))) for i, site in enumerate(box.sites))
    return Hamiltonian(kind=ModelKind.DISCRETE, box=box, hopping=hopping_matrix(box), terms=terms, omega=omega)


def build_model_a(box, W, omega, eigenbasis=True):
    """
    ``h_0 (x) I_k + sum_n omega_n P_n (x) W``.

    With ``eigenbasis`` (the default) the components are those of the eigenvectors of ``W``,
    so every site carries ``diag(w_1 .. w_k)``; the original ``W`` is kept on the result.
    """
    W, values, vectors = validate_coupling_matrix(W)
    omega = np.asarray(omega, dtype=float).ravel()
    if omega.size != box.size:
        raise DomainError("Expected one coupling per site ({0}), got {1}.".format(box.size, omega.size))

    k = W.shape[0]
    block = np.diag(values) if eigenbasis else W
    terms = tuple(
        SiteTerm(label=site, indices=tuple(range(i * k, (i + 1) * k)), profile=block)
        for i, site in enumerate(box.sites)
    )
    return Hamiltonian(
        kind=ModelKind.MODEL_A, box=box, hopping=hopping_matrix(box, k), terms=terms, omega=omega,
        channels=k, W=W, W_eigenvalues=values, W_eigenvectors=vectors,
    )


def _tile_terms(box, geom, f):
    grouped = {}
    for i, site in enumerate(box.sites):
        grouped.setdefault(geom.tile_of(site), []).append((i, f[geom.local(site)]))
    return tuple(
        SiteTerm(label=m, indices=tuple(i for i, _ in grouped[m]), profile=np.diag([v for _, v in grouped[m]]))
        for m in geom.tiles_in_box(box)
    )


def _tile_omega(tiles, omega):
    if isinstance(omega, dict):
        return np.array([float(omega.get(m, 0.0)) for m in tiles])
    omega = np.asarray(omega, dtype=float).ravel()
    if omega.size != len(tiles):
        raise DomainError("Expected one coupling per tile ({0}), got {1}.".format(len(tiles), omega.size))
    return omega


def build_model_b(box, geom, f, omega):
    """
    ``h_0 + sum_m omega_m f(. - mL)``. ``omega`` is a sequence over ``geom.tiles_in_box(box)``
    or a dict keyed by tile index (missing tiles get 0).
    """
    if box.dim != geom.dim:
        raise DomainError("Box dimension {0} does not match tile dimension {1}.".format(box.dim, geom.dim))
    f = validate_profile(f, geom)
    terms = _tile_terms(box, geom, f)
    omega = _tile_omega([t.label for t in terms], omega)
    return Hamiltonian(kind=ModelKind.MODEL_B, box=box, hopping=hopping_matrix(box), terms=terms, omega=omega, geometry=geom)


#: Tiles of the two-site operator: ``a`` above ``C_0``, ``b`` to its left.
TWO_SITE_A_TILE = (0, 1)
TWO_SITE_B_TILE = (-1, 0)


def two_site_box(R):
    return LatticeBox((-R, -R), (R + 1, R + 1))


def build_two_site(a, b, R=12):
    """
    ``h_{a,b} = h_0 + V_{a,b}`` on ``[-R, R+1]^2`` with ``C_0 = {0,1}^2``:
    ``a`` on the tile above ``C_0`` and ``b`` on the tile to its left.
    Every other tile carries a zero coupling, so random environments are one :meth:`~Hamiltonian.with_omega` away.
    """
    if R < 4:
        raise DomainError("Truncation radius must be at least 4, got {0}.".format(R))
    geom = TileGeometry((2, 2))
    box = two_site_box(R)
    omega = {TWO_SITE_A_TILE: float(a), TWO_SITE_B_TILE: float(b)}
    H = build_model_b(box, geom, np.ones(4), omega)
    return replace(H, kind=ModelKind.TWO_SITE)


def build_two_tile(geom, m, m_prime, mu, f):
    """
    ``h_0^{(C,C')} + mu f_C`` on the union of the neighboring tiles ``C = C_m`` and ``C' = C_m'``.
    """
    m = tuple(m)
    m_prime = tuple(m_prime)
    if not geom.are_neighbors(m, m_prime):
        raise DomainError("Tiles {0} and {1} are not neighbors.".format(m, m_prime))

    first = geom.tile_box(m)
    second = geom.tile_box(m_prime)
    box = LatticeBox(
        tuple(min(x, y) for x, y in zip(first.lower, second.lower)),
        tuple(max(x, y) for x, y in zip(first.upper, second.upper)),
    )
    H = build_model_b(box, geom, f, {m: float(mu), m_prime: 0.0})
    return replace(H, kind=ModelKind.TWO_TILE)
