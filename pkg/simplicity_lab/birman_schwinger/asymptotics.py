"""
Large-``|z|`` behaviour of Birman-Schwinger blocks and resolvent entries.

Each check sweeps ``z`` and returns a :class:`DeviationTable`; the decay exponent is
fitted on log-log data, the prefactor is reported but never tested.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from simplicity_lab.exceptions import DomainError, PreconditionError
from simplicity_lab.linalg import operator_norm, resolvent_block
from simplicity_lab.models import ModelKind, shortest_path_count
from .blocks import bs_block

__all__ = (
    'DeviationRow', 'DeviationTable', 'fit_power_law',
    'case_i_check', 'case_ii_check', 'model_a_leading_order', 'offdiagonal_leading_order',
)


def fit_power_law(x, y):
    """
    Least squares fit of ``log y = slope log x + intercept``. Returns ``(slope, intercept, r_squared)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        raise DomainError("A power law fit needs at least two points.")
    fit = stats.linregress(np.log(x), np.log(y))
    return float(fit.slope), float(fit.intercept), float(fit.rvalue ** 2)


@dataclass(frozen=True)
class DeviationRow:
    z: complex
    deviation: float
    simple: bool = None
    relative_gap: float = None


@dataclass(frozen=True)
class DeviationTable:
    """
    Deviations from a leading-order prediction, sorted by ``|z|``.
    """
    rows: tuple
    limit: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'rows', tuple(sorted(self.rows, key=lambda row: abs(row.z))))

    @property
    def magnitudes(self):
        return np.array([abs(row.z) for row in self.rows])

    @property
    def deviations(self):
        return np.array([row.deviation for row in self.rows])

    @property
    def slope(self):
        return fit_power_law(self.magnitudes, self.deviations)[0]

    @property
    def constant(self):
        """
        Fitted prefactor ``c`` in ``deviation ~ c |z|^slope``.
        """
        return float(np.exp(fit_power_law(self.magnitudes, self.deviations)[1]))

    def ratios(self):
        """
        Ratios of consecutive deviations; about 2 per doubling of ``|z|`` for an ``O(1/|z|)`` remainder.
        """
        d = self.deviations
        return d[:-1] / d[1:]

    @property
    def threshold(self):
        """
        Smallest tested ``|z|`` from which on every block was simple.
        """
        found = None
        for row in reversed(self.rows):
            if not row.simple:
                break
            found = abs(row.z)
        return found


def _origin_tile(H):
    return (0,) * H.box.dim


def _sweep(H, coupling, z_list, transform, gap_tol):
    rows = []
    for z in z_list:
        z = complex(z)
        block = bs_block(H, coupling, z)
        report = block.is_simple(gap_tol)
        rows.append(DeviationRow(z=z, deviation=transform(block.block, z), simple=report.simple, relative_gap=report.relative_gap))
    return rows


def case_i_check(H, z_list, tile=None, gap_tol=1e-8):
    """
    Model B with a simple profile: ``|-z sqrt(f)(H - z)^-1 sqrt(f) - f| = O(1/|z|)``.
    """
    if H.kind != ModelKind.MODEL_B:
        raise DomainError("case_i_check needs a Model B Hamiltonian.")
    tile = tuple(tile) if tile is not None else _origin_tile(H)
    term = H.term(tile)
    f = np.diagonal(term.profile)
    differences = np.abs(f[:, None] - f[None, :])[np.triu_indices(len(f), 1)]
    if differences.size and differences.min() <= 1e-12 * np.abs(f).max():
        raise PreconditionError("The profile f is not simple on the tile.")

    F = np.diag(f)
    coupling = H.coupling(tile)
    rows = _sweep(H, coupling, z_list, lambda G, z: operator_norm(-z * G - F), gap_tol)
    return DeviationTable(rows=tuple(rows), limit=F)


def case_ii_check(H, z_list, gap_tol=1e-8):
    """
    Strip geometry ``C_0 = {0..L_1-1} x {0} x ...`` with ``f = 1``: the rescaled block
    ``z(-z chi (H - z)^-1 chi - (1 + omega_0/z))`` tends to the Jacobi matrix ``chi h_0 chi``.
    """
    geom = H.geometry
    if H.kind != ModelKind.MODEL_B or geom is None or any(p != 1 for p in geom.period[1:]):
        raise DomainError("case_ii_check needs a strip geometry L = (L_1, 1, ..., 1).")
    tile = _origin_tile(H)
    term = H.term(tile)
    if np.abs(term.profile - np.eye(len(term.indices))).max() > 0:
        raise DomainError("case_ii_check needs the profile f = 1 on C_0.")

    omega0 = float(H.omega[H.labels.index(tile)])
    indices = list(term.indices)
    jacobi = H.hopping[np.ix_(indices, indices)]
    identity = np.eye(len(indices))

    def rescaled(G, z):
        return operator_norm(z * (-z * G - (1.0 + omega0 / z) * identity) - jacobi)

    rows = _sweep(H, H.coupling(tile), z_list, rescaled, gap_tol)
    return DeviationTable(rows=tuple(rows), limit=jacobi)


def model_a_leading_order(H, z_list, site=None, gap_tol=1e-8):
    """
    Model A: ``|-z V_0^(1/2)(H - z)^-1 V_0^(1/2) - W| = O(1/|z|)`` with ``W`` in its eigenbasis.
    """
    if H.kind not in (ModelKind.MODEL_A, ModelKind.DISCRETE):
        raise DomainError("model_a_leading_order needs a Model A Hamiltonian.")
    site = tuple(site) if site is not None else _origin_tile(H)
    coupling = H.coupling(site)
    W = coupling.restricted
    rows = _sweep(H, coupling, z_list, lambda G, z: operator_norm(-z * G - W), gap_tol)
    return DeviationTable(rows=tuple(rows), limit=W)


def offdiagonal_leading_order(H, j, z_list, origin=None):
    """
    Scaled remainders ``|P_j (H - z)^-1 P_0 + C_{j,d} z^-(|j|+1) I| |z|^(|j|+2)``
    between the sites ``origin + j`` and ``origin``; bounded in ``|z|``.
    """
    j = tuple(int(x) for x in j)
    ell = sum(abs(x) for x in j)
    count = shortest_path_count(j)
    origin = tuple(origin) if origin is not None else _origin_tile(H)
    target = tuple(o + x for o, x in zip(origin, j))
    rows_j = H.site_indices([target])
    cols_0 = H.site_indices([origin])
    identity = np.eye(H.channels)

    rows = []
    for z in z_list:
        z = complex(z)
        block = resolvent_block(H.matrix, z, rows_j, cols_0)
        scaled = operator_norm(block + count * z ** -(ell + 1) * identity) * abs(z) ** (ell + 2)
        rows.append(DeviationRow(z=z, deviation=scaled))
    return DeviationTable(rows=tuple(rows))
