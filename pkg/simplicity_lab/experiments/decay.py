"""
Exponential off-diagonal decay of the resolvent away from the spectrum.
"""
from dataclasses import dataclass
import logging

import numpy as np
from scipy import stats

from simplicity_lab.exceptions import DomainError, NumericalFailure, PreconditionError
from simplicity_lab.lattice import TileGeometry
from simplicity_lab.linalg import lu_solve

__all__ = (
    'DecayFit', 'combes_thomas_fit',
)

logger = logging.getLogger(__name__)

#: Annulus norms below this are treated as underflow and left out of the fit.
UNDERFLOW = 1e-15


@dataclass(frozen=True)
class DecayFit:
    """
    Annulus norms ``|chi_{C_0} (H - z)^-1 chi_{far(L)}|`` with the log-linear fit
    ``log norm = slope L + intercept``, i.e. ``norm ~ C^2 exp(-eta L)``.
    ``underflow`` lists the requested distances left out of the fit; ``underflow_from`` is the first
    integer distance up to the largest requested one whose norm is below ``UNDERFLOW``.
    """
    z: complex
    distances: tuple
    norms: tuple
    slope: float
    intercept: float
    r_squared: float
    underflow: tuple = ()
    underflow_from: int = None

    @property
    def eta(self):
        return -self.slope

    @property
    def monotone(self):
        return all(b <= a + 1e-12 for a, b in zip(self.norms, self.norms[1:]))

    @property
    def passed(self):
        return self.slope < 0 and self.r_squared >= 0.99


def combes_thomas_fit(H, z, L_list, centre=None):
    """
    Measure the resolvent block between the centre tile and each shell of tiles at l-infinity tile
    distance ``L`` and fit its exponential decay. Discrete and Model A operators use single-site tiles.
    """
    z = complex(z)
    if abs(z.imag) < 1.0:
        raise PreconditionError("The decay fit is used with |Im z| >= 1.")
    L_list = [int(L) for L in L_list]
    if len(L_list) < 4 or any(b <= a for a, b in zip(L_list, L_list[1:])) or L_list[0] < 1:
        raise DomainError("L_list needs at least four strictly increasing positive distances.")

    geom = H.geometry if H.geometry is not None else TileGeometry((1,) * H.box.dim)
    centre = tuple(centre) if centre is not None else (0,) * H.box.dim
    rows = H.site_indices(geom.sites_in([centre], H.box))
    n = H.dimension
    unit = np.zeros((n, len(rows)), dtype=complex)
    unit[rows, np.arange(len(rows))] = 1.0
    # (H - z)^-1 is complex symmetric, so the columns of the centre give the rows too.
    X = lu_solve(H.matrix - z * np.eye(n), unit)

    distances = []
    norms = []
    underflow = []
    for L in L_list:
        norm = _shell_norm(H, geom, X, L, centre)
        if norm < UNDERFLOW:
            underflow.append(L)
            continue
        distances.append(L)
        norms.append(norm)
    if len(distances) < 2:
        raise NumericalFailure("Fewer than two annulus norms above {0:g} at z = {1}.".format(UNDERFLOW, z))

    # every integer distance, not only the listed ones
    underflow_from = next(
        (L for L in range(L_list[0], L_list[-1] + 1) if _shell_norm(H, geom, X, L, centre) < UNDERFLOW), None,
    )

    fit = stats.linregress(distances, np.log(norms))
    logger.debug("z=%s eta=%.4g r2=%.6f underflow_from=%s", z, -fit.slope, fit.rvalue ** 2, underflow_from)
    return DecayFit(
        z=z,
        distances=tuple(distances),
        norms=tuple(norms),
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue ** 2),
        underflow=tuple(underflow),
        underflow_from=underflow_from,
    )


def _shell_norm(H, geom, X, L, centre):
    shell = H.site_indices(geom.shell(H.box, L, centre))
    if not shell:
        raise DomainError("No sites at tile distance {0} inside the box.".format(L))
    return float(np.linalg.norm(X[shell, :], 2))
