"""
Path counting and the exact low-order structure of Neumann powers.
"""
import itertools

import numpy as np

from simplicity_lab.exceptions import DomainError

__all__ = (
    'shortest_path_count', 'hopping_power_block', 'covering_defect',
)


def shortest_path_count(j):
    """
    Number ``C_{j,d}`` of shortest lattice paths from the origin to ``j``,
    by dynamic programming over the monotone grid ``[0,|j_1|] x ... x [0,|j_d|]``.
    """
    j = tuple(abs(int(x)) for x in np.atleast_1d(j))
    if not any(j):
        raise DomainError("Shortest paths are counted to a non-zero site.")

    counts = {}
    for point in itertools.product(*(range(x + 1) for x in j)):
        if not any(point):
            counts[point] = 1
            continue
        total = 0
        for axis, x in enumerate(point):
            if x:
                total += counts[point[:axis] + (x - 1,) + point[axis + 1:]]
        counts[point] = total
    return counts[j]


def hopping_power_block(H, j, ell, origin=None):
    """
    The block ``P_j H^ell P_0`` between the site ``origin + j`` and ``origin``,
    computed by explicit matrix powers (all channels of each site).
    """
    if ell < 0:
        raise DomainError("Power must be non-negative, got {0}.".format(ell))
    origin = tuple(origin) if origin is not None else (0,) * H.box.dim
    target = tuple(o + x for o, x in zip(origin, j))
    cols = H.site_indices([origin])
    rows = H.site_indices([target])

    X = np.eye(H.dimension)[:, cols]
    for _ in range(ell):
        X = H.matrix @ X
    return X[rows, :]


def covering_defect(H):
    """
    ``max |sum_j P_j - I|`` over the positions of the box, where ``P_j`` projects
    onto the positions touched by the ``j``-th coupling.
    """
    cover = np.zeros(H.dimension)
    for term in H.terms:
        cover[list(term.indices)] += 1.0
    return float(np.abs(cover - 1.0).max())
