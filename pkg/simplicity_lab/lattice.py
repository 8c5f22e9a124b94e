"""
Finite lattice geometry: boxes in Z^d, site indexing, neighbors, tiles and boundary layers.

Sites are plain integer tuples. Boxes are inclusive on both ends and
enumerate their sites in row-major order on the coordinates.
"""
from dataclasses import dataclass
from functools import cached_property
import itertools

import numpy as np

from simplicity_lab.exceptions import DomainError

__all__ = (
    'LatticeBox', 'TileGeometry', 'BoundaryLayer',
    'enumerate_sites', 'neighbors', 'tile_of', 'boundary_layer',
)


def _as_site(site):
    if np.isscalar(site):
        return (int(site),)
    return tuple(int(x) for x in site)


@dataclass(frozen=True)
class LatticeBox:
    """
    The box ``[lower_1, upper_1] x ... x [lower_d, upper_d]`` of Z^d.
    """
    lower: tuple
    upper: tuple

    def __post_init__(self):
        lower = _as_site(self.lower)
        upper = _as_site(self.upper)
        if not lower or len(lower) != len(upper):
            raise DomainError("Box corners need the same positive dimension, got {0} and {1}.".format(lower, upper))
        if any(lo > hi for lo, hi in zip(lower, upper)):
            raise DomainError("Box lower corner {0} exceeds upper corner {1}.".format(lower, upper))
        object.__setattr__(self, 'lower', lower)
        object.__setattr__(self, 'upper', upper)

    @classmethod
    def cube(cls, dim, lo, hi):
        """
        The box ``[lo, hi]^dim``.
        """
        return cls((lo,) * dim, (hi,) * dim)

    @property
    def dim(self):
        return len(self.lower)

    @property
    def shape(self):
        return tuple(hi - lo + 1 for lo, hi in zip(self.lower, self.upper))

    @property
    def size(self):
        return int(np.prod(self.shape))

    def __len__(self):
        return self.size

    def __contains__(self, site):
        site = _as_site(site)
        return len(site) == self.dim and all(lo <= x <= hi for x, lo, hi in zip(site, self.lower, self.upper))

    @cached_property
    def sites(self):
        return tuple(itertools.product(*(range(lo, hi + 1) for lo, hi in zip(self.lower, self.upper))))

    @cached_property
    def coordinates(self):
        """
        The sites as an ``(N, d)`` integer array, in index order.
        """
        return np.array(self.sites, dtype=int).reshape(self.size, self.dim)

    def index(self, site):
        """
        Position of a site in the row-major enumeration.
        """
        site = _as_site(site)
        if site not in self:
            raise DomainError("Site {0} is outside the box {1}..{2}.".format(site, self.lower, self.upper))
        offset = tuple(x - lo for x, lo in zip(site, self.lower))
        return int(np.ravel_multi_index(offset, self.shape))

    def site(self, index):
        """
        Inverse of :func:`index`.
        """
        if not 0 <= index < self.size:
            raise DomainError("Index {0} is outside 0..{1}.".format(index, self.size - 1))
        offset = np.unravel_index(int(index), self.shape)
        return tuple(int(o) + lo for o, lo in zip(offset, self.lower))

    def indices(self, sites):
        return [self.index(site) for site in sites]


def enumerate_sites(box):
    """
    List the sites of the box in index order.
    """
    return list(box.sites)


def neighbors(site, box):
    """
    Return the sites of the box at l1-distance 1 from ``site``.
    Hoppings leaving the box are dropped (Dirichlet truncation).
    """
    site = _as_site(site)
    if site not in box:
        raise DomainError("Site {0} is outside the box {1}..{2}.".format(site, box.lower, box.upper))

    found = []
    for axis in range(box.dim):
        for step in (-1, 1):
            other = site[:axis] + (site[axis] + step,) + site[axis + 1:]
            if other in box:
                found.append(other)
    return found


@dataclass(frozen=True)
class TileGeometry:
    """
    The partition of Z^d into the translates ``C_m = C_0 + (m_1 L_1, ..., m_d L_d)``
    of the base tile ``C_0 = {0..L_1-1} x ... x {0..L_d-1}``.
    """
    period: tuple

    def __post_init__(self):
        period = _as_site(self.period)
        if not period or any(p < 1 for p in period):
            raise DomainError("Tile period must be a vector of positive integers, got {0}.".format(period))
        object.__setattr__(self, 'period', period)

    @property
    def dim(self):
        return len(self.period)

    @property
    def tile_size(self):
        return int(np.prod(self.period))

    @cached_property
    def base_tile(self):
        return LatticeBox((0,) * self.dim, tuple(p - 1 for p in self.period))

    def offset(self, m):
        return tuple(mi * p for mi, p in zip(_as_site(m), self.period))

    def tile(self, m):
        """
        The sites of ``C_m`` in row-major order.
        """
        shift = self.offset(m)
        return [tuple(x + s for x, s in zip(site, shift)) for site in self.base_tile.sites]

    def tile_box(self, m):
        shift = self.offset(m)
        return LatticeBox(shift, tuple(s + p - 1 for s, p in zip(shift, self.period)))

    def tile_of(self, site):
        site = _as_site(site)
        return tuple(x // p for x, p in zip(site, self.period))

    def local(self, site):
        """
        Position of the site inside its tile, as a site of ``C_0``.
        """
        site = _as_site(site)
        return tuple(x % p for x, p in zip(site, self.period))

    def are_neighbors(self, m, m_prime):
        """
        Tiles coincide in all but one index, which differs by one.
        """
        diff = [abs(a - b) for a, b in zip(_as_site(m), _as_site(m_prime))]
        return sum(diff) == 1

    def tiles_in_box(self, box):
        """
        All tile indices whose tile intersects the box, sorted.
        """
        if box.dim != self.dim:
            raise DomainError("Box dimension {0} does not match tile dimension {1}.".format(box.dim, self.dim))
        lo = self.tile_of(box.lower)
        hi = self.tile_of(box.upper)
        return list(itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))))

    def sites_in(self, tiles, box):
        """
        Sites of the box covered by the given tiles, in box order.
        """
        tiles = set(_as_site(m) for m in tiles)
        return [site for site in box.sites if self.tile_of(site) in tiles]

    def shell(self, box, distance, centre=None):
        """
        Sites of the box whose tile has l-infinity tile distance exactly ``distance`` from ``centre``.
        """
        centre = _as_site(centre) if centre is not None else (0,) * self.dim
        return [
            site for site in box.sites
            if max(abs(a - b) for a, b in zip(self.tile_of(site), centre)) == distance
        ]


def tile_of(site, geom):
    """
    Index ``m`` of the tile containing ``site``, with floor semantics for negative coordinates.
    """
    return geom.tile_of(site)


@dataclass(frozen=True)
class BoundaryLayer:
    """
    The tiles of a box split into an inner set, the layer around it and the rest.
    """
    inner: frozenset
    layer: frozenset
    exterior: frozenset


def boundary_layer(geom, box, inner):
    """
    Build the :class:`BoundaryLayer` of tiles at l-infinity tile distance 1
    around ``inner``, restricted to the tiles that intersect ``box``.
    """
    inner = frozenset(_as_site(m) for m in inner)
    tiles = geom.tiles_in_box(box)
    missing = inner.difference(tiles)
    if missing:
        raise DomainError("Inner tiles {0} do not intersect the box.".format(sorted(missing)))

    layer = set()
    exterior = set()
    for m in tiles:
        if m in inner:
            continue
        distance = min(max(abs(a - b) for a, b in zip(m, n)) for n in inner)
        (layer if distance == 1 else exterior).add(m)
    return BoundaryLayer(inner=inner, layer=frozenset(layer), exterior=frozenset(exterior))
