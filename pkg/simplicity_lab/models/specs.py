"""
Descriptions of which Hamiltonian to build, independent of the sampled couplings.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from simplicity_lab.exceptions import DomainError
from simplicity_lab.lattice import LatticeBox, TileGeometry
from .hamiltonians import (
    ModelKind, build_discrete_anderson, build_model_a, build_model_b, build_two_site,
    two_site_box, validate_coupling_matrix, validate_profile,
)

__all__ = (
    'ModelSpec',
)


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """
    The model kind with its deterministic ingredients.

    ``W`` is used by Model A, ``period`` and ``f`` by Model B, ``a``, ``b`` and ``R``
    by the two-site operator. The box of the two-site operator follows from ``R``.
    """
    kind: str = ModelKind.DISCRETE
    box: LatticeBox = None
    W: tuple = ((1.0,),)
    period: tuple = None
    f: tuple = None
    a: float = 1.0
    b: float = 0.0
    R: int = 12

    def __post_init__(self):
        if self.kind not in dict(ModelKind.choices):
            raise DomainError("Unknown model kind '{0}'.".format(self.kind))

        if self.kind == ModelKind.TWO_SITE:
            if self.R < 4:
                raise DomainError("Truncation radius must be at least 4, got {0}.".format(self.R))
            object.__setattr__(self, 'box', two_site_box(self.R))
        elif self.box is None:
            raise DomainError("A box is required for the '{0}' model.".format(self.kind))

        if self.kind == ModelKind.MODEL_A:
            validate_coupling_matrix(self.W)
        elif self.kind == ModelKind.MODEL_B:
            if self.period is None:
                raise DomainError("Model B needs a tile period.")
            geom = TileGeometry(self.period)
            if geom.dim != self.box.dim:
                raise DomainError("Tile period {0} does not match the box dimension {1}.".format(geom.period, self.box.dim))
            f = self.f if self.f is not None else np.ones(geom.tile_size)
            object.__setattr__(self, 'f', tuple(validate_profile(f, geom).ravel()))

    @cached_property
    def geometry(self):
        if self.kind == ModelKind.MODEL_B:
            return TileGeometry(self.period)
        if self.kind == ModelKind.TWO_SITE:
            return TileGeometry((2, 2))
        return None

    @cached_property
    def labels(self):
        """
        The sites or tiles that receive a random coupling.
        """
        if self.kind in (ModelKind.DISCRETE, ModelKind.MODEL_A):
            return list(self.box.sites)
        if self.kind == ModelKind.MODEL_B:
            return self.geometry.tiles_in_box(self.box)
        return []

    def build(self, omega=()):
        """
        Assemble the Hamiltonian for the couplings ``omega`` (one per label).
        """
        if self.kind == ModelKind.DISCRETE:
            return build_discrete_anderson(self.box, omega)
        if self.kind == ModelKind.MODEL_A:
            return build_model_a(self.box, self.W, omega)
        if self.kind == ModelKind.MODEL_B:
            return build_model_b(self.box, self.geometry, self.f, omega)
        return build_two_site(self.a, self.b, self.R)
