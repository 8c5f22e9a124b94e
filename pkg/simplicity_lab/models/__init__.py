"""
The Hamiltonians of the laboratory and the laws of their random couplings.

This package holds no database tables.
"""
from .disorder import DisorderLaw, DisorderSpec, sample_omega
from .hamiltonians import (
    ModelKind, SiteTerm, Coupling, Hamiltonian, hopping_matrix,
    build_discrete_anderson, build_model_a, build_model_b, build_two_site, build_two_tile,
)
from .paths import shortest_path_count, hopping_power_block, covering_defect
from .specs import ModelSpec

__all__ = (
    'DisorderLaw', 'DisorderSpec', 'sample_omega',
    'ModelKind', 'SiteTerm', 'Coupling', 'Hamiltonian', 'hopping_matrix',
    'build_discrete_anderson', 'build_model_a', 'build_model_b', 'build_two_site', 'build_two_tile',
    'shortest_path_count', 'hopping_power_block', 'covering_defect',
    'ModelSpec',
)
