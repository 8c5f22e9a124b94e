"""
Birman-Schwinger blocks, their large-``|z|`` asymptotics and the two-site computation.
"""
from .blocks import (
    BSBlock, BoundaryValue, CorrespondenceReport, ThresholdScan, NeumannRemainder,
    bs_block, bs_boundary, bs_correspondence, simplicity_threshold_scan, neumann_remainder,
)
from .asymptotics import (
    DeviationRow, DeviationTable, fit_power_law,
    case_i_check, case_ii_check, model_a_leading_order, offdiagonal_leading_order,
)
from .two_site import (
    SymmetryBasis, CaseIIIMatrices, SplittingRow, SplittingTable, EnvironmentRow, EnvironmentReport,
    symmetry_basis, case_iii_matrices, case_iii_shift, rescaled_block,
    case_iii_splitting, case_iii_random_environment,
)

__all__ = (
    'BSBlock', 'BoundaryValue', 'CorrespondenceReport', 'ThresholdScan', 'NeumannRemainder',
    'bs_block', 'bs_boundary', 'bs_correspondence', 'simplicity_threshold_scan', 'neumann_remainder',
    'DeviationRow', 'DeviationTable', 'fit_power_law',
    'case_i_check', 'case_ii_check', 'model_a_leading_order', 'offdiagonal_leading_order',
    'SymmetryBasis', 'CaseIIIMatrices', 'SplittingRow', 'SplittingTable', 'EnvironmentRow', 'EnvironmentReport',
    'symmetry_basis', 'case_iii_matrices', 'case_iii_shift', 'rescaled_block',
    'case_iii_splitting', 'case_iii_random_environment',
)
