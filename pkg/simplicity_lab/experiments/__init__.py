"""
Monte Carlo and sweep experiments built on the numerical layers.
"""
from .census import SpectralReport, CensusResult, spectral_report, multiplicity_census
from .averaging import AveragingReport, spectral_averaging_check
from .decay import DecayFit, combes_thomas_fit
from .suite import Ledger, LedgerEntry, verify_identity_suite

__all__ = (
    'SpectralReport', 'CensusResult', 'spectral_report', 'multiplicity_census',
    'AveragingReport', 'spectral_averaging_check',
    'DecayFit', 'combes_thomas_fit',
    'Ledger', 'LedgerEntry', 'verify_identity_suite',
)
