"""
Multiplicity censuses: how often does a sampled Hamiltonian have a degenerate eigenvalue?
"""
from concurrent import futures
from dataclasses import dataclass, field
import logging

import numpy as np
import scipy.linalg
from scipy import stats

from simplicity_lab.birman_schwinger.blocks import operator_of
from simplicity_lab.exceptions import DomainError, NumericalFailure, SingularMatrix
from simplicity_lab.linalg import cluster_values, discriminant, discriminant_from_eigenvalues
from simplicity_lab.models import sample_omega

__all__ = (
    'SpectralReport', 'CensusResult', 'spectral_report', 'multiplicity_census',
)

logger = logging.getLogger(__name__)

#: The Sylvester route of the discriminant is only cross-checked up to this dimension.
CROSS_CHECK_MAX_SIZE = 6

#: Decades of the min-gap histogram, ``10^-16 .. 10^1``.
HISTOGRAM_EDGES = tuple(float(x) for x in range(-16, 2))


@dataclass(frozen=True)
class SpectralReport:
    """
    Sorted eigenvalues with their smallest gap and multiplicity clusters at tolerance ``tau``.
    ``relative_gap`` is ``min_gap / (diameter + 1)``, the scale used by the clusters.
    """
    values: np.ndarray = field(repr=False)
    min_gap: float
    relative_gap: float
    clusters: tuple
    log_discriminant: float
    discriminant_deviation: float = None

    @property
    def cluster_sizes(self):
        return [len(c) for c in self.clusters]

    @property
    def largest_cluster(self):
        return max(self.cluster_sizes)

    @property
    def degenerate(self):
        return self.largest_cluster >= 2


def spectral_report(H, tau=1e-10):
    """
    Eigendecompose ``H`` and cluster its eigenvalues at ``tau`` relative to the spectral diameter.

    ``log_discriminant`` is ``log |F|`` summed over the gaps (``-inf`` at an exact degeneracy).
    For small matrices the Sylvester route is compared with the product of gaps.
    """
    A = operator_of(H)
    if tau <= 0:
        raise DomainError("Cluster tolerance must be positive, got {0}.".format(tau))
    try:
        values = scipy.linalg.eigvalsh(A)
    except np.linalg.LinAlgError as e:
        raise NumericalFailure("Hermitian eigensolver did not converge: {0}".format(e))

    if len(values) == 1:
        return SpectralReport(values=values, min_gap=np.inf, relative_gap=np.inf, clusters=((0,),), log_discriminant=0.0)

    gaps = np.diff(values)
    diameter = float(values[-1] - values[0])
    min_gap = float(gaps.min())
    with np.errstate(divide='ignore'):
        log_discriminant = float(2.0 * np.sum(np.log(np.abs(values[:, None] - values[None, :])[np.triu_indices(len(values), 1)])))

    deviation = None
    if len(values) <= CROSS_CHECK_MAX_SIZE:
        product = discriminant_from_eigenvalues(values)
        deviation = abs(discriminant(A) - product) / max(abs(product), 1e-300)

    return SpectralReport(
        values=values,
        min_gap=min_gap,
        relative_gap=min_gap / (diameter + 1.0),
        clusters=cluster_values(values, tau),
        log_discriminant=log_discriminant,
        discriminant_deviation=deviation,
    )


@dataclass(frozen=True)
class CensusResult:
    """
    Per-trial smallest relative gaps and cluster counts, in trial order.
    """
    trials: int
    tau: float
    min_gaps: tuple
    cluster_counts: tuple
    largest_clusters: tuple

    @property
    def degenerate_trials(self):
        return sum(1 for size in self.largest_clusters if size >= 2)

    @property
    def degenerate_fraction(self):
        return self.degenerate_trials / float(self.trials)

    @property
    def upper_bound(self):
        """
        One-sided Clopper-Pearson 95% upper bound of the degenerate fraction.
        """
        k = self.degenerate_trials
        if k >= self.trials:
            return 1.0
        return float(stats.beta.ppf(0.95, k + 1, self.trials - k))

    def below(self, threshold):
        """
        Number of trials whose smallest relative gap is below ``threshold``.
        """
        return sum(1 for gap in self.min_gaps if gap < threshold)

    @property
    def histogram(self):
        """
        Counts of ``log10`` of the finite min gaps over :data:`HISTOGRAM_EDGES`; zero gaps land in the lowest bin.
        """
        gaps = np.array([g for g in self.min_gaps if np.isfinite(g)])
        logs = np.log10(np.maximum(gaps, 10.0 ** HISTOGRAM_EDGES[0]))
        logs = np.clip(logs, HISTOGRAM_EDGES[0], HISTOGRAM_EDGES[-1])
        counts, _ = np.histogram(logs, bins=HISTOGRAM_EDGES)
        return HISTOGRAM_EDGES, tuple(int(c) for c in counts)


def _census_trial(model, disorder, tau, trial):
    omega = sample_omega(disorder, model.labels, trial)
    try:
        report = spectral_report(model.build(omega), tau)
    except (NumericalFailure, SingularMatrix) as e:
        raise NumericalFailure("Census trial {0} failed: {1}".format(trial, e), trial=trial)
    logger.debug("trial=%d relative_gap=%.3g clusters=%d", trial, report.relative_gap, len(report.clusters))
    return trial, report


def multiplicity_census(model, disorder, trials, tau=1e-10, workers=1):
    """
    Sample ``trials`` coupling vectors, build and eigendecompose each Hamiltonian and aggregate
    the multiplicity clusters. Trial ``t`` always uses the stream of ``(master_seed, t)``,
    so the result does not depend on ``workers``.
    """
    if trials < 1:
        raise DomainError("A census needs at least one trial.")
    if tau <= 0:
        raise DomainError("Cluster tolerance must be positive, got {0}.".format(tau))

    if workers > 1:
        with futures.ThreadPoolExecutor(max_workers=workers) as executor:
            jobs = [executor.submit(_census_trial, model, disorder, tau, t) for t in range(trials)]
            results = dict(job.result() for job in jobs)
    else:
        results = dict(_census_trial(model, disorder, tau, t) for t in range(trials))

    reports = [results[t] for t in range(trials)]
    result = CensusResult(
        trials=trials,
        tau=float(tau),
        min_gaps=tuple(r.relative_gap for r in reports),
        cluster_counts=tuple(len(r.clusters) for r in reports),
        largest_clusters=tuple(r.largest_cluster for r in reports),
    )
    logger.info("Census of %d trials: %d degenerate (upper bound %.3g).", trials, result.degenerate_trials, result.upper_bound)
    return result
