"""
Execution of one subcommand against a validated :class:`~simplicity_lab.forms.RunConfig`.

Every subcommand computes first and writes last: a run that fails with an invalid
parameter leaves no artifacts behind.
"""
from dataclasses import dataclass
import logging
import os

import numpy as np

from simplicity_lab import appsettings
from simplicity_lab.birman_schwinger import bs_block, bs_correspondence, case_iii_splitting
from simplicity_lab.cyclicity import coupling_limit, two_tile_span
from simplicity_lab.exceptions import DomainError, NumericalFailure, SingularMatrix
from simplicity_lab.experiments import (
    combes_thomas_fit, multiplicity_census, spectral_averaging_check, spectral_report, verify_identity_suite,
)
from simplicity_lab.models import ModelKind, sample_omega
from simplicity_lab.output import write_csv, write_json, write_manifest

__all__ = (
    'EXIT_OK', 'EXIT_FAILED', 'EXIT_INVALID', 'EXIT_NUMERICAL', 'RunResult', 'run',
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


@dataclass(frozen=True)
class RunResult:
    exit_code: int
    artifacts: tuple = ()
    message: str = ''

    @property
    def ok(self):
        return self.exit_code == EXIT_OK


class _Outcome(object):
    """
    Collects the tables of a subcommand until they are written.
    """

    def __init__(self):
        self.tables = []
        self.records = []
        self.failures = []

    def table(self, name, verifies, columns, rows):
        self.tables.append((name, verifies, columns, list(rows)))

    def record(self, name, verifies, payload):
        self.records.append((name, verifies, payload))

    def fail(self, message):
        self.failures.append(message)


def _sample(config, trial=0):
    model = config.model
    omega = sample_omega(config.disorder, model.labels, trial) if model.labels else ()
    return model.build(omega)


def _origin_label(H):
    if not H.labels:
        raise DomainError("The model has no random coupling to split off.")
    origin = (0,) * H.box.dim
    return origin if origin in H.labels else H.labels[0]


def _verify_identities(config, workers, outcome):
    ledger = verify_identity_suite(workers=workers, seed=config.seed)
    outcome.record(appsettings.SIMPLICITY_LAB_LEDGER_NAME, "exact identities and asymptotic statements of the registered checks", ledger.as_dict())
    for entry in ledger.failures:
        outcome.fail("identity {0} failed (deviation {1})".format(entry.name, entry.error or entry.deviation))


def _spectrum(config, workers, outcome):
    experiment = config.experiment
    report = spectral_report(_sample(config), experiment['tau'])
    outcome.table('spectrum.csv', "eigenvalues of one sampled Hamiltonian", ['index', 'eigenvalue'], enumerate(report.values))
    outcome.record('spectrum.json', "simplicity of the spectrum of one sampled Hamiltonian", {
        'dimension': len(report.values),
        'min_gap': report.min_gap,
        'relative_gap': report.relative_gap,
        'cluster_sizes': report.cluster_sizes,
        'log_discriminant': report.log_discriminant,
        'discriminant_deviation': report.discriminant_deviation,
    })
    if experiment['require_simple'] and report.degenerate:
        outcome.fail("spectrum has a cluster of size {0} at tau = {1:g}".format(report.largest_cluster, experiment['tau']))


def _bs(config, workers, outcome):
    experiment = config.experiment
    H = _sample(config)
    label = _origin_label(H)
    V = H.coupling(label)
    H0 = H.with_coupling(label, 0.0)

    rows = []
    for z in experiment['z_list']:
        block = bs_block(H0, V, z)
        report = block.is_simple(gap_tol=appsettings.SIMPLICITY_LAB_GAP_TOLERANCE)
        herglotz = block.is_herglotz() if z.imag > 0 else None
        rows.append((z.real, z.imag, report.relative_gap, report.simple, herglotz))
        if experiment['require_simple'] and not report.simple:
            outcome.fail("G(z) is not simple at z = {0}".format(z))
        if herglotz is False:
            outcome.fail("Im G(z) is not positive semidefinite at z = {0}".format(z))
    outcome.table('bs.csv', "simplicity and Herglotz property of the Birman-Schwinger block of one coupling",
                  ['re_z', 'im_z', 'relative_gap', 'simple', 'herglotz'], rows)

    lam = experiment['coupling']
    correspondence = bs_correspondence(H.with_coupling(label, lam), H0, V, lam)
    outcome.record('bs_correspondence.json', "eigenvector correspondence between H_0 + lambda V and G(E)", {
        'label': label,
        'coupling': lam,
        'residuals': correspondence.residuals,
        'skipped': correspondence.skipped,
        'vanishing': correspondence.vanishing,
        'max_residual': correspondence.max_residual,
    })
    if not correspondence.passed():
        outcome.fail("eigenvector correspondence residual {0:.3g}".format(correspondence.max_residual))

    if V.basis.shape[1]:
        averaging = spectral_averaging_check(H0, V, experiment['energy_window'], V.basis[:, 0],
                                             lambda_max=experiment['lambda_max'], points=experiment['lambda_points'])
        outcome.record('averaging.json', "spectral averaging of the coupled vector is bounded by the window length", {
            'energy_window': experiment['energy_window'],
            'lhs': averaging.lhs,
            'rhs': averaging.rhs,
            'error_budget': averaging.error_budget,
            'tail': averaging.tail,
            'lambda_max': averaging.lambda_max,
            'points': averaging.points,
        })
        if not averaging.passed:
            outcome.fail("spectral averaging exceeds its bound by {0:.3g}".format(-averaging.margin))


def _census(config, workers, outcome):
    experiment = config.experiment
    result = multiplicity_census(config.model, config.disorder, experiment['trials'], experiment['tau'], workers=workers)
    outcome.table('census.csv', "multiplicity of the eigenvalues of sampled Hamiltonians",
                  ['trial', 'min_gap', 'cluster_count', 'largest_cluster'],
                  zip(range(result.trials), result.min_gaps, result.cluster_counts, result.largest_clusters))
    edges, counts = result.histogram
    outcome.record('census.json', "multiplicity of the eigenvalues of sampled Hamiltonians", {
        'trials': result.trials,
        'tau': result.tau,
        'degenerate_trials': result.degenerate_trials,
        'degenerate_fraction': result.degenerate_fraction,
        'upper_bound_95': result.upper_bound,
        'histogram_log10_edges': edges,
        'histogram_counts': counts,
    })
    if experiment['require_simple'] and result.degenerate_trials:
        outcome.fail("{0} of {1} trials have a degenerate eigenvalue".format(result.degenerate_trials, result.trials))


def _decay(config, workers, outcome):
    experiment = config.experiment
    fit = combes_thomas_fit(_sample(config), experiment['z'], experiment['L_list'])
    outcome.table('decay.csv', "exponential decay of the resolvent between distant tiles", ['L', 'norm'], zip(fit.distances, fit.norms))
    outcome.record('decay.json', "exponential decay of the resolvent between distant tiles", {
        'z': fit.z,
        'eta': fit.eta,
        'intercept': fit.intercept,
        'r_squared': fit.r_squared,
        'monotone': fit.monotone,
        'underflow': fit.underflow,
        'underflow_from': fit.underflow_from,
    })
    if not fit.passed:
        outcome.fail("decay fit has slope {0:.3g} and R^2 {1:.4f}".format(fit.slope, fit.r_squared))
    if not fit.monotone:
        outcome.fail("annulus norms are not monotone in L")


def _splitting(config, workers, outcome):
    model = config.model
    table = case_iii_splitting(model.a, model.b, config.experiment['z_list'], R=model.R)
    outcome.table('splitting.csv', "splitting of the degenerate pair of the two-site block as +-(a - b)/z^3",
                  ['re_z', 'im_z', 'gap_ratio', 'deviation', 'schur_agreement', 'truncation_change'],
                  ((row.z.real, row.z.imag, row.gap_ratio, row.deviation, row.schur_agreement, row.truncation_change) for row in table.rows))
    if not table.decreasing:
        outcome.fail("splitting deviations do not decrease in |z|")


def _span(config, workers, outcome):
    model = config.model
    experiment = config.experiment
    if model.kind != ModelKind.MODEL_B:
        raise DomainError("The span subcommand needs a Model B configuration.")
    geom = model.geometry
    m = (0,) * geom.dim
    m_prime = (1,) + (0,) * (geom.dim - 1)
    f = np.array(model.f)

    span = two_tile_span(geom, m, m_prime, f, experiment['z0'], mu_list=experiment['mu_list'], seed=config.seed,
                         tol=appsettings.SIMPLICITY_LAB_RANK_TOLERANCE)
    outcome.record('span.json', "the two-tile resolvent blocks over mu span l^2(C)", {
        'target_dim': span.target_dim,
        'achieved_rank': span.achieved_rank,
        'mu_values': span.mu_values,
        'smallest_retained': span.smallest_retained,
    })
    if not span.passed:
        outcome.fail("two-tile span reached rank {0} of {1}".format(span.achieved_rank, span.target_dim))

    omega = sample_omega(config.disorder, model.labels, 0)
    table = coupling_limit(geom, model.box, m, m_prime, experiment['coupling'], experiment['lambda_list'], omega, experiment['z0'], f)
    outcome.table('coupling_limit.csv', "large couplings on the boundary layer decouple the two-tile resolvent block",
                  ['lambda', 'deviation'], zip(table.lambdas, table.deviations))
    if not table.converged:
        outcome.fail("coupling limit deviation {0:.3g} at lambda = {1:g}".format(table.deviations[-1], table.lambdas[-1]))


SUBCOMMAND_HANDLERS = {
    'verify-identities': _verify_identities,
    'spectrum': _spectrum,
    'bs': _bs,
    'census': _census,
    'decay': _decay,
    'splitting': _splitting,
    'span': _span,
}


def run(subcommand, config, workers=None):
    """
    Run ``subcommand`` and write its artifacts and manifest below ``config.out_dir/<subcommand>``.

    Exit codes: 0 success, 1 a checked statement failed, 2 a parameter is outside the domain
    of the computation, 3 a numerical failure.
    """
    workers = workers or appsettings.SIMPLICITY_LAB_WORKERS
    try:
        handler = SUBCOMMAND_HANDLERS[subcommand]
    except KeyError:
        return RunResult(exit_code=EXIT_INVALID, message="Unknown subcommand '{0}'.".format(subcommand))

    outcome = _Outcome()
    try:
        handler(config, workers, outcome)
    except (NumericalFailure, SingularMatrix) as e:
        logger.error("Numerical failure in %s: %s", subcommand, e)
        return RunResult(exit_code=EXIT_NUMERICAL, message=str(e))
    except DomainError as e:
        logger.error("Invalid parameters for %s: %s", subcommand, e)
        return RunResult(exit_code=EXIT_INVALID, message=str(e))

    directory = os.path.join(config.out_dir, subcommand)
    os.makedirs(directory, exist_ok=True)
    artifacts = [write_csv(os.path.join(directory, name), verifies, columns, rows) for name, verifies, columns, rows in outcome.tables]
    artifacts += [write_json(os.path.join(directory, name), verifies, payload) for name, verifies, payload in outcome.records]
    artifacts.append(write_manifest(directory, config, artifacts))

    if outcome.failures:
        return RunResult(exit_code=EXIT_FAILED, artifacts=tuple(artifacts), message='; '.join(outcome.failures))
    logger.info("%s finished, %d artifacts in %s", subcommand, len(artifacts), directory)
    return RunResult(exit_code=EXIT_OK, artifacts=tuple(artifacts))
