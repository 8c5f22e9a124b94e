"""
Internal module for the plugin system,
the API is exposed via __init__.py
"""
from dataclasses import dataclass
import logging
import zlib

import numpy as np

from simplicity_lab.exceptions import SimplicityLabError

__all__ = (
    'IdentityCheck', 'LedgerEntry',
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LedgerEntry:
    """
    One line of the identity ledger.
    """
    name: str
    anchor: str
    deviation: float
    tolerance: float
    passed: bool
    error: str = None

    def as_dict(self):
        return {
            'name': self.name,
            'anchor': self.anchor,
            'deviation': self.deviation,
            'tolerance': self.tolerance,
            'passed': self.passed,
            'error': self.error,
        }


class IdentityCheck(object):
    """
    The base class for an identity check.

    To create a new check, derive from this class, implement :func:`run`
    and call :func:`identity_check_pool.register <IdentityCheckPool.register>` to enable it.
    For example:

    .. code-block:: python

        from simplicity_lab.extensions import IdentityCheck, identity_check_pool

        @identity_check_pool.register
        class TraceCheck(IdentityCheck):
            name = 'trace'
            anchor = "trace of the hopping matrix vanishes"

            def run(self, seed):
                return abs(np.trace(hopping_matrix(LatticeBox.cube(2, 0, 3))))

    :func:`run` returns the deviation of the computed quantity from its exact value;
    the check passes when it does not exceed :attr:`tolerance`.

    .. note::
        When the check is registered in the :attr:`identity_check_pool`, it will be instantiated only once.
        It is therefore not possible to store per-run state at the check object.
    """

    # -- Settings to override:

    #: The ledger name of the check; defaults to the class name.
    name = None

    #: What the check verifies, written into the ledger.
    anchor = ''

    #: Largest accepted deviation.
    tolerance = 1e-10

    #: The position of the check in the ledger.
    sort_priority = 100

    def __repr__(self):
        return '<{0} {1}>'.format(self.__class__.__name__, self.check_name)

    @property
    def check_name(self):
        return self.name or self.__class__.__name__

    def rng(self, seed):
        """
        A generator that depends only on ``seed`` and the check name.
        """
        stream = zlib.crc32(self.check_name.encode('utf-8'))
        return np.random.default_rng([int(seed), stream])

    def run(self, seed):
        """
        Compute and return the deviation.
        """
        raise NotImplementedError("{0} should implement run()".format(self.__class__.__name__))

    def evaluate(self, seed):
        """
        Run the check and turn the outcome into a :class:`LedgerEntry`.
        Errors of the numerical layer fail the entry instead of the suite.
        """
        try:
            deviation = float(self.run(seed))
        except SimplicityLabError as e:
            logger.warning("Identity check %s raised %s: %s", self.check_name, e.__class__.__name__, e)
            return LedgerEntry(
                name=self.check_name, anchor=self.anchor, deviation=None, tolerance=self.tolerance,
                passed=False, error='{0}: {1}'.format(e.__class__.__name__, e),
            )

        passed = bool(np.isfinite(deviation) and deviation <= self.tolerance)
        if not passed:
            logger.warning("Identity check %s failed: deviation %.3g > %.3g", self.check_name, deviation, self.tolerance)
        return LedgerEntry(name=self.check_name, anchor=self.anchor, deviation=deviation, tolerance=self.tolerance, passed=passed)
