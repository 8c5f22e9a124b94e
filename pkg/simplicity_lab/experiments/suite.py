"""
The identity ledger: every registered identity check, evaluated on fixed seeds.
"""
from concurrent import futures
from dataclasses import dataclass
import json
import logging

from simplicity_lab import appsettings
from simplicity_lab.extensions import LedgerEntry, identity_check_pool

__all__ = (
    'Ledger', 'LedgerEntry', 'verify_identity_suite',
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ledger:
    seed: int
    entries: tuple

    @property
    def passed(self):
        return all(entry.passed for entry in self.entries)

    @property
    def failures(self):
        return [entry for entry in self.entries if not entry.passed]

    def get(self, name):
        return next(entry for entry in self.entries if entry.name == name)

    def as_dict(self):
        return {
            'seed': self.seed,
            'passed': self.passed,
            'entries': [entry.as_dict() for entry in self.entries],
        }

    def to_json(self):
        """
        Canonical JSON: sorted keys, fixed indentation, floats in shortest round-trip form.
        """
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + '\n'


def verify_identity_suite(workers=1, seed=None, names=None):
    """
    Evaluate the registered identity checks (or only ``names``) and collect one ledger line per check.
    The ledger order is the pool order, whatever the number of workers.
    """
    seed = appsettings.SIMPLICITY_LAB_DEFAULT_SEED if seed is None else int(seed)
    checks = identity_check_pool.get_checks()
    if names is not None:
        checks = [identity_check_pool.get_check(name) for name in names]

    if workers > 1:
        with futures.ThreadPoolExecutor(max_workers=workers) as executor:
            entries = list(executor.map(lambda check: check.evaluate(seed), checks))
    else:
        entries = [check.evaluate(seed) for check in checks]

    ledger = Ledger(seed=seed, entries=tuple(entries))
    logger.info("Identity suite finished: %d of %d checks passed.", len(entries) - len(ledger.failures), len(entries))
    return ledger
