"""
Laws of the random couplings and reproducible sampling.
"""
from dataclasses import dataclass

import numpy as np
from scipy import stats

from simplicity_lab.exceptions import DomainError

__all__ = (
    'DisorderLaw', 'DisorderSpec', 'sample_omega',
)


class DisorderLaw:
    UNIFORM = 'uniform'
    TRUNCATED_GAUSSIAN = 'truncated_gaussian'

    choices = (
        (UNIFORM, 'Uniform on [lo, hi]'),
        (TRUNCATED_GAUSSIAN, 'Gaussian truncated to [lo, hi]'),
    )


@dataclass(frozen=True)
class DisorderSpec:
    """
    The single-site law of the couplings, supported on ``[lo, hi]``,
    and the master seed from which every trial derives its own stream.
    """
    law: str = DisorderLaw.UNIFORM
    lo: float = 0.0
    hi: float = 1.0
    mean: float = 0.5
    sd: float = 1.0
    master_seed: int = 0

    def __post_init__(self):
        if self.law not in dict(DisorderLaw.choices):
            raise DomainError("Unknown disorder law '{0}'.".format(self.law))
        if not self.lo < self.hi:
            raise DomainError("Disorder support [{0}, {1}] is empty.".format(self.lo, self.hi))
        if self.sd <= 0:
            raise DomainError("Standard deviation must be positive, got {0}.".format(self.sd))
        if not 0 <= self.master_seed < 2 ** 64:
            raise DomainError("Master seed must be a 64-bit unsigned integer.")

    @property
    def _truncnorm(self):
        a = (self.lo - self.mean) / self.sd
        b = (self.hi - self.mean) / self.sd
        return stats.truncnorm(a, b, loc=self.mean, scale=self.sd)

    @property
    def law_mean(self):
        if self.law == DisorderLaw.UNIFORM:
            return 0.5 * (self.lo + self.hi)
        return float(self._truncnorm.mean())

    @property
    def law_variance(self):
        if self.law == DisorderLaw.UNIFORM:
            return (self.hi - self.lo) ** 2 / 12.0
        return float(self._truncnorm.var())

    @property
    def density_bound(self):
        """
        The sup norm of the density.
        """
        if self.law == DisorderLaw.UNIFORM:
            return 1.0 / (self.hi - self.lo)
        return float(self._truncnorm.pdf(min(max(self.mean, self.lo), self.hi)))

    def rng(self, trial):
        """
        The generator of trial ``trial``, spawned from ``(master_seed, trial)``.
        """
        if trial < 0:
            raise DomainError("Trial index must be non-negative, got {0}.".format(trial))
        return np.random.default_rng(np.random.SeedSequence([int(self.master_seed), int(trial)]))


def sample_omega(spec, sites_or_tiles, trial):
    """
    Draw one coupling per label (or ``sites_or_tiles`` values if it is an integer).
    Identical ``(spec, trial)`` always give identical vectors.
    """
    count = sites_or_tiles if isinstance(sites_or_tiles, (int, np.integer)) else len(sites_or_tiles)
    rng = spec.rng(trial)
    if spec.law == DisorderLaw.UNIFORM:
        values = rng.uniform(spec.lo, spec.hi, size=count)
    else:
        values = spec._truncnorm.rvs(size=count, random_state=rng)
    return np.clip(values, spec.lo, spec.hi)
