"""
Overview of all settings which can be customized.
"""
from django.conf import settings
from django.core.exceptions import ImproperlyConfigured
import os

# Reproducibility
SIMPLICITY_LAB_DEFAULT_SEED = getattr(settings, 'SIMPLICITY_LAB_DEFAULT_SEED', 20240611)

# Tolerances
SIMPLICITY_LAB_DEGENERACY_TOLERANCE = getattr(settings, 'SIMPLICITY_LAB_DEGENERACY_TOLERANCE', 1e-10)
SIMPLICITY_LAB_GAP_TOLERANCE = getattr(settings, 'SIMPLICITY_LAB_GAP_TOLERANCE', 1e-8)
SIMPLICITY_LAB_RANK_TOLERANCE = getattr(settings, 'SIMPLICITY_LAB_RANK_TOLERANCE', 1e-8)

# Two-site operator
SIMPLICITY_LAB_TWO_SITE_RADIUS = getattr(settings, 'SIMPLICITY_LAB_TWO_SITE_RADIUS', 12)

# Runs
SIMPLICITY_LAB_WORKERS = getattr(settings, 'SIMPLICITY_LAB_WORKERS', 1)
SIMPLICITY_LAB_OUTPUT_DIR = getattr(settings, 'SIMPLICITY_LAB_OUTPUT_DIR', os.path.join(os.getcwd(), 'simplicity-runs'))
SIMPLICITY_LAB_LEDGER_NAME = getattr(settings, 'SIMPLICITY_LAB_LEDGER_NAME', 'ledger.json')


# Checks
for _name in ('SIMPLICITY_LAB_DEGENERACY_TOLERANCE', 'SIMPLICITY_LAB_GAP_TOLERANCE', 'SIMPLICITY_LAB_RANK_TOLERANCE'):
    _value = globals()[_name]
    if not isinstance(_value, float) or not 0.0 < _value < 1.0:
        raise ImproperlyConfigured("The setting '{0}' should be a float between 0 and 1, not {1!r}.".format(_name, _value))

if not isinstance(SIMPLICITY_LAB_DEFAULT_SEED, int) or SIMPLICITY_LAB_DEFAULT_SEED < 0:
    raise ImproperlyConfigured("The setting 'SIMPLICITY_LAB_DEFAULT_SEED' should be a non-negative integer.")

if not isinstance(SIMPLICITY_LAB_TWO_SITE_RADIUS, int) or SIMPLICITY_LAB_TWO_SITE_RADIUS < 4:
    raise ImproperlyConfigured("The setting 'SIMPLICITY_LAB_TWO_SITE_RADIUS' should be an integer of at least 4.")

if not isinstance(SIMPLICITY_LAB_WORKERS, int) or SIMPLICITY_LAB_WORKERS < 1:
    raise ImproperlyConfigured("The setting 'SIMPLICITY_LAB_WORKERS' should be a positive integer.")

if not os.path.isabs(SIMPLICITY_LAB_OUTPUT_DIR):
    raise ImproperlyConfigured("The setting 'SIMPLICITY_LAB_OUTPUT_DIR' needs to be an absolute path!")
