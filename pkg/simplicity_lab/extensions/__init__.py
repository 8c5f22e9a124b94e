"""
Special classes to extend the module; e.g. identity checks.

Every check that :func:`~simplicity_lab.experiments.verify_identity_suite` runs is a plugin.
Projects can add their own by registering them in an ``identity_checks`` module of an installed app.

The API uses a registration system.
While checks could be detected via ``__subclasses__()``, the register approach is less magic and more explicit.
"""
from .checkbase import IdentityCheck, LedgerEntry
from .checkpool import IdentityCheckAlreadyRegistered, IdentityCheckNotFound, IdentityCheckPool, identity_check_pool


__all__ = (
    'IdentityCheck',
    'LedgerEntry',
    'IdentityCheckAlreadyRegistered',
    'IdentityCheckNotFound',
    'IdentityCheckPool',
    'identity_check_pool',
)
