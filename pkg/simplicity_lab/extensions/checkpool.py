"""
Internal module for the plugin system,
the API is exposed via __init__.py
"""
from threading import Lock

from fluent_utils.load import import_apps_submodule

from .checkbase import IdentityCheck

__all__ = (
    'IdentityCheckAlreadyRegistered', 'IdentityCheckNotFound', 'IdentityCheckPool', 'identity_check_pool'
)


class IdentityCheckAlreadyRegistered(Exception):
    """
    Raised when attempting to register a check twice.
    """
    pass


class IdentityCheckNotFound(Exception):
    """
    Raised when a check could not be found by name.
    """
    pass


class IdentityCheckPool(object):
    """
    The central administration of identity checks.
    """
    scanLock = Lock()

    def __init__(self):
        self.checks = {}
        self.detected = False

    def register(self, check):
        """
        Make an identity check known to the suite.

        :param check: The check class, deriving from :class:`IdentityCheck`.

        The check will be instantiated once.
        If a check with the same name is already registered, this will raise a :class:`IdentityCheckAlreadyRegistered` exception.
        """
        # Duct-Typing does not suffice here, avoid hard to debug problems by upfront checks.
        assert issubclass(check, IdentityCheck), "The check must inherit from `IdentityCheck`"

        instance = check()
        name = instance.check_name
        if name in self.checks:
            raise IdentityCheckAlreadyRegistered("[{0}] a check with this name is already registered".format(name))

        self.checks[name] = instance
        return check  # Allow class decorator syntax

    def unregister(self, name):
        try:
            del self.checks[name]
        except KeyError:
            raise IdentityCheckNotFound("No identity check named '{0}'.".format(name))

    def get_checks(self):
        """
        Return the :class:`IdentityCheck` instances in ledger order.
        """
        self._import_checks()
        return sorted(self.checks.values(), key=lambda check: (check.sort_priority, check.check_name))

    def get_check(self, name):
        self._import_checks()
        try:
            return self.checks[name]
        except KeyError:
            raise IdentityCheckNotFound("No identity check named '{0}'.".format(name))

    def _import_checks(self):
        """
        Internal function, ensure all check modules are imported.
        """
        if self.detected:
            return

        # Make sure there is only one thread scanning for checks.
        with self.scanLock:
            if self.detected:
                return
            import_apps_submodule("identity_checks")
            self.detected = True


#: The global check pool, a instance of the :class:`IdentityCheckPool` class.
identity_check_pool = IdentityCheckPool()
