from unittest import mock

import numpy as np

from simplicity_lab.exceptions import PreconditionError
from simplicity_lab.experiments import verify_identity_suite
from simplicity_lab.extensions import (
    IdentityCheck, IdentityCheckAlreadyRegistered, IdentityCheckNotFound, IdentityCheckPool, identity_check_pool,
)
from simplicity_lab.identity_checks import ChiH0ChiCheck
from simplicity_lab.tests.utils import NumericTestCase


class ConstantCheck(IdentityCheck):
    name = 'test.constant'
    anchor = "a constant deviation"
    tolerance = 1e-3

    def run(self, seed):
        return 1e-4


class RaisingCheck(IdentityCheck):
    name = 'test.raising'

    def run(self, seed):
        raise PreconditionError("not applicable")


class CheckPoolTests(NumericTestCase):
    """
    Registration of identity checks.
    """

    def test_register_and_lookup(self):
        pool = IdentityCheckPool()
        pool.detected = True
        self.assertIs(pool.register(ConstantCheck), ConstantCheck)
        self.assertIsInstance(pool.get_check('test.constant'), ConstantCheck)
        self.assertRaises(IdentityCheckAlreadyRegistered, lambda: pool.register(ConstantCheck))
        pool.unregister('test.constant')
        self.assertRaises(IdentityCheckNotFound, lambda: pool.get_check('test.constant'))
        self.assertRaises(IdentityCheckNotFound, lambda: pool.unregister('test.constant'))

    def test_register_requires_subclass(self):
        self.assertRaises(AssertionError, lambda: IdentityCheckPool().register(object))

    def test_ledger_order(self):
        pool = IdentityCheckPool()
        pool.detected = True
        pool.register(RaisingCheck)
        pool.register(ConstantCheck)
        self.assertEqual([c.check_name for c in pool.get_checks()], ['test.constant', 'test.raising'])

    def test_installed_checks_are_found(self):
        names = [check.check_name for check in identity_check_pool.get_checks()]
        self.assertIn('case_iii.chi_h0_chi', names)
        self.assertIn('cyclicity.coupling_limit', names)
        self.assertEqual(len(names), len(set(names)))

    def test_check_rng_depends_on_seed_and_name(self):
        check = ConstantCheck()
        self.assertEqual(check.rng(3).integers(1 << 30), ConstantCheck().rng(3).integers(1 << 30))
        self.assertNotEqual(check.rng(3).integers(1 << 30), RaisingCheck().rng(3).integers(1 << 30))


class EvaluateTests(NumericTestCase):
    """
    Turning check outcomes into ledger entries.
    """

    def test_passing_entry(self):
        entry = ConstantCheck().evaluate(0)
        self.assertTrue(entry.passed)
        self.assertEqual(entry.deviation, 1e-4)
        self.assertIsNone(entry.error)

    def test_errors_fail_the_entry(self):
        with self.assertLogs('simplicity_lab.extensions.checkbase', level='WARNING'):
            entry = RaisingCheck().evaluate(0)
        self.assertFalse(entry.passed)
        self.assertIsNone(entry.deviation)
        self.assertIn('PreconditionError', entry.error)

    def test_mutated_expectation_fails(self):
        """
        Changing one expected entry of the first Neumann coefficient must fail its ledger line.
        """
        ledger = verify_identity_suite(seed=1, names=['case_iii.chi_h0_chi'])
        self.assertTrue(ledger.passed)

        with mock.patch.object(ChiH0ChiCheck, 'expected', np.diag([2.0, -2.0, 0.0, 1.0])):
            ledger = verify_identity_suite(seed=1, names=['case_iii.chi_h0_chi'])
        self.assertFalse(ledger.passed)
        self.assertAlmostEqual(ledger.get('case_iii.chi_h0_chi').deviation, 1.0)
