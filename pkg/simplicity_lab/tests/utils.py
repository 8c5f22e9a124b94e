import numpy as np
from django.test import SimpleTestCase


class NumericTestCase(SimpleTestCase):
    """
    Base class for the numerical tests; no database is touched.
    """

    def assertAllClose(self, actual, expected, rtol=1e-10, atol=1e-12, msg=None):
        actual = np.asarray(actual)
        expected = np.asarray(expected)
        self.assertEqual(actual.shape, expected.shape, msg)
        if not np.allclose(actual, expected, rtol=rtol, atol=atol):
            deviation = float(np.abs(actual - expected).max()) if actual.size else 0.0
            self.fail(msg or "Arrays differ by {0:.3g}:\n{1}\n!=\n{2}".format(deviation, actual, expected))

    @staticmethod
    def random_hermitian(rng, n, scale=1.0):
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        return scale * (A + A.conj().T) / 2
