import numpy as np

from simplicity_lab.birman_schwinger import (
    bs_block, bs_boundary, bs_correspondence, case_i_check, case_ii_check, model_a_leading_order,
    neumann_remainder, offdiagonal_leading_order, simplicity_threshold_scan,
)
from simplicity_lab.exceptions import DomainError, NearSpectrum, PreconditionError
from simplicity_lab.lattice import LatticeBox, TileGeometry
from simplicity_lab.linalg import resolvent
from simplicity_lab.models import DisorderSpec, build_discrete_anderson, build_model_a, build_model_b, sample_omega
from simplicity_lab.tests.utils import NumericTestCase


def _chain(n=9, seed=0):
    box = LatticeBox((0,), (n - 1,))
    return build_discrete_anderson(box, np.random.default_rng(seed).uniform(0, 1, size=n))


def _case_i_model(seed=0):
    geom = TileGeometry((2, 2))
    box = LatticeBox.cube(2, -4, 5)
    omega = np.random.default_rng(seed).uniform(0, 1, size=len(geom.tiles_in_box(box)))
    return build_model_b(box, geom, [1.0, 2.0, 3.0, 4.0], omega)


class BSBlockTests(NumericTestCase):
    """
    Birman-Schwinger blocks and their basic properties.
    """

    def test_single_site_block_is_resolvent_entry(self):
        H = _chain()
        H0 = H.with_coupling((4,), 0.0)
        z = 0.3 + 0.7j
        block = bs_block(H0, H.coupling((4,)), z)
        self.assertEqual(block.block.shape, (1, 1))
        self.assertAllClose(block.block[0, 0], resolvent(H0.matrix, z)[4, 4])

    def test_herglotz(self):
        H = _case_i_model()
        H0 = H.with_coupling((0, 0), 0.0)
        for z in (0.5j, 1.0 + 2j, -3.0 + 0.1j):
            self.assertTrue(bs_block(H0, H.coupling((0, 0)), z).is_herglotz())

    def test_zero_coupling_gives_empty_block(self):
        H = _chain()
        block = bs_block(H, np.zeros((H.dimension, H.dimension)), 1j)
        self.assertEqual(block.block.shape, (0, 0))
        self.assertTrue(block.is_herglotz())

    def test_real_z_on_spectrum(self):
        H = _chain()
        E = np.linalg.eigvalsh(H.matrix)[3]
        self.assertRaises(NearSpectrum, lambda: bs_block(H, H.coupling((0,)), E))

    def test_boundary_value_outside_spectrum(self):
        H = _chain()
        result = bs_boundary(H, H.coupling((0,)), 5.0, [1e-2, 1e-4, 1e-6, 1e-8, 1e-10])
        self.assertTrue(result.converged)
        self.assertAllClose(result.block.block, result.real_block.block, rtol=1e-8, atol=1e-9)

    def test_boundary_value_rejects_bad_epsilons(self):
        H = _chain()
        self.assertRaises(PreconditionError, lambda: bs_boundary(H, H.coupling((0,)), 5.0, [1e-4, 1e-2]))

    def test_correspondence(self):
        H = _chain(seed=3)
        label = (4,)
        H0 = H.with_coupling(label, 0.0)
        V = H.coupling(label)
        for lam in (0.5, -2.0, 7.0):
            report = bs_correspondence(H.with_coupling(label, lam), H0, V, lam)
            self.assertTrue(report.passed(), report)
            self.assertGreater(len(report.residuals), 0)

    def test_correspondence_small_coupling_near_spectrum(self):
        # E sits a few 1e-6 from sigma(H_0); the double precision residual is far above 1e-10
        H = _chain(seed=3)
        label = (4,)
        lam = 2e-5
        report = bs_correspondence(H.with_coupling(label, lam), H.with_coupling(label, 0.0), H.coupling(label), lam)
        self.assertGreater(len(report.refined), 0)
        self.assertTrue(report.passed(), report)

    def test_correspondence_random_model_b(self):
        geom = TileGeometry((2, 2))
        box = LatticeBox.cube(2, 0, 5)
        tiles = geom.tiles_in_box(box)
        disorder = DisorderSpec(master_seed=5)
        tile = (0, 0)
        for trial in range(100):
            H = build_model_b(box, geom, np.ones(4), sample_omega(disorder, tiles, trial))
            lam = float(H.omega[H.labels.index(tile)])
            report = bs_correspondence(H, H.with_coupling(tile, 0.0), H.coupling(tile), lam)
            self.assertFalse(report.vanishing)
            self.assertLess(report.max_residual, 1e-8, "trial {0}, lambda {1}".format(trial, lam))

    def test_correspondence_preconditions(self):
        H = _chain()
        V = H.coupling((0,))
        self.assertRaises(PreconditionError, lambda: bs_correspondence(H, H, V, 0))
        self.assertRaises(PreconditionError, lambda: bs_correspondence(H.with_coupling((0,), 9.0), H, V, 1.0))

    def test_neumann_remainder(self):
        H = _chain()
        norm = np.linalg.norm(H.matrix, 2)
        result = neumann_remainder(H, 3j * norm, 3)
        self.assertLessEqual(result.remainder, result.bound * (1 + 1e-9))
        self.assertRaises(DomainError, lambda: neumann_remainder(H, 0.5 * norm, 3))


class AsymptoticsTests(NumericTestCase):
    """
    Large-|z| leading orders of the blocks.
    """

    def test_case_i(self):
        H = _case_i_model()
        table = case_i_check(H, [50j, 100j, 200j, 400j])
        self.assertLess(abs(table.slope + 1.0), 0.1)
        self.assertEqual(table.threshold, 50.0)

    def test_case_i_rejects_degenerate_profile(self):
        geom = TileGeometry((2,))
        box = LatticeBox((-4,), (5,))
        H = build_model_b(box, geom, [1.0, 1.0], np.ones(5))
        self.assertRaises(PreconditionError, lambda: case_i_check(H, [10j]))

    def test_case_ii(self):
        geom = TileGeometry((3, 1))
        box = LatticeBox((-6, -3), (8, 3))
        omega = np.random.default_rng(1).uniform(0, 1, size=len(geom.tiles_in_box(box)))
        H = build_model_b(box, geom, np.ones(3), omega)
        table = case_ii_check(H, [100j, 200j, 400j, 800j])
        self.assertLess(abs(table.slope + 1.0), 0.1)
        self.assertAllClose(table.limit, [[0, 1, 0], [1, 0, 1], [0, 1, 0]])

    def test_case_ii_needs_strip(self):
        self.assertRaises(DomainError, lambda: case_ii_check(_case_i_model(), [10j]))

    def test_model_a_leading_order(self):
        box = LatticeBox.cube(1, -3, 3)
        H = build_model_a(box, [[2.0, 1.0], [1.0, 3.0]], np.ones(box.size))
        table = model_a_leading_order(H, [50j, 100j, 200j, 400j])
        self.assertLess(abs(table.slope + 1.0), 0.1)
        self.assertTrue(all(row.simple for row in table.rows))

    def test_offdiagonal_leading_order_is_bounded(self):
        box = LatticeBox.cube(2, -5, 5)
        H = build_discrete_anderson(box, np.random.default_rng(2).uniform(0, 1, size=box.size))
        table = offdiagonal_leading_order(H, (1, 1), [20j, 40j, 80j, 160j])
        self.assertLessEqual(table.deviations[-1], 2.0 * table.deviations[0])

    def test_threshold_scan(self):
        H = _case_i_model()
        H0 = H.with_coupling((0, 0), 0.0)
        scan = simplicity_threshold_scan(H0, H.coupling((0, 0)), [400.0, 50.0, 100.0, 200.0])
        self.assertEqual(scan.magnitudes, (50.0, 100.0, 200.0, 400.0))
        self.assertTrue(scan.persistent)
        self.assertEqual(scan.threshold, 50.0)
