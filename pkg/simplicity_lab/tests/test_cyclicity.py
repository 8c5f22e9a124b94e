import numpy as np

from simplicity_lab.cyclicity import (
    coupling_independence, coupling_limit, eigenprojection_transfer, krylov_reducing, resolvent_span,
    span_condition, two_tile_span, weak_cyclicity_check,
)
from simplicity_lab.exceptions import PreconditionError
from simplicity_lab.lattice import LatticeBox, TileGeometry
from simplicity_lab.models import build_discrete_anderson, build_model_a, build_model_b, build_two_tile
from simplicity_lab.tests.utils import NumericTestCase


def _model_b(seed=0, box=None, period=(2, 2), f=None):
    geom = TileGeometry(period)
    box = box or LatticeBox.cube(2, 0, 3)
    f = np.ones(geom.tile_size) if f is None else f
    omega = np.random.default_rng(seed).uniform(0, 1, size=len(geom.tiles_in_box(box)))
    return build_model_b(box, geom, f, omega)


class ReducingSubspaceTests(NumericTestCase):
    """
    Krylov spaces and weak cyclicity.
    """

    def test_end_of_chain_is_cyclic(self):
        box = LatticeBox((0,), (7,))
        H = build_discrete_anderson(box, np.random.default_rng(0).uniform(0, 1, size=8))
        subspace = krylov_reducing(H, np.eye(8)[:, 0])
        self.assertEqual(subspace.dim, 8)
        self.assertLess(subspace.invariance_residual, 1e-10)

    def test_invariant_subspace(self):
        H = _model_b(f=[1.0, 1.3, 1.7, 2.2])
        subspace = krylov_reducing(H, H.coupling((0, 0)).basis)
        self.assertLess(subspace.invariance_residual, 1e-8)

    def test_weak_cyclicity_of_tile_coupling(self):
        H = _model_b(seed=1, f=[1.0, 1.3, 1.7, 2.2])
        report = weak_cyclicity_check(H, H.coupling((0, 0)))
        self.assertTrue(report.passed)
        self.assertEqual(report.deficiency, 0)

    def test_one_channel_is_not_enough(self):
        # The channels of Model A decouple in the eigenbasis of W.
        box = LatticeBox((0,), (4,))
        H = build_model_a(box, [[1.0, 0.0], [0.0, 2.5]], np.random.default_rng(2).uniform(0, 1, size=5))
        V = np.zeros((H.dimension, H.dimension))
        V[0, 0] = 1.0
        report = weak_cyclicity_check(H, V)
        self.assertFalse(report.passed)
        self.assertEqual(report.subspace_dim, 5)
        self.assertEqual(report.deficiency, 5)

    def test_coupling_independence(self):
        H = _model_b(seed=3)
        V = H.coupling((1, 1))
        report = coupling_independence(H.with_coupling((1, 1), 0.0), V, [0.0, 0.5, 3.0])
        self.assertTrue(report.independent())

    def test_resolvent_span_equals_krylov(self):
        H = _model_b(seed=4)
        self.assertTrue(resolvent_span(H, H.coupling((0, 0)).basis).equivalent())


class SpanConditionTests(NumericTestCase):
    """
    Rank of stacked resolvent blocks between neighboring tiles.
    """

    def test_two_tile_span(self):
        for period, m, m_prime in (((1,), (0,), (1,)), ((2, 2), (0, 0), (1, 0)), ((3, 2), (0, 0), (1, 0))):
            geom = TileGeometry(period)
            result = two_tile_span(geom, m, m_prime, np.ones(geom.tile_size), 1.0 + 1.0j, seed=5)
            self.assertTrue(result.passed, (period, result))
            self.assertEqual(result.target_dim, geom.tile_size)

    def test_explicit_mu_list(self):
        geom = TileGeometry((2, 2))
        result = two_tile_span(geom, (0, 0), (1, 0), [1.0, 2.0, 3.0, 4.0], 1.0 + 1.0j, mu_list=[1.0, 1.5, 2.0, 2.5])
        self.assertEqual(result.mu_values, (1.0, 1.5, 2.0, 2.5))
        self.assertTrue(result.passed)

    def test_empty_mu_list(self):
        geom = TileGeometry((2,))
        result = two_tile_span(geom, (0,), (1,), [1.0, 1.0], 1.0 + 1.0j, mu_list=[])
        self.assertEqual(result.achieved_rank, 0)
        self.assertFalse(result.passed)

    def test_preconditions(self):
        geom = TileGeometry((2,))
        H = build_two_tile(geom, (0,), (1,), 0.0, [1.0, 1.0])
        V = H.coupling((0,))
        self.assertRaises(PreconditionError, lambda: span_condition(H, [0, 1], [2], 1j, [1.0], V))
        self.assertRaises(PreconditionError, lambda: span_condition(H, [0, 1], [2, 3], 1.0, [1.0], V))
        self.assertRaises(PreconditionError, lambda: span_condition(H, [0, 1], [2, 3], 1.0 - 1j, [1.0], V))


class CouplingLimitTests(NumericTestCase):

    def test_layer_coupling_decouples(self):
        geom = TileGeometry((2, 2))
        box = LatticeBox.cube(2, -2, 3)
        omega = np.random.default_rng(6).uniform(0, 1, size=len(geom.tiles_in_box(box)))
        table = coupling_limit(geom, box, (0, 0), (1, 0), 0.7, [1e2, 1e3, 1e4, 1e5], omega, 1.0 + 1.0j)
        self.assertTrue(table.monotone)
        self.assertTrue(table.converged)
        self.assertLess(abs(table.slope + 1.0), 0.2)

    def test_lambda_list_must_increase(self):
        geom = TileGeometry((1,))
        box = LatticeBox((-3,), (4,))
        self.assertRaises(PreconditionError, lambda: coupling_limit(geom, box, (0,), (1,), 1.0, [1e3, 1e2], np.zeros(8), 1j))


class EigenprojectionTransferTests(NumericTestCase):

    def test_transfer_identity(self):
        H = _model_b(seed=7)
        V = H.coupling((0, 0))
        report = eigenprojection_transfer(H.with_coupling((0, 0), 1.7), H.with_coupling((0, 0), 0.3), V, 1.7, 0.3, H.range_indices((1, 1)))
        self.assertGreater(len(report.residuals), 0)
        self.assertLess(report.max_residual, 1e-8)

    def test_requires_distinct_couplings(self):
        H = _model_b()
        V = H.coupling((0, 0))
        self.assertRaises(PreconditionError, lambda: eigenprojection_transfer(H, H, V, 1.0, 1.0, [0]))
