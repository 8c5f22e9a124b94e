import numpy as np

from simplicity_lab.exceptions import DomainError
from simplicity_lab.lattice import LatticeBox, TileGeometry
from simplicity_lab.models import (
    Coupling, DisorderLaw, DisorderSpec, ModelKind, ModelSpec, build_discrete_anderson, build_model_a,
    build_model_b, build_two_site, build_two_tile, covering_defect, hopping_matrix, hopping_power_block,
    sample_omega, shortest_path_count,
)
from simplicity_lab.tests.utils import NumericTestCase


class HamiltonianTests(NumericTestCase):
    """
    Assembly of the finite-volume Hamiltonians.
    """

    def test_hopping_is_adjacency(self):
        box = LatticeBox.cube(2, 0, 2)
        h = hopping_matrix(box)
        self.assertAllClose(h, h.T)
        self.assertEqual(h.sum(), 2 * 12)
        self.assertEqual(h[box.index((1, 1))].sum(), 4)
        self.assertEqual(h[box.index((0, 0)), box.index((1, 0))], 1.0)

    def test_discrete_anderson(self):
        box = LatticeBox((0,), (3,))
        H = build_discrete_anderson(box, [1.0, 2.0, 3.0, 4.0])
        self.assertAllClose(np.diagonal(H.matrix), [1.0, 2.0, 3.0, 4.0])
        self.assertAllClose(H.matrix, H.matrix.T)
        self.assertRaises(DomainError, lambda: build_discrete_anderson(box, [1.0]))

    def test_with_coupling_removes_term(self):
        box = LatticeBox((0,), (2,))
        H = build_discrete_anderson(box, [1.0, 2.0, 3.0])
        H0 = H.with_coupling((1,), 0.0)
        self.assertAllClose(H.matrix - H0.matrix, 2.0 * H.coupling((1,)).matrix)
        self.assertEqual(H.omega[1], 2.0)

    def test_model_a_eigenbasis(self):
        box = LatticeBox((0,), (1,))
        W = [[2.0, 1.0], [1.0, 2.0]]
        H = build_model_a(box, W, [1.0, 1.0])
        self.assertEqual(H.dimension, 4)
        self.assertAllClose(H.term((0,)).profile, np.diag([1.0, 3.0]))
        H_raw = build_model_a(box, W, [1.0, 1.0], eigenbasis=False)
        self.assertAllClose(np.linalg.eigvalsh(H.matrix), np.linalg.eigvalsh(H_raw.matrix), atol=1e-12)

    def test_model_a_rejects_indefinite(self):
        box = LatticeBox((0,), (1,))
        self.assertRaises(DomainError, lambda: build_model_a(box, [[1.0, 2.0], [2.0, 1.0]], [1.0, 1.0]))
        self.assertRaises(DomainError, lambda: build_model_a(box, [[1.0, 2.0], [0.0, 1.0]], [1.0, 1.0]))

    def test_model_b_tiles_cover_box(self):
        geom = TileGeometry((2, 1))
        box = LatticeBox((-2, 0), (3, 2))
        tiles = geom.tiles_in_box(box)
        H = build_model_b(box, geom, [1.0, 2.0], np.ones(len(tiles)))
        self.assertEqual(covering_defect(H), 0.0)
        self.assertAllClose(np.diagonal(H.potential), [1.0 if x % 2 == 0 else 2.0 for x, _ in box.sites])

    def test_model_b_dict_omega(self):
        geom = TileGeometry((1, 1))
        box = LatticeBox.cube(2, -1, 1)
        H = build_model_b(box, geom, [1.0], {(0, 0): 5.0})
        self.assertEqual(np.count_nonzero(H.omega), 1)
        self.assertEqual(H.matrix[box.index((0, 0)), box.index((0, 0))], 5.0)

    def test_model_b_rejects_bad_profile(self):
        geom = TileGeometry((2,))
        box = LatticeBox((0,), (3,))
        self.assertRaises(DomainError, lambda: build_model_b(box, geom, [1.0, 0.0], [1.0, 1.0]))
        self.assertRaises(DomainError, lambda: build_model_b(box, geom, [1.0], [1.0, 1.0]))

    def test_two_site(self):
        H = build_two_site(2.0, 3.0, R=4)
        self.assertEqual(H.kind, ModelKind.TWO_SITE)
        self.assertEqual(H.box.shape, (10, 10))
        self.assertEqual(H.matrix[H.box.index((0, 2)), H.box.index((0, 2))], 2.0)
        self.assertEqual(H.matrix[H.box.index((-1, 0)), H.box.index((-1, 0))], 3.0)
        self.assertEqual(H.matrix[H.box.index((0, 0)), H.box.index((0, 0))], 0.0)
        self.assertRaises(DomainError, lambda: build_two_site(1.0, 0.0, R=3))

    def test_two_tile(self):
        geom = TileGeometry((2, 2))
        H = build_two_tile(geom, (0, 0), (1, 0), 1.5, [1.0, 2.0, 3.0, 4.0])
        self.assertEqual(H.dimension, 8)
        self.assertAllClose(np.diagonal(H.potential)[:4], 1.5 * np.array([1.0, 2.0, 3.0, 4.0]))
        self.assertAllClose(np.diagonal(H.potential)[4:], 0.0)
        self.assertRaises(DomainError, lambda: build_two_tile(geom, (0, 0), (1, 1), 1.0, np.ones(4)))


class CouplingTests(NumericTestCase):

    def test_sqrt_and_basis(self):
        V = Coupling.from_block(4, [1, 2], np.diag([4.0, 9.0]))
        self.assertEqual(V.rank, 2)
        self.assertAllClose(V.sqrt @ V.sqrt, V.matrix)
        self.assertAllClose(V.basis[[1, 2]], np.eye(2))
        self.assertAllClose(V.restricted, np.diag([4.0, 9.0]))

    def test_singular_block_uses_eigenbasis(self):
        V = Coupling.from_block(3, [0, 1], np.ones((2, 2)))
        self.assertEqual(V.rank, 1)
        self.assertAllClose(V.basis.T @ V.basis, np.eye(1))

    def test_zero_coupling(self):
        V = Coupling.from_matrix(np.zeros((3, 3)))
        self.assertEqual(V.rank, 0)

    def test_rejects_negative(self):
        self.assertRaises(DomainError, lambda: Coupling.from_matrix(np.diag([1.0, -1.0])))


class PathTests(NumericTestCase):
    """
    Shortest path counts and Neumann powers.
    """

    def test_shortest_path_count(self):
        self.assertEqual(shortest_path_count((1, 0)), 1)
        self.assertEqual(shortest_path_count((1, 1)), 2)
        self.assertEqual(shortest_path_count((2, -2)), 6)
        self.assertEqual(shortest_path_count((1, 1, 1)), 6)
        self.assertRaises(DomainError, lambda: shortest_path_count((0, 0)))

    def test_hopping_power_counts_paths(self):
        box = LatticeBox.cube(2, -4, 4)
        H = build_discrete_anderson(box, np.zeros(box.size))
        for j in ((1, 0), (1, 1), (2, 1), (-2, 2)):
            ell = sum(abs(x) for x in j)
            self.assertAllClose(hopping_power_block(H, j, ell), [[shortest_path_count(j)]])
            self.assertAllClose(hopping_power_block(H, j, ell - 1), [[0.0]])


class DisorderTests(NumericTestCase):
    """
    Reproducible sampling of the couplings.
    """

    def test_same_trial_same_sample(self):
        spec = DisorderSpec(master_seed=42)
        self.assertAllClose(sample_omega(spec, 10, 3), sample_omega(spec, 10, 3))
        self.assertFalse(np.allclose(sample_omega(spec, 10, 3), sample_omega(spec, 10, 4)))

    def test_support(self):
        spec = DisorderSpec(law=DisorderLaw.TRUNCATED_GAUSSIAN, lo=-1.0, hi=2.0, mean=0.0, sd=3.0, master_seed=1)
        values = sample_omega(spec, 1000, 0)
        self.assertTrue(np.all(values >= -1.0) and np.all(values <= 2.0))
        self.assertGreater(spec.density_bound, 0.0)

    def test_uniform_moments(self):
        spec = DisorderSpec(lo=1.0, hi=3.0)
        self.assertEqual(spec.law_mean, 2.0)
        self.assertAlmostEqual(spec.law_variance, 1.0 / 3.0)
        self.assertEqual(spec.density_bound, 0.5)

    def test_invalid_spec(self):
        self.assertRaises(DomainError, lambda: DisorderSpec(lo=1.0, hi=1.0))
        self.assertRaises(DomainError, lambda: DisorderSpec(law='cauchy'))
        self.assertRaises(DomainError, lambda: DisorderSpec(master_seed=-1))
        self.assertRaises(DomainError, lambda: DisorderSpec().rng(-1))


class ModelSpecTests(NumericTestCase):

    def test_model_b_labels_and_build(self):
        spec = ModelSpec(kind=ModelKind.MODEL_B, box=LatticeBox((0, 0), (3, 3)), period=(2, 2))
        self.assertEqual(len(spec.labels), 4)
        self.assertEqual(spec.f, (1.0, 1.0, 1.0, 1.0))
        H = spec.build(np.arange(4.0))
        self.assertEqual(H.dimension, 16)

    def test_two_site_box_follows_radius(self):
        spec = ModelSpec(kind=ModelKind.TWO_SITE, R=5)
        self.assertEqual(spec.box.shape, (12, 12))
        self.assertEqual(spec.labels, [])

    def test_invalid_specs(self):
        self.assertRaises(DomainError, lambda: ModelSpec(kind=ModelKind.MODEL_B, box=LatticeBox((0,), (3,))))
        self.assertRaises(DomainError, lambda: ModelSpec(kind=ModelKind.MODEL_B, box=LatticeBox((0,), (3,)), period=(2, 2)))
        self.assertRaises(DomainError, lambda: ModelSpec(kind='continuum', box=LatticeBox((0,), (3,))))
        self.assertRaises(DomainError, lambda: ModelSpec(kind=ModelKind.DISCRETE))
