from simplicity_lab.exceptions import DomainError
from simplicity_lab.lattice import LatticeBox, TileGeometry, boundary_layer, enumerate_sites, neighbors, tile_of
from simplicity_lab.tests.utils import NumericTestCase


class LatticeBoxTests(NumericTestCase):
    """
    Indexing and neighbors of boxes.
    """

    def test_index_roundtrip(self):
        box = LatticeBox((-2, 1), (1, 3))
        self.assertEqual(box.size, 12)
        for i, site in enumerate(enumerate_sites(box)):
            self.assertEqual(box.index(site), i)
            self.assertEqual(box.site(i), site)

    def test_row_major_order(self):
        box = LatticeBox((0, 0), (1, 2))
        self.assertEqual(enumerate_sites(box)[:4], [(0, 0), (0, 1), (0, 2), (1, 0)])

    def test_invalid_box(self):
        self.assertRaises(DomainError, lambda: LatticeBox((0, 0), (1,)))
        self.assertRaises(DomainError, lambda: LatticeBox((2,), (1,)))
        self.assertRaises(DomainError, lambda: LatticeBox((0,), (3,)).index((4,)))

    def test_neighbors_truncate_at_boundary(self):
        box = LatticeBox.cube(2, 0, 2)
        self.assertEqual(len(neighbors((1, 1), box)), 4)
        self.assertEqual(sorted(neighbors((0, 0), box)), [(0, 1), (1, 0)])
        self.assertEqual(neighbors((0,), LatticeBox((0,), (0,))), [])

    def test_neighbor_relation_is_symmetric(self):
        box = LatticeBox((0, 0, 0), (2, 1, 2))
        for site in box.sites:
            for other in neighbors(site, box):
                self.assertIn(site, neighbors(other, box))


class TileGeometryTests(NumericTestCase):
    """
    Tiles, floor semantics and boundary layers.
    """

    def test_tile_of_negative_coordinates(self):
        geom = TileGeometry((2, 3))
        self.assertEqual(tile_of((-1, -1), geom), (-1, -1))
        self.assertEqual(tile_of((1, 2), geom), (0, 0))
        self.assertEqual(tile_of((2, 3), geom), (1, 1))
        self.assertEqual(geom.local((-1, -1)), (1, 2))

    def test_tiles_partition_the_box(self):
        geom = TileGeometry((2, 2))
        box = LatticeBox((-3, -2), (4, 3))
        tiles = geom.tiles_in_box(box)
        covered = geom.sites_in(tiles, box)
        self.assertEqual(sorted(covered), sorted(box.sites))
        for m in tiles:
            for site in geom.tile(m):
                self.assertEqual(geom.tile_of(site), m)

    def test_are_neighbors(self):
        geom = TileGeometry((2, 2))
        self.assertTrue(geom.are_neighbors((0, 0), (1, 0)))
        self.assertTrue(geom.are_neighbors((0, 0), (0, -1)))
        self.assertFalse(geom.are_neighbors((0, 0), (1, 1)))
        self.assertFalse(geom.are_neighbors((0, 0), (2, 0)))

    def test_boundary_layer(self):
        geom = TileGeometry((1, 1))
        box = LatticeBox.cube(2, -2, 2)
        layer = boundary_layer(geom, box, [(0, 0)])
        self.assertEqual(layer.inner, frozenset([(0, 0)]))
        self.assertEqual(len(layer.layer), 8)
        self.assertEqual(len(layer.exterior), 16)
        self.assertFalse(layer.layer & layer.exterior)

    def test_boundary_layer_rejects_outside_tiles(self):
        geom = TileGeometry((1,))
        self.assertRaises(DomainError, lambda: boundary_layer(geom, LatticeBox((0,), (3,)), [(9,)]))

    def test_invalid_period(self):
        self.assertRaises(DomainError, lambda: TileGeometry((0, 2)))

    def test_shell(self):
        geom = TileGeometry((1,))
        box = LatticeBox((-3,), (3,))
        self.assertEqual(geom.shell(box, 2), [(-2,), (2,)])
        self.assertEqual(geom.shell(box, 0), [(0,)])
