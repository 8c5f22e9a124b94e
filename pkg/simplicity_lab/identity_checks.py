"""
The identity checks of the laboratory.

Each check recomputes an exact identity or a proven asymptotic statement on a small
instance and returns its deviation. They are registered in the
:attr:`~simplicity_lab.extensions.identity_check_pool` and run by
:func:`~simplicity_lab.experiments.verify_identity_suite`.
"""
import numpy as np
import scipy.linalg

from simplicity_lab.birman_schwinger import (
    bs_block, bs_correspondence, case_i_check, case_ii_check, case_iii_matrices,
    case_iii_random_environment, case_iii_splitting, model_a_leading_order, offdiagonal_leading_order,
)
from simplicity_lab.cyclicity import (
    coupling_limit, eigenprojection_transfer, resolvent_span, two_tile_span, weak_cyclicity_check,
)
from simplicity_lab.extensions import IdentityCheck, identity_check_pool
from simplicity_lab.lattice import LatticeBox, TileGeometry
from simplicity_lab.linalg import PolyCoeffs, discriminant, discriminant_from_eigenvalues, resolvent_identity_residual, sylvester_matrix
from simplicity_lab.models import (
    DisorderSpec, build_discrete_anderson, build_model_a, build_model_b, hopping_power_block,
    shortest_path_count,
)


def _ratio_deviation(table):
    """
    Largest relative departure of consecutive deviation ratios from 2.
    """
    return float(np.max(np.abs(table.ratios() - 2.0)) / 2.0)


def _random_model_b(rng, box, period, f=None, lo=0.0, hi=1.0):
    geom = TileGeometry(period)
    f = np.ones(geom.tile_size) if f is None else f
    omega = rng.uniform(lo, hi, size=len(geom.tiles_in_box(box)))
    return build_model_b(box, geom, f, omega)


class CaseIIIMatrixCheck(IdentityCheck):
    """
    A compression of the two-site operator to ``C_0``, in the symmetry basis, at several ``(a, b)``.
    """
    key = None
    points = ((1.0, 0.0), (2.0, 3.0), (-1.0, 4.0))
    sort_priority = 10

    def expected_for(self, a, b):
        raise NotImplementedError

    def computed(self, matrices):
        return matrices.as_dict()[self.key]

    def run(self, seed):
        deviation = 0.0
        for a, b in self.points:
            computed = self.computed(case_iii_matrices(a, b))
            deviation = max(deviation, float(np.abs(computed - self.expected_for(a, b)).max()))
        return deviation


@identity_check_pool.register
class ChiH0ChiCheck(CaseIIIMatrixCheck):
    name = 'case_iii.chi_h0_chi'
    anchor = "two-site block: first Neumann coefficient chi h0 chi"
    key = 'chi_h0_chi'
    expected = np.diag([2.0, -2.0, 0.0, 0.0])

    def expected_for(self, a, b):
        return self.expected


@identity_check_pool.register
class ChiH0SquaredChiCheck(CaseIIIMatrixCheck):
    name = 'case_iii.chi_h0^2_chi'
    anchor = "two-site block: chi h0^2 chi"
    key = 'chi_h0^2_chi'

    def expected_for(self, a, b):
        return np.diag([6.0, 6.0, 2.0, 2.0])


@identity_check_pool.register
class ChiH0CubedChiCheck(CaseIIIMatrixCheck):
    name = 'case_iii.chi_h0^3_chi'
    anchor = "two-site block: chi h0^3 chi"
    key = 'chi_h0^3_chi'

    def expected_for(self, a, b):
        return np.diag([18.0, -18.0, 0.0, 0.0])


@identity_check_pool.register
class ChiH0VH0ChiCheck(CaseIIIMatrixCheck):
    name = 'case_iii.chi_h0_V_h0_chi'
    anchor = "two-site block: chi h0 V h0 chi, the coefficient of 1/(2 z^2)"
    key = 'chi_h0_V_h0_chi'

    def expected_for(self, a, b):
        s = a + b
        return 0.5 * np.array([
            [s, 0.0, a, b],
            [0.0, s, b, a],
            [a, b, s, 0.0],
            [b, a, 0.0, s],
        ])


@identity_check_pool.register
class FourthOrderBlockCheck(CaseIIIMatrixCheck):
    name = 'case_iii.fourth_order_block'
    anchor = "two-site block: splitting block diag(a - b, b - a) of the fourth-order term"

    def computed(self, matrices):
        return matrices.splitting_block

    def expected_for(self, a, b):
        return np.diag([a - b, b - a])


@identity_check_pool.register
class CaseIIISplittingCheck(IdentityCheck):
    """
    Deviation of the rescaled gap from 1 at ``|z| = 80``; the sequence must decrease and the
    truncation radius must survive doubling.
    """
    name = 'case_iii.splitting'
    anchor = "two-site block: eigenvalue pair splits as +-(a - b)/z^3"
    tolerance = 0.5
    sort_priority = 20

    def run(self, seed):
        table = case_iii_splitting(1.0, 0.0, [20j, 40j, 80j], R=12, check_doubling=True)
        if not table.decreasing or max(row.truncation_change for row in table.rows) > 1e-8:
            return np.inf
        return table.deviations[-1]


@identity_check_pool.register
class CaseIIIEnvironmentCheck(IdentityCheck):
    name = 'case_iii.random_environment'
    anchor = "two-site block stays simple when random couplings are added far away"
    tolerance = 1e-8
    sort_priority = 20

    def run(self, seed):
        disorder = DisorderSpec(lo=0.0, hi=1.0, master_seed=int(seed))
        report = case_iii_random_environment(1.0, 0.0, 20j, [1, 2, 3, 4, 5], disorder, R=12)
        if not report.passed:
            return np.inf
        return max(row.identity_residual for row in report.rows)


@identity_check_pool.register
class CaseICheck(IdentityCheck):
    name = 'bs.case_i'
    anchor = "Birman-Schwinger block of a tile tends to f with an O(1/|z|) remainder"
    tolerance = 0.2
    sort_priority = 30

    def run(self, seed):
        H = _random_model_b(self.rng(seed), LatticeBox.cube(2, -4, 5), (2, 2), f=[1.0, 2.0, 3.0, 4.0])
        return _ratio_deviation(case_i_check(H, [50j, 100j, 200j]))


@identity_check_pool.register
class CaseIICheck(IdentityCheck):
    """
    Remainder halving on a strip tile, plus exact equality of the limit with the Jacobi matrix.
    """
    name = 'bs.case_ii'
    anchor = "rescaled strip block tends to the Jacobi matrix of the tile"
    tolerance = 0.2
    sort_priority = 30

    def run(self, seed):
        H = _random_model_b(self.rng(seed), LatticeBox((-6, -3), (8, 3)), (3, 1))
        table = case_ii_check(H, [50j, 100j, 200j])
        jacobi = np.diag(np.ones(2), 1) + np.diag(np.ones(2), -1)
        return _ratio_deviation(table) + float(np.abs(table.limit - jacobi).max())


@identity_check_pool.register
class ModelALeadingOrderCheck(IdentityCheck):
    name = 'bs.model_a_leading_order'
    anchor = "-z V0^(1/2) (H - z)^-1 V0^(1/2) tends to W"
    tolerance = 0.2
    sort_priority = 30

    def run(self, seed):
        box = LatticeBox.cube(2, -2, 2)
        omega = self.rng(seed).uniform(0.0, 1.0, size=box.size)
        omega[box.index((0, 0))] = 1.0
        H = build_model_a(box, [[2.0, 1.0], [1.0, 3.0]], omega)
        return _ratio_deviation(model_a_leading_order(H, [50j, 100j, 200j]))


@identity_check_pool.register
class OffDiagonalLeadingOrderCheck(IdentityCheck):
    """
    Largest scaled remainder relative to the one at ``|z| = 50``, over several ``j``.
    """
    name = 'bs.offdiagonal_leading_order'
    anchor = "P_j (H - z)^-1 P_0 = -C_j z^-(|j|+1) + O(z^-(|j|+2)) with C_j the shortest path count"
    tolerance = 2.0
    sort_priority = 30

    def run(self, seed):
        if shortest_path_count((1, 1)) != 2 or shortest_path_count((2, 1)) != 3:
            return np.inf
        box = LatticeBox.cube(2, -6, 6)
        H = build_discrete_anderson(box, self.rng(seed).uniform(0.0, 1.0, size=box.size))
        growth = 0.0
        for j in ((1, 0), (1, 1), (2, 1), (3, 0)):
            table = offdiagonal_leading_order(H, j, [50j, 100j, 200j, 400j])
            growth = max(growth, float(table.deviations.max() / table.deviations[0]))
        return growth


@identity_check_pool.register
class HoppingPowerCheck(IdentityCheck):
    name = 'models.hopping_powers'
    anchor = "P_j H^n P_0 vanishes below n = |j| and equals C_j at n = |j|"
    sort_priority = 40

    def run(self, seed):
        box = LatticeBox.cube(2, -4, 4)
        H = build_discrete_anderson(box, self.rng(seed).uniform(0.0, 1.0, size=box.size))
        deviation = 0.0
        for j in ((1, 0), (1, 1), (2, 1), (0, 3)):
            ell = sum(abs(x) for x in j)
            for n in range(ell):
                deviation = max(deviation, float(np.abs(hopping_power_block(H, j, n)).max()))
            block = hopping_power_block(H, j, ell)
            deviation = max(deviation, float(np.abs(block - shortest_path_count(j)).max()))
        return deviation


@identity_check_pool.register
class DiscriminantCheck(IdentityCheck):
    """
    Sylvester route against the product of squared gaps on well separated random matrices,
    plus the exact value ``F(x^2 - 1) = 4``.
    """
    name = 'linalg.discriminant'
    anchor = "(-1)^(k(k-1)/2) det S(p, p') equals the product of squared eigenvalue gaps"
    tolerance = 1e-6
    sort_priority = 40

    def run(self, seed):
        rng = self.rng(seed)
        deviation = 0.0
        for _ in range(50):
            k = int(rng.integers(2, 7))
            A = rng.standard_normal((k, k))
            values = scipy.linalg.eigvals(A)
            gaps = np.abs(values[:, None] - values[None, :])[np.triu_indices(k, 1)]
            if gaps.min() <= 1e-2 * gaps.max():
                continue
            exact = discriminant_from_eigenvalues(values)
            deviation = max(deviation, abs(discriminant(A) - exact) / abs(exact))

        S = sylvester_matrix(PolyCoeffs(np.array([-1.0, 0.0, 1.0])))
        deviation = max(deviation, abs(-np.linalg.det(S) - 4.0))
        return deviation


@identity_check_pool.register
class ModelADirectSumCheck(IdentityCheck):
    name = 'models.model_a_direct_sum'
    anchor = "Model A with diagonal W is the direct sum of scalar Anderson models"
    sort_priority = 40

    def run(self, seed):
        box = LatticeBox.cube(2, 0, 3)
        omega = self.rng(seed).uniform(0.0, 1.0, size=box.size)
        H = build_model_a(box, np.diag([1.0, 2.0]), omega)
        merged = np.sort(np.concatenate([
            scipy.linalg.eigvalsh(build_discrete_anderson(box, w * omega).matrix) for w in (1.0, 2.0)
        ]))
        return float(np.abs(scipy.linalg.eigvalsh(H.matrix) - merged).max())


@identity_check_pool.register
class ResolventIdentityCheck(IdentityCheck):
    name = 'linalg.resolvent_identity'
    anchor = "(H_l - z)^-1 = (H_m - z)^-1 - (l - m) (H_l - z)^-1 V (H_m - z)^-1"
    sort_priority = 40

    def run(self, seed):
        H = _random_model_b(self.rng(seed), LatticeBox.cube(2, 0, 5), (2, 2))
        V = H.coupling((1, 1)).matrix
        H_mu = H.with_coupling((1, 1), 0.25)
        H_lam = H.with_coupling((1, 1), 1.75)
        return resolvent_identity_residual(H_lam.matrix, H_mu.matrix, V, 1.75, 0.25, 0.3 + 0.7j)


@identity_check_pool.register
class HerglotzCheck(IdentityCheck):
    """
    Most negative eigenvalue of ``Im G(z)`` over a few points of the upper half plane.
    """
    name = 'bs.herglotz'
    anchor = "Im G(z) is positive semidefinite for Im z > 0"
    sort_priority = 50

    def run(self, seed):
        H = _random_model_b(self.rng(seed), LatticeBox.cube(2, 0, 5), (2, 2))
        H0 = H.with_coupling((1, 1), 0.0)
        V = H.coupling((1, 1))
        negative = 0.0
        for z in (0.5j, 1.0 + 2.0j, -3.0 + 0.1j):
            block = bs_block(H0, V, z)
            negative = max(negative, -float(scipy.linalg.eigvalsh(block.imaginary_part)[0]))
        return negative


@identity_check_pool.register
class BSCorrespondenceCheck(IdentityCheck):
    name = 'bs.correspondence'
    anchor = "H_0 + lambda V u = E u iff G(E) sqrt(V) u = -sqrt(V) u / lambda"
    tolerance = 1e-8
    sort_priority = 50
    instances = 100

    def run(self, seed):
        rng = self.rng(seed)
        tile = (0, 0)
        residual = 0.0
        for _ in range(self.instances):
            H = _random_model_b(rng, LatticeBox.cube(2, 0, 5), (2, 2))
            lam = float(H.omega[H.labels.index(tile)])
            report = bs_correspondence(H, H.with_coupling(tile, 0.0), H.coupling(tile), lam)
            if report.vanishing:
                return np.inf
            residual = max(residual, report.max_residual)
        return residual


@identity_check_pool.register
class EigenprojectionTransferCheck(IdentityCheck):
    name = 'cyclicity.eigenprojection_transfer'
    anchor = "P_e P_Y = -(lambda - mu) P_e V (H_mu - e)^-1 P_Y"
    tolerance = 1e-8
    sort_priority = 60

    def run(self, seed):
        H = _random_model_b(self.rng(seed), LatticeBox.cube(2, 0, 3), (2, 2))
        V = H.coupling((0, 0))
        H_mu = H.with_coupling((0, 0), 0.3)
        H_lam = H.with_coupling((0, 0), 1.7)
        report = eigenprojection_transfer(H_lam, H_mu, V, 1.7, 0.3, H.range_indices((1, 1)))
        return report.max_residual


@identity_check_pool.register
class TwoTileSpanCheck(IdentityCheck):
    """
    Missing rank summed over several tile shapes with ``f = 1`` and over random positive profiles.
    """
    name = 'cyclicity.two_tile_span'
    anchor = "the two-tile resolvent blocks over mu span l^2(C)"
    tolerance = 0.0
    sort_priority = 60

    geometries = (
        ((1,), (0,), (1,)),
        ((2,), (0,), (1,)),
        ((2, 2), (0, 0), (1, 0)),
        ((3, 2), (0, 0), (1, 0)),
    )

    def run(self, seed):
        rng = self.rng(seed)
        missing = 0
        for period, m, m_prime in self.geometries:
            geom = TileGeometry(period)
            result = two_tile_span(geom, m, m_prime, np.ones(geom.tile_size), 1.0 + 1.0j, seed=int(rng.integers(2 ** 32)))
            missing += result.target_dim - result.achieved_rank
        geom = TileGeometry((2, 2))
        for _ in range(20):
            f = rng.uniform(0.5, 2.0, size=geom.tile_size)
            result = two_tile_span(geom, (0, 0), (0, 1), f, 1.0 + 1.0j, seed=int(rng.integers(2 ** 32)))
            missing += result.target_dim - result.achieved_rank
        return float(missing)


@identity_check_pool.register
class CouplingLimitCheck(IdentityCheck):
    """
    Distance of the fitted log-log slope from -1; fails outright unless the deviations decrease
    and end below ``1e-4``.
    """
    name = 'cyclicity.coupling_limit'
    anchor = "large couplings on the boundary layer decouple the two-tile resolvent block"
    tolerance = 0.2
    sort_priority = 60

    def run(self, seed):
        geom = TileGeometry((2, 2))
        box = LatticeBox.cube(2, -4, 5)
        omega = self.rng(seed).uniform(0.0, 1.0, size=len(geom.tiles_in_box(box)))
        table = coupling_limit(geom, box, (0, 0), (1, 0), 0.7, [1e2, 1e3, 1e4, 1e5, 1e6], omega, 1.0 + 1.0j)
        if not (table.monotone and table.converged):
            return np.inf
        return abs(table.slope + 1.0)


@identity_check_pool.register
class WeakCyclicityCheck(IdentityCheck):
    name = 'cyclicity.weak_cyclicity'
    anchor = "every eigenvector lies in the reducing subspace generated by the range of V"
    tolerance = 1e-8
    sort_priority = 70

    def run(self, seed):
        H = _random_model_b(self.rng(seed), LatticeBox.cube(2, 0, 3), (2, 2), f=[1.0, 1.3, 1.7, 2.2])
        report = weak_cyclicity_check(H, H.coupling((0, 0)))
        return float(report.distances.max())


@identity_check_pool.register
class ResolventSpanCheck(IdentityCheck):
    name = 'cyclicity.resolvent_span'
    anchor = "the resolvent span of a set equals its Krylov space"
    tolerance = 1e-8
    sort_priority = 70

    def run(self, seed):
        H = _random_model_b(self.rng(seed), LatticeBox.cube(2, 0, 3), (2, 2))
        equivalence = resolvent_span(H, H.coupling((0, 0)).basis)
        if equivalence.krylov_dim != equivalence.resolvent_dim:
            return np.inf
        return max(equivalence.krylov_in_resolvent, equivalence.resolvent_in_krylov)
