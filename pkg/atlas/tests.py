# atlas/tests.py
import itertools

from django.test import SimpleTestCase

from arith.ratfun import ONE, ZERO, RatFun
from core.exceptions import NotAdmissible, ZeroPivot
from geniso.services import det_minor, from_matrix, gl_action, normal_form, validate_gi
from lattices.matrices import MatK
from reports.sampling import InstanceSampler

from .charts import (
    ChartAddress,
    decompose_matrix,
    ratio_generators,
    schur_coords,
    toric_point,
    valid_toric_indices,
)
from .diagonalize import (
    admissible_pairs,
    apply_diagonalization,
    diagonalize,
    find_admissible,
    split_first,
)
from .services import chart_locate, stratum

T = RatFun.t()


def tpow(k):
    return RatFun.monomial(k)


WORKED = MatK([[1, 1], [1, 1 + T]])
ANTIDIAGONAL = MatK([[0, 1], [T, 0]])


def recompose(x, alpha, beta):
    Y, D, Z = decompose_matrix(x, alpha, beta)
    return MatK.permutation(alpha) * Y * D * Z * MatK.permutation(beta).inv()


# ---------------------------------------------------------------
# Schur recursion
# ---------------------------------------------------------------
class SchurTests(SimpleTestCase):

    def test_worked_example(self):
        coords = schur_coords(WORKED)
        self.assertEqual(coords.y, {(2, 1): ONE})
        self.assertEqual(coords.z, {(1, 2): ONE})
        self.assertEqual(coords.t_over_t0, (ONE, T))

    def test_worked_decomposition(self):
        Y, D, Z = decompose_matrix(WORKED)
        self.assertEqual(Y, MatK([[1, 0], [1, 1]]))
        self.assertEqual(D, MatK.diag([1, T]))
        self.assertEqual(Z, MatK([[1, 1], [0, 1]]))
        self.assertEqual(Y * D * Z, WORKED)

    def test_diagonal_input(self):
        x = MatK.diag([tpow(-1), tpow(0), tpow(3)])
        coords = schur_coords(x)
        self.assertTrue(all(v.is_zero() for v in list(coords.y.values()) + list(coords.z.values())))
        self.assertEqual(coords.t_over_t0, (tpow(-1), ONE, tpow(3)))
        Y, _, Z = decompose_matrix(x)
        self.assertEqual(Y, MatK.identity(3))
        self.assertEqual(Z, MatK.identity(3))

    def test_zero_pivot(self):
        with self.assertRaises(ZeroPivot) as ctx:
            schur_coords(MatK([[0, 1], [1, 0]]))
        self.assertEqual(ctx.exception.k, 1)

    def test_permutation_moves_pivot(self):
        x = MatK([[0, 1], [1, 0]])
        coords = schur_coords(x, (2, 1), (1, 2))
        self.assertEqual(coords.t_over_t0, (ONE, ONE))
        self.assertEqual(recompose(x, (2, 1), (1, 2)), x)

    def test_random_matrices(self):
        """x = n_alpha Y D Z n_beta^-1 whenever the recursion succeeds."""
        sampler = InstanceSampler(seed=7)
        checked = 0
        for _ in range(6):
            x = sampler.matrix(3)
            alpha = tuple(sampler.rng.sample([1, 2, 3], 3))
            beta = tuple(sampler.rng.sample([1, 2, 3], 3))
            try:
                self.assertEqual(recompose(x, alpha, beta), x)
            except ZeroPivot:
                continue
            checked += 1
        self.assertGreater(checked, 0)

    def test_smallest_chart(self):
        """Ratios t^-2, t^-1 order the chart as t_1, t_2, t_0."""
        coords = schur_coords(MatK.diag([tpow(-2), tpow(-1)]))
        self.assertEqual(coords.l, 2)
        self.assertEqual(coords.t_ratios, (T, T))

    def test_chart_of_worked_example(self):
        coords = schur_coords(WORKED)
        self.assertEqual(coords.l, 0)
        self.assertEqual(coords.t_ratios, (ONE, T))


# ---------------------------------------------------------------
# Toric model
# ---------------------------------------------------------------
class ToricTests(SimpleTestCase):

    def test_valid_indices(self):
        self.assertEqual(valid_toric_indices([T, T], [ONE, ONE]), [2])
        self.assertEqual(valid_toric_indices([ONE, T], [ONE, tpow(2)]), [1])
        self.assertEqual(valid_toric_indices([ONE, ONE], [ONE, ONE]), [0, 1, 2])

    def test_lambda_sections_on_first_chart(self):
        lambdas = [T, tpow(2), ONE]
        point = toric_point([ONE] * 3, lambdas, [ONE] * 3, 0)
        self.assertEqual(point.a, tuple(lambdas))

    def test_mu_sections_on_last_chart(self):
        mus = [T, tpow(3), tpow(2)]
        point = toric_point(mus, [ONE] * 3, [ONE] * 3, 3)
        self.assertEqual(point.a, (mus[2], mus[1], mus[0]))

    def test_zero_section(self):
        point = toric_point([ONE, ZERO], [ONE, ZERO], [ONE, ONE], 1)
        self.assertEqual(point.a, (ZERO, ZERO))

    def test_agrees_with_ratios(self):
        phis = [ONE, RatFun.const(3)]
        for mus, lambdas in (([ONE, T], [ONE, tpow(2)]), ([ONE, RatFun.const(2)], [RatFun.const(5), ONE])):
            ratios = []
            for r in (1, 2):
                value = phis[r - 1]
                for lam in lambdas[:r]:
                    value = value * lam
                for mu in mus[: 2 - r + 1]:
                    value = value / mu
                ratios.append(value)
            charts = valid_toric_indices(mus, lambdas)
            self.assertTrue(charts)
            for l in charts:
                self.assertEqual(toric_point(mus, lambdas, phis, l).a, ratio_generators(ratios, l))

    def test_point_outside_chart(self):
        with self.assertRaises(ValueError):
            toric_point([T, T], [ONE, ONE], [ONE, ONE], 0)


# ---------------------------------------------------------------
# Admissibility and diagonalization
# ---------------------------------------------------------------
class AdmissibleTests(SimpleTestCase):

    def test_identity(self):
        self.assertEqual(find_admissible(from_matrix(MatK.identity(3))), ((1, 2, 3), (1, 2, 3)))

    def test_antidiagonal(self):
        """Only the unit entry in the first row can start the search."""
        phi = from_matrix(ANTIDIAGONAL)
        self.assertEqual(find_admissible(phi), ((1, 2), (2, 1)))
        self.assertEqual(admissible_pairs(phi), [((1, 2), (2, 1))])

    def test_worked_example(self):
        """The twist clears the factor t of the determinant."""
        phi = from_matrix(WORKED)
        self.assertEqual(find_admissible(phi), ((1, 2), (1, 2)))
        self.assertEqual(len(admissible_pairs(phi)), 4)

    def test_greedy_pair_is_admissible(self):
        sampler = InstanceSampler(seed=11)
        for n in (2, 3):
            phi = from_matrix(sampler.matrix(n))
            self.assertIn(find_admissible(phi), admissible_pairs(phi))


class DiagonalizeTests(SimpleTestCase):

    def assertDiagonalizes(self, phi, alpha=None, beta=None):
        d = diagonalize(phi, alpha, beta)
        report = apply_diagonalization(phi, d)
        self.assertTrue(report.passed, [item.name for item in report.failures])
        return d

    def test_normal_form(self):
        phis = [ONE, RatFun.const(2)]
        phi = normal_form(phis, [ONE, T], [ONE, T])
        d = self.assertDiagonalizes(phi)
        self.assertEqual(d.phi, tuple(phis))
        self.assertEqual(d.u, (MatK.identity(2),) * 3)
        self.assertEqual(d.v, (MatK.identity(2),) * 3)

    def test_degenerate_normal_form(self):
        phi = normal_form([ONE, RatFun.const(2)], [ONE, ZERO], [ONE, ZERO])
        self.assertTrue(validate_gi(phi).passed)
        d = self.assertDiagonalizes(phi)
        self.assertEqual(d.phi, (ONE, RatFun.const(2)))

    def test_sorted_diagonal(self):
        phi = from_matrix(MatK.diag([tpow(-2), tpow(-1)]))
        d = self.assertDiagonalizes(phi)
        self.assertTrue(all(phi.base.is_unit(x) for x in d.phi))

    def test_not_admissible(self):
        with self.assertRaises(NotAdmissible):
            diagonalize(from_matrix(ANTIDIAGONAL))

    def test_random_points(self):
        sampler = InstanceSampler(seed=23)
        for n in (2, 3):
            for _ in range(2):
                phi = from_matrix(sampler.matrix(n))
                alpha, beta = find_admissible(phi)
                self.assertDiagonalizes(phi, alpha, beta)

    def test_diagonalizable_exactly_at_admissible_pairs(self):
        """Every (alpha, beta) in S_n x S_n diagonalizes iff it is admissible."""
        sampler = InstanceSampler(seed=5)
        for n in (2, 3, 3, 3):
            phi = from_matrix(sampler.matrix(n))
            admissible = set(admissible_pairs(phi))
            permutations = list(itertools.permutations(range(1, n + 1)))
            for alpha, beta in itertools.product(permutations, repeat=2):
                with self.subTest(n=n, alpha=alpha, beta=beta):
                    if (alpha, beta) in admissible:
                        self.assertDiagonalizes(phi, alpha, beta)
                    else:
                        with self.assertRaises(NotAdmissible):
                            diagonalize(phi, alpha, beta)

    def test_unique(self):
        """The choice of complement bases does not show in the result."""
        sampler = InstanceSampler(seed=3)
        phi = from_matrix(sampler.matrix(3))
        alpha, beta = find_admissible(phi)
        first = diagonalize(phi, alpha, beta)
        self.assertEqual(first, diagonalize(phi, alpha, beta))
        self.assertEqual(first, diagonalize(phi, alpha, beta, order=(2, 1, 0)))

    def test_minor_factorization(self):
        """det_[1,r] phi = det_11 phi * det_[1,r-1] of the reduced point."""
        sampler = InstanceSampler(seed=17)
        phi = from_matrix(sampler.matrix(3))
        alpha, beta = find_admissible(phi)
        moved = gl_action(MatK.permutation(beta).inv(), MatK.permutation(alpha).inv(), phi)
        reduced = split_first(moved).reduced
        self.assertTrue(validate_gi(reduced).passed)
        first = det_minor(moved, (1,), (1,))
        for r in (2, 3):
            self.assertEqual(
                det_minor(moved, range(1, r + 1), range(1, r + 1)),
                first * det_minor(reduced, range(1, r), range(1, r)),
            )


# ---------------------------------------------------------------
# Chart location and strata
# ---------------------------------------------------------------
class ChartLocateTests(SimpleTestCase):

    def test_identity(self):
        address, coords, toric = chart_locate(from_matrix(MatK.identity(2)))
        self.assertEqual(address, ChartAddress(alpha=(1, 2), beta=(1, 2), l=0))
        self.assertEqual(toric.a, (ONE, ONE))
        self.assertEqual(coords.t_over_t0, (ONE, ONE))

    def test_negative_exponents(self):
        address, coords, toric = chart_locate(from_matrix(MatK.diag([tpow(-2), tpow(-1)])))
        self.assertEqual(address, ChartAddress(alpha=(1, 2), beta=(1, 2), l=2))
        self.assertEqual(toric.a, (T, T))
        self.assertEqual(coords.t_over_t0, (tpow(-2), tpow(-1)))

    def test_mixed_exponents(self):
        address, _, toric = chart_locate(from_matrix(MatK.diag([tpow(-1), tpow(2)])))
        self.assertEqual(address.l, 1)
        self.assertEqual(toric.a, (T, tpow(2)))

    def test_matches_schur_route(self):
        """Both routes give the same triangular factors and diagonal."""
        sampler = InstanceSampler(seed=29)
        for n in (2, 3):
            x = sampler.matrix(n)
            address, coords, toric = chart_locate(from_matrix(x))
            schur = schur_coords(x, address.alpha, address.beta)
            self.assertEqual(coords.y, schur.y)
            self.assertEqual(coords.z, schur.z)
            self.assertEqual(coords.t_over_t0, schur.t_over_t0)
            self.assertEqual(toric.a, ratio_generators(schur.t_over_t0, address.l))
            self.assertTrue(coords.in_chart(from_matrix(x).base))


class StratumTests(SimpleTestCase):

    def test_interior_point(self):
        index = stratum(from_matrix(MatK.identity(2)))
        self.assertEqual((index.I, index.J), (frozenset(), frozenset()))

    def test_diagonal_example(self):
        index = stratum(from_matrix(MatK.diag([tpow(-1), tpow(2)])))
        self.assertEqual((index.I, index.J), ({1}, {1}))

    def test_worked_example(self):
        index = stratum(from_matrix(WORKED))
        self.assertEqual((index.I, index.J), (frozenset(), {1}))

    def test_identically_zero_sections(self):
        index = stratum(normal_form([ONE, ONE], [ONE, ZERO], [ONE, ZERO]))
        self.assertEqual(index.zero_mu, {1})
        self.assertEqual(index.zero_lambda, {1})
        self.assertEqual(index.as_dict()["I"], [1])

    def test_disjoint_pattern(self):
        sampler = InstanceSampler(seed=31)
        for n in (2, 3, 4):
            phi = from_matrix(sampler.matrix(n))
            self.assertTrue(stratum(phi).is_disjoint_pattern(n))
