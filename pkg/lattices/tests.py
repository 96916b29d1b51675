# lattices/tests.py
from django.test import SimpleTestCase

from arith.ratfun import INFINITY, ONE, ZERO, RatFun
from core.exceptions import Singular, SizeMismatch
from reports.sampling import InstanceSampler

from .bases import DVR, FIELD
from .fields import as_field_matrix, complement, field_image, field_kernel, field_rank, same_subspace, subspace_intersection
from .lattice import Lattice, image, intersect, lattice_sum, preimage
from .matrices import MatK, compound, index_sets, minor
from .normalforms import hnf_dvr, is_unimodular, smith_dvr, smith_reduce

T = RatFun.t()


def tpow(k):
    return RatFun.monomial(k)


# ---------------------------------------------------------------
# Minors and compounds
# ---------------------------------------------------------------
class MinorTests(SimpleTestCase):

    def setUp(self):
        self.m = MatK([[1, 1], [1, 1 + T]])

    def test_examples(self):
        self.assertEqual(minor(self.m, [1, 2], [1, 2]), T)
        self.assertEqual(minor(self.m, [1], [1]), ONE)
        self.assertEqual(minor(MatK.identity(3), [1, 3], [1, 2]), ZERO)

    def test_size_mismatch(self):
        with self.assertRaises(SizeMismatch):
            minor(self.m, [1], [1, 2])
        with self.assertRaises(SizeMismatch):
            minor(self.m, [1, 2, 3], [1, 2, 3])


class CompoundTests(SimpleTestCase):

    def test_diagonal(self):
        a, b, c = T, 1 + T, tpow(-1)
        self.assertEqual(compound(MatK.diag([a, b, c]), 2), MatK.diag([a * b, a * c, b * c]))

    def test_top_power_is_determinant(self):
        m = InstanceSampler(seed=2).matrix(3)
        self.assertEqual(compound(m, 3), MatK([[m.det()]]))

    def test_cauchy_binet(self):
        sampler = InstanceSampler(seed=8)
        for _ in range(3):
            m, n = sampler.matrix(3), sampler.matrix(3)
            for r in (1, 2):
                self.assertEqual(compound(m * n, r), compound(m, r) * compound(n, r))

    def test_index_sets_lexicographic(self):
        self.assertEqual(index_sets(3, 2), [(1, 2), (1, 3), (2, 3)])


# ---------------------------------------------------------------
# Smith form
# ---------------------------------------------------------------
class SmithTests(SimpleTestCase):

    def assertSmith(self, phi, data):
        n = phi.rows
        self.assertEqual(data.U * phi * data.V, MatK.diag([tpow(k) for k in data.m]))
        self.assertTrue(is_unimodular(data.U))
        self.assertTrue(is_unimodular(data.V))
        self.assertEqual(list(data.m), sorted(data.m))
        self.assertEqual(len(data.m), n)

    def test_identity(self):
        data = smith_dvr(MatK.identity(3))
        self.assertEqual(data.m, (0, 0, 0))
        self.assertEqual(data.U, MatK.identity(3))
        self.assertEqual(data.V, MatK.identity(3))

    def test_permuted_diagonal(self):
        phi = MatK.diag([tpow(2), tpow(-1)])
        data = smith_dvr(phi)
        self.assertEqual(data.m, (-1, 2))
        self.assertSmith(phi, data)

    def test_worked_example(self):
        phi = MatK([[1, 1], [1, 1 + T]])
        data = smith_dvr(phi)
        self.assertEqual(data.m, (0, 1))
        self.assertSmith(phi, data)

    def test_singular(self):
        with self.assertRaises(Singular):
            smith_dvr(MatK([[1, 1], [1, 1]]))

    def test_minor_oracle(self):
        """m_1 + ... + m_r is the minimal valuation of an r x r minor."""
        sampler = InstanceSampler(seed=21)
        for n in (2, 3):
            for _ in range(6):
                phi = sampler.matrix(n)
                data = smith_dvr(phi)
                self.assertSmith(phi, data)
                for r in range(1, n + 1):
                    best = min(
                        minor(phi, a, b).tval()
                        for a in index_sets(n, r) for b in index_sets(n, r)
                    )
                    self.assertEqual(sum(data.m[:r]), best)

    def test_field_base_gives_rank(self):
        phi = as_field_matrix([[1, 2], [2, 4]])
        self.assertEqual(smith_reduce(phi, FIELD).rank, 1)


# ---------------------------------------------------------------
# Hermite form and lattices
# ---------------------------------------------------------------
class HermiteTests(SimpleTestCase):

    def test_diagonal_basis_unchanged(self):
        basis = MatK.diag([tpow(-1), ONE, tpow(3)])
        self.assertEqual(hnf_dvr(basis), basis)

    def test_scaled_lattice(self):
        self.assertEqual(hnf_dvr(MatK([[T, T * T], [0, T]])), MatK.scalar(2, T))

    def test_invariant_under_unimodular_change(self):
        sampler = InstanceSampler(seed=13)
        for _ in range(5):
            basis = sampler.matrix(3)
            self.assertEqual(hnf_dvr(basis * sampler.unimodular(3)), hnf_dvr(basis))


class LatticeTests(SimpleTestCase):

    def test_sum_is_idempotent(self):
        lattice = Lattice.from_basis(InstanceSampler(seed=4).matrix(2))
        self.assertEqual(lattice_sum(lattice, lattice), lattice)

    def test_nested_intersection(self):
        outer = Lattice.standard(2)
        inner = Lattice.standard(2, 1)
        self.assertEqual(intersect(outer, inner), inner)
        self.assertEqual(lattice_sum(outer, inner), outer)
        self.assertTrue(outer.contains(inner.basis))
        self.assertFalse(inner.contains(outer.basis))

    def test_preimage_meets_standard_lattice(self):
        phi = MatK.diag([tpow(-1), tpow(2)])
        result = intersect(preimage(phi, Lattice.standard(2)), Lattice.standard(2))
        self.assertEqual(result, Lattice.from_basis(MatK.diag([T, ONE])))
        self.assertEqual(image(phi, result), Lattice.from_basis(MatK.diag([ONE, tpow(2)])))

    def test_image_of_singular_map(self):
        with self.assertRaises(Singular):
            image(MatK([[1, 1], [1, 1]]), Lattice.standard(2))

    def test_modular_law(self):
        """L1 <= L2 implies L1 + (L2 & L3) = L2 & (L1 + L3)."""
        sampler = InstanceSampler(seed=17)
        for _ in range(4):
            l2 = Lattice.from_basis(sampler.matrix(2))
            l1 = Lattice.from_basis(l2.basis * sampler.integral_matrix(2))
            l3 = Lattice.from_basis(sampler.matrix(2))
            self.assertTrue(l2.contains(l1.basis))
            self.assertEqual(
                lattice_sum(l1, intersect(l2, l3)),
                intersect(l2, lattice_sum(l1, l3)),
            )


# ---------------------------------------------------------------
# Residue field linear algebra
# ---------------------------------------------------------------
class FieldLinearAlgebraTests(SimpleTestCase):

    def test_rank_of_identity(self):
        self.assertEqual(field_rank(MatK.identity(4)), 4)

    def test_kernel(self):
        kernel = field_kernel(as_field_matrix([[1, 1], [1, 1]]))
        self.assertEqual(kernel, as_field_matrix([[1], [-1]]))

    def test_image(self):
        span = field_image(as_field_matrix([[1, 1], [1, 1]]))
        self.assertEqual(span, as_field_matrix([[1], [1]]))

    def test_image_dimension_is_rank(self):
        sampler = InstanceSampler(seed=11)
        for rows, cols in [(2, 3), (3, 3), (4, 2)]:
            m = sampler.rational_matrix(rows, cols)
            self.assertEqual(field_image(m).cols, field_rank(m))
            self.assertTrue(same_subspace(field_image(m), m))

    def test_rank_nullity(self):
        sampler = InstanceSampler(seed=9)
        for rows, cols in [(2, 3), (3, 3), (4, 2)]:
            m = sampler.rational_matrix(rows, cols)
            self.assertEqual(field_rank(m) + field_kernel(m).cols, cols)

    def test_intersection_and_complement(self):
        plane = as_field_matrix([[1, 0], [0, 1], [0, 0]])
        other = as_field_matrix([[0, 0], [1, 0], [0, 1]])
        line = subspace_intersection(plane, other)
        self.assertEqual(line, as_field_matrix([[0], [1], [0]]))
        self.assertEqual(complement(line, plane), as_field_matrix([[1], [0], [0]]))

    def test_valuation_of_zero_matrix(self):
        self.assertEqual(MatK.zeros(2, 2).min_tval(), INFINITY)
        self.assertTrue(DVR.is_unit(1 + T))
