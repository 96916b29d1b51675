# geniso/tests.py
from dataclasses import replace

from django.test import SimpleTestCase

from arith.ratfun import ONE, ZERO, RatFun
from bf.morphisms import BfMorphism, LineWithSection
from core.exceptions import NotAUnit, UnsupportedDegenerate
from lattices.lattice import Lattice, image, intersect, lattice_sum, preimage
from lattices.matrices import MatK, compound, index_sets, minor
from lattices.normalforms import smith_dvr
from reports.sampling import InstanceSampler

from .chains import TwistedScalar
from .services import (
    clear_twist,
    closed_fibre,
    det_minor,
    equivalent,
    from_matrix,
    generic_map,
    gl_action,
    lattice_chain,
    matrix_data,
    normal_form,
    validate_gi,
    wedge_phi,
)

T = RatFun.t()


def tpow(k):
    return RatFun.monomial(k)


WORKED = MatK([[1, 1], [1, 1 + T]])
DIAGONAL = MatK.diag([tpow(-1), tpow(2)])


# ---------------------------------------------------------------
# Validation
# ---------------------------------------------------------------
class ValidateGenIsoTests(SimpleTestCase):

    def test_from_matrix_passes(self):
        self.assertTrue(validate_gi(from_matrix(DIAGONAL)).passed)

    def test_non_unit_iso_fails(self):
        phi = replace(from_matrix(DIAGONAL), iso=MatK.diag([1, T]))
        report = validate_gi(phi)
        self.assertFalse(report.passed)
        self.assertIn("iso-unit", [item.name for item in report.failures])

    def test_identity_point_of_gl1(self):
        step = BfMorphism(n=1, r=0, mu=LineWithSection(ONE), fwd=MatK([[1]]), bwd=MatK([[1]]))
        phi = normal_form([ONE], [ONE], [ONE])
        self.assertTrue(validate_gi(replace(phi, gs=(step,), hs=(step,))).passed)

    def test_wrong_rank_tag(self):
        phi = from_matrix(DIAGONAL)
        g = phi.gs[1]
        broken = replace(phi, gs=(phi.gs[0], replace(g, r=0)))
        self.assertIn("g1.rank-tag", [item.name for item in validate_gi(broken).failures])

    def test_oblique_condition_failure(self):
        """Both chains collapse the same line at the closed point."""
        phi = normal_form([ONE, ONE], [ONE, T], [ONE, T])
        g0 = BfMorphism(
            n=2, r=0, mu=LineWithSection(T, "mu0"),
            fwd=MatK.diag([T, T]), bwd=MatK.identity(2),
        )
        report = validate_gi(replace(phi, gs=(g0, phi.gs[1])))
        self.assertFalse(report.passed)
        self.assertIn("oblique-e@closed", [item.name for item in report.failures])

    def test_random_matrices(self):
        sampler = InstanceSampler(seed=41)
        for n in (2, 3):
            for _ in range(3):
                self.assertTrue(validate_gi(from_matrix(sampler.matrix(n))).passed)

    def test_degenerate_normal_form(self):
        phi = normal_form([ONE, ONE], [ONE, ZERO], [ONE, ZERO])
        self.assertTrue(validate_gi(phi).passed)


# ---------------------------------------------------------------
# Construction from a matrix
# ---------------------------------------------------------------
class FromMatrixTests(SimpleTestCase):

    def test_identity(self):
        phi = from_matrix(MatK.identity(2))
        self.assertEqual(phi.mus, [ONE, ONE])
        self.assertEqual(phi.lambdas, [ONE, ONE])
        self.assertEqual(phi.iso, MatK.identity(2))
        for step in phi.gs + phi.hs:
            self.assertEqual(step.fwd, MatK.identity(2))

    def test_diagonal_example(self):
        data = matrix_data(DIAGONAL)
        self.assertEqual(data.m, (-1, 2))
        self.assertEqual(data.a, (0, 0, 1))
        self.assertEqual(data.b, (0, 0, 2))
        phi = from_matrix(DIAGONAL)
        self.assertEqual(phi.mus, [ONE, T])
        self.assertEqual(phi.lambdas, [ONE, T ** 2])

    def test_worked_example(self):
        data = matrix_data(WORKED)
        self.assertEqual((data.m, data.a, data.b), ((0, 1), (0, 0, 0), (0, 0, 1)))
        phi = from_matrix(WORKED)
        self.assertEqual(phi.mus, [ONE, ONE])
        self.assertEqual(phi.lambdas, [ONE, T])

    def test_generic_map_is_input(self):
        sampler = InstanceSampler(seed=43)
        for _ in range(3):
            m = sampler.matrix(3)
            self.assertEqual(generic_map(from_matrix(m)), m)

    def test_lattice_identities(self):
        """E_n = phi^-1(A^n) & A^n, F_n = phi(E_n), E_i = E_n + t^a_i A^n, F_i = F_n + t^b_i A^n."""
        sampler = InstanceSampler(seed=47)
        for n in (2, 3):
            m = sampler.matrix(n)
            data = matrix_data(m)
            chain = lattice_chain(from_matrix(m))
            standard = Lattice.standard(n)
            e_n = intersect(preimage(m, standard), standard)
            self.assertEqual(chain.e[n], e_n)
            self.assertEqual(chain.f[n], image(m, e_n))
            for i in range(n + 1):
                self.assertEqual(chain.e[i], lattice_sum(e_n, Lattice.standard(n, data.a[i])))
                self.assertEqual(chain.f[i], lattice_sum(chain.f[n], Lattice.standard(n, data.b[i])))

    def test_closed_fibre(self):
        fibre = closed_fibre(from_matrix(DIAGONAL))
        self.assertTrue(fibre.base.is_field)
        self.assertEqual(fibre.mus, [ONE, ZERO])
        self.assertEqual(fibre.lambdas, [ONE, ZERO])
        self.assertTrue(validate_gi(fibre).passed)


# ---------------------------------------------------------------
# Exterior powers and twisted minors
# ---------------------------------------------------------------
class WedgePhiTests(SimpleTestCase):

    def test_identity_matrix(self):
        phi = from_matrix(MatK.identity(3))
        for r in (1, 2, 3):
            self.assertEqual(wedge_phi(phi, r).matrix, MatK.identity(len(index_sets(3, r))))

    def test_top_power_is_determinant(self):
        m = InstanceSampler(seed=53).matrix(3)
        phi = from_matrix(m)
        wedge = wedge_phi(phi, 3)
        self.assertEqual(wedge.matrix.shape, (1, 1))
        self.assertEqual(clear_twist(det_minor(phi, [1, 2, 3], [1, 2, 3]), phi), m.det())

    def test_diagonal_minors(self):
        phi = from_matrix(DIAGONAL)
        self.assertEqual(clear_twist(det_minor(phi, [1], [1]), phi), tpow(-1))
        self.assertEqual(clear_twist(det_minor(phi, [1, 2], [1, 2]), phi), T)
        self.assertEqual(det_minor(phi, [1], [2]).value, ZERO)

    def test_twist_record(self):
        twist = det_minor(from_matrix(DIAGONAL), [1], [1]).twist
        self.assertEqual(dict(twist.exponents), {"mu0": 1, "mu1": 1, "lambda0": -1})
        self.assertEqual(twist.degree, 1)

    def test_minors_match_compound(self):
        """After clearing twists every twisted minor is the minor of the generic map."""
        sampler = InstanceSampler(seed=59)
        m = sampler.matrix(3)
        phi = from_matrix(m)
        for r in (1, 2, 3):
            wedge = wedge_phi(phi, r)
            factor = clear_twist(TwistedScalar(value=ONE, twist=wedge.twist), phi)
            self.assertEqual(wedge.matrix * factor, compound(m, r))
        self.assertEqual(clear_twist(det_minor(phi, [1, 3], [2, 3]), phi), minor(m, [1, 3], [2, 3]))

    def test_zero_section_cannot_be_cleared(self):
        phi = normal_form([ONE, ONE], [ONE, ZERO], [ONE, ZERO])
        with self.assertRaises(UnsupportedDegenerate):
            clear_twist(det_minor(phi, [1], [1]), phi)


# ---------------------------------------------------------------
# Group action and equivalence
# ---------------------------------------------------------------
class GroupActionTests(SimpleTestCase):

    def test_identity_action(self):
        phi = from_matrix(WORKED)
        self.assertEqual(gl_action(MatK.identity(2), MatK.identity(2), phi), phi)

    def test_not_a_unit(self):
        with self.assertRaises(NotAUnit):
            gl_action(MatK.diag([T, 1]), MatK.identity(2), from_matrix(WORKED))

    def test_invariants_preserved(self):
        sampler = InstanceSampler(seed=61)
        m = sampler.matrix(3)
        phi = from_matrix(m)
        for _ in range(3):
            u, v = sampler.unimodular(3), sampler.unimodular(3)
            moved = gl_action(u, v, phi)
            self.assertTrue(validate_gi(moved).passed)
            self.assertEqual(generic_map(moved), v * m * u.inv())
            self.assertEqual(smith_dvr(generic_map(moved)).m, smith_dvr(m).m)

    def test_composition_order(self):
        sampler = InstanceSampler(seed=67)
        phi = from_matrix(sampler.matrix(2))
        u1, v1, u2, v2 = (sampler.unimodular(2) for _ in range(4))
        self.assertEqual(
            gl_action(u2, v2, gl_action(u1, v1, phi)),
            gl_action(u2 * u1, v2 * v1, phi),
        )


class EquivalenceTests(SimpleTestCase):

    def test_reflexive(self):
        phi = from_matrix(WORKED)
        self.assertTrue(equivalent(phi, phi))

    def test_choice_of_bases(self):
        """Moving the matrix by unimodular changes and undoing them gives an equivalent point."""
        sampler = InstanceSampler(seed=71)
        m = sampler.matrix(2)
        p, q = sampler.unimodular(2), sampler.unimodular(2)
        moved = gl_action(q, p.inv(), from_matrix(p * m * q))
        self.assertTrue(equivalent(moved, from_matrix(m)))

    def test_different_invariants(self):
        other = MatK.diag([tpow(-2), tpow(2)])
        self.assertFalse(equivalent(from_matrix(DIAGONAL), from_matrix(other)))

    def test_degenerate_refused(self):
        phi = normal_form([ONE, ONE], [ONE, ZERO], [ONE, ZERO])
        with self.assertRaises(UnsupportedDegenerate):
            equivalent(phi, phi)
