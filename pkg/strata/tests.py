# strata/tests.py
from dataclasses import replace

from django.test import SimpleTestCase

from arith.ratfun import ONE, ZERO, RatFun
from core.exceptions import Inconsistent, InvalidStratumData, TypeMismatch
from geniso.services import closed_fibre, from_matrix, gl_action, validate_gi
from lattices.fields import as_field_matrix, same_subspace
from lattices.matrices import MatK, compound
from reports.sampling import InstanceSampler

from .collineations import (
    cc_to_tk,
    cc_to_vainsencher,
    check_vainsencher,
    collineation_class,
    collineation_from_matrix,
    diagonal_collineation,
    validate_cc,
    vainsencher_type,
)
from .grassmann import grass_fibre_check, grass_point, pluecker_coordinates, subbundle_matrix
from .services import (
    decompose_stratum,
    flag_dims,
    orbit_representative,
    recompose_stratum,
    same_decomposition,
    same_point,
    stratum_patterns,
)
from .subspaces import Flag, projective_normal

T = RatFun.t()


def flattened(matrix):
    return projective_normal(MatK([matrix.entries()], cols=matrix.rows * matrix.cols))


def e(n, *indices):
    """Columns e_i (1-based) of Q^n."""
    return MatK.identity(n).columns([i - 1 for i in indices])


# ---------------------------------------------------------------
# Flags
# ---------------------------------------------------------------
class FlagTests(SimpleTestCase):

    def test_pieces(self):
        flag = Flag(dims=(0, 1, 3), steps=(e(3), e(3, 3), MatK.identity(3)))
        self.assertTrue(flag.is_consistent())
        first, second = flag.pieces()
        self.assertEqual(first, e(3, 3))
        self.assertEqual(second, e(3, 1, 2))
        self.assertEqual(flag.adapted_basis(), MatK.hstack(e(3, 3), e(3, 1, 2)))

    def test_not_nested(self):
        flag = Flag(dims=(0, 1, 1, 3), steps=(e(3), e(3, 1), e(3, 2), MatK.identity(3)))
        self.assertFalse(flag.is_consistent())

    def test_projective_normal(self):
        self.assertEqual(projective_normal(as_field_matrix([[0, 2], [4, 6]])), as_field_matrix([[0, 1], [2, 3]]))
        self.assertTrue(projective_normal(MatK.zeros(2, 2)).is_zero())


# ---------------------------------------------------------------
# Complete collineations
# ---------------------------------------------------------------
class CollineationTests(SimpleTestCase):

    def setUp(self):
        self.matrix = as_field_matrix([[1, 2], [3, 4]])
        self.interior = collineation_from_matrix(self.matrix)
        self.degenerate = diagonal_collineation([ZERO, ZERO])

    def test_interior_point(self):
        self.assertTrue(validate_cc(self.interior).passed)
        self.assertEqual(vainsencher_type(self.interior), ())
        self.assertEqual(collineation_class(self.interior), self.matrix)

    def test_class_is_projective(self):
        scaled = collineation_from_matrix(self.matrix * RatFun.const(5))
        self.assertEqual(collineation_class(scaled), collineation_class(self.interior))

    def test_first_section_must_vanish(self):
        report = validate_cc(diagonal_collineation([ONE, ONE]))
        self.assertFalse(report.passed)
        self.assertIn("lambda0-zero", [item.name for item in report.failures])

    def test_degenerate_chain(self):
        self.assertTrue(validate_cc(self.degenerate).passed)
        self.assertEqual(vainsencher_type(self.degenerate), (1,))

    # ---- Type R ----

    def test_vainsencher_full_rank(self):
        data = cc_to_vainsencher(self.interior, R=())
        self.assertEqual(data.R, ())
        self.assertEqual(data.ranks, (2,))
        self.assertEqual(data.maps[0], self.matrix)
        self.assertTrue(check_vainsencher(data).passed)

    def test_vainsencher_rank_drop(self):
        """v_0 has rank 1, its kernel is E_1 and v_1 is an isomorphism of lines."""
        data = cc_to_vainsencher(self.degenerate, R=(1,))
        self.assertEqual(data.ranks, (1, 1))
        self.assertEqual(data.e_spaces[1].cols, 1)
        self.assertEqual(data.maps[1], MatK.identity(1))
        report = check_vainsencher(data)
        self.assertTrue(report.passed, [item.name for item in report.failures])

    def test_vainsencher_type_mismatch(self):
        with self.assertRaises(TypeMismatch):
            cc_to_vainsencher(self.interior, R=(1,))

    def test_vainsencher_on_larger_chain(self):
        cc = diagonal_collineation([ZERO, ONE, ZERO, ONE])
        data = cc_to_vainsencher(cc)
        self.assertEqual(data.R, (2,))
        self.assertEqual(data.ranks, (2, 2))
        self.assertTrue(check_vainsencher(data).passed)

    # ---- Bilinear forms ----

    def test_tk_rows_are_compounds(self):
        matrix = as_field_matrix([[1, 2, 0], [0, 1, 3], [4, 0, 1]])
        tk = cc_to_tk(collineation_from_matrix(matrix))
        self.assertEqual(len(tk.rows), 3)
        self.assertEqual(tk.rows[0], flattened(matrix))
        self.assertEqual(tk.rows[1], flattened(compound(matrix, 2)))
        self.assertEqual(tk.rows[2], MatK.identity(1))

    def test_tk_rows_nonzero_on_boundary(self):
        tk = cc_to_tk(self.degenerate)
        self.assertTrue(all(not row.is_zero() for row in tk.rows))


# ---------------------------------------------------------------
# Strata
# ---------------------------------------------------------------
class PatternTests(SimpleTestCase):

    def test_patterns_for_rank_two(self):
        patterns = stratum_patterns(2)
        self.assertEqual(len(patterns), 8)
        self.assertIn(((1,), (1,)), patterns)
        self.assertNotIn(((0,), (1,)), patterns)

    def test_representative_needs_min_sum(self):
        with self.assertRaises(InvalidStratumData):
            orbit_representative(2, (0,), (1,))

    def test_representatives_are_valid(self):
        for n in (1, 2, 3):
            for I, J in stratum_patterns(n):
                report = validate_gi(orbit_representative(n, I, J))
                self.assertTrue(report.passed, (n, I, J, [item.name for item in report.failures]))


class DecomposeTests(SimpleTestCase):

    def assertPartsValid(self, dec):
        for cc in dec.phis + dec.psis:
            self.assertTrue(validate_cc(cc).passed)
        self.assertTrue(validate_gi(dec.core).passed)

    def test_interior_point(self):
        """With nothing vanishing the core is the point itself."""
        phi = closed_fibre(from_matrix(MatK.identity(2)))
        dec = decompose_stratum(phi)
        self.assertEqual((dec.I, dec.J), ((), ()))
        self.assertEqual((dec.phis, dec.psis), ((), ()))
        self.assertEqual(dec.core, phi)
        self.assertEqual(recompose_stratum(dec), phi)

    def test_diagonal_example(self):
        dec = decompose_stratum(from_matrix(MatK.diag([RatFun.monomial(-1), RatFun.monomial(2)])))
        self.assertEqual((dec.I, dec.J), ((1,), (1,)))
        self.assertEqual([cc.n for cc in dec.phis], [1])
        self.assertEqual([cc.n for cc in dec.psis], [1])
        self.assertEqual(dec.core.n, 0)
        self.assertEqual(dec.e_flag.dims, (0, 1, 1, 2))
        self.assertEqual(dec.f_flag.dims, (0, 1, 1, 2))
        self.assertPartsValid(dec)

    def test_rank_three_boundary(self):
        dec = decompose_stratum(orbit_representative(3, (2,), (1,)))
        self.assertEqual(dec.core.n, 0)
        self.assertEqual([cc.n for cc in dec.phis], [1])
        self.assertEqual([cc.n for cc in dec.psis], [2])
        self.assertEqual(dec.e_flag.dims, (0, 2, 2, 3))
        self.assertEqual(dec.f_flag.dims, (0, 1, 1, 3))
        self.assertPartsValid(dec)

    def test_flag_types(self):
        """delta_q = n - d_{r+s+1-q} for every pattern."""
        for n in (2, 3):
            for I, J in stratum_patterns(n):
                dec = decompose_stratum(orbit_representative(n, I, J))
                self.assertEqual(dec.e_flag.dims, flag_dims(n, I, J))
                self.assertEqual(dec.f_flag.dims, tuple(n - d for d in reversed(dec.e_flag.dims)))
                self.assertEqual(dec.core.n, min(I, default=n) + min(J, default=n) - n)
                self.assertPartsValid(dec)

    def test_declared_pattern_must_match(self):
        with self.assertRaises(InvalidStratumData):
            decompose_stratum(orbit_representative(2, (1,), (1,)), I=(), J=(1,))

    def test_flags_move_with_the_group(self):
        sampler = InstanceSampler(seed=3)
        representative = orbit_representative(3, (1,), (2,))
        model = decompose_stratum(representative)
        u, v = sampler.invertible_rational_matrix(3), sampler.invertible_rational_matrix(3)
        dec = decompose_stratum(gl_action(u, v, representative))
        self.assertTrue(dec.e_flag.same_as(model.e_flag.moved(u)))
        self.assertTrue(dec.f_flag.same_as(model.f_flag.moved(v)))


class RecomposeTests(SimpleTestCase):

    def test_round_trip(self):
        """Random points of every stratum come back from their decomposition."""
        sampler = InstanceSampler(seed=5)
        for n in (2, 3):
            for I, J in stratum_patterns(n):
                u, v = sampler.invertible_rational_matrix(n), sampler.invertible_rational_matrix(n)
                phi = gl_action(u, v, orbit_representative(n, I, J))
                dec = decompose_stratum(phi)
                back = recompose_stratum(dec)
                self.assertTrue(same_point(back, phi), (I, J))
                self.assertEqual(grass_point(back).coordinates, grass_point(phi).coordinates)
                self.assertTrue(same_decomposition(decompose_stratum(back), dec))

    def test_scalars_act_trivially_on_closed_orbit(self):
        representative = orbit_representative(2, (1,), (1,))
        scaled = gl_action(MatK.scalar(2, RatFun.const(2)), MatK.identity(2), representative)
        self.assertTrue(same_point(scaled, representative))

    def test_scalars_move_interior_points(self):
        representative = orbit_representative(2, (), ())
        scaled = gl_action(MatK.scalar(2, RatFun.const(2)), MatK.identity(2), representative)
        self.assertFalse(same_point(scaled, representative))

    def test_injected_collineation(self):
        """A different collineation over the same flags keeps the plane."""
        representative = orbit_representative(3, (1,), ())
        dec = decompose_stratum(representative)
        matrix = as_field_matrix([[1, 2], [0, 1]])
        point = recompose_stratum(replace(dec, phis=(collineation_from_matrix(matrix),)))
        self.assertEqual(grass_point(point).coordinates, grass_point(representative).coordinates)
        self.assertEqual(collineation_class(decompose_stratum(point).phis[0]), matrix)
        self.assertFalse(same_point(point, representative))
        self.assertTrue(grass_fibre_check(point, representative).passed)

    def test_missing_collineation(self):
        dec = decompose_stratum(orbit_representative(2, (1,), (1,)))
        with self.assertRaises(Inconsistent):
            recompose_stratum(replace(dec, phis=()))

    def test_singular_collineation(self):
        dec = decompose_stratum(orbit_representative(3, (1,), ()))
        with self.assertRaises(Inconsistent):
            recompose_stratum(replace(dec, phis=(diagonal_collineation([ZERO, ZERO]),)))


# ---------------------------------------------------------------
# Grassmannian
# ---------------------------------------------------------------
class GrassmannTests(SimpleTestCase):

    def test_graph_of_identity(self):
        point = grass_point(from_matrix(MatK.identity(2)))
        expected = (1, 0, 1, -1, 0, 1)
        self.assertEqual(point.coordinates, tuple(RatFun.const(x) for x in expected))
        self.assertTrue(same_subspace(point.basis.T, as_field_matrix([[1, 0], [0, 1], [1, 0], [0, 1]])))

    def test_limit_plane_splits(self):
        """Over the boundary the plane is a line of E plus a line of F."""
        point = grass_point(from_matrix(MatK.diag([RatFun.monomial(-1), RatFun.monomial(2)])))
        self.assertEqual(point.basis.rows, 2)
        # row sets {1, 2} and {3, 4} are the first and last coordinates
        self.assertTrue(point.coordinates[0].is_zero())
        self.assertTrue(point.coordinates[-1].is_zero())

    def test_equivariance(self):
        sampler = InstanceSampler(seed=13)
        phi = from_matrix(MatK([[1, 1], [1, 1 + T]]))
        u, v = sampler.unimodular(2), sampler.unimodular(2)
        moved = grass_point(gl_action(u, v, phi)).coordinates
        block = MatK.block_diag(u.residue(), v.residue())
        before = MatK.column(pluecker_coordinates(subbundle_matrix(phi).residue()))
        self.assertEqual(moved, tuple(projective_normal(compound(block, 2) * before).entries()))

    def test_rank_on_random_points(self):
        sampler = InstanceSampler(seed=17)
        for _ in range(3):
            point = grass_point(from_matrix(sampler.matrix(3)))
            self.assertEqual(point.basis.rows, 3)

    def test_fibre_check_on_itself(self):
        phi = from_matrix(MatK.diag([RatFun.monomial(-1), RatFun.monomial(2)]))
        report = grass_fibre_check(phi, phi)
        self.assertTrue(report.passed)
        self.assertIn("core", [item.name for item in report.items])
