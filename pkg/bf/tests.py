# bf/tests.py
from django.test import SimpleTestCase

from arith.ratfun import ONE, ZERO, RatFun
from core.exceptions import IntegralityViolation, SectionMismatch
from lattices.bases import DVR, FIELD
from lattices.matrices import MatK, index_sets
from reports.sampling import InstanceSampler

from .morphisms import BfMorphism, LineWithSection
from .services import (
    bf_direct_sum,
    change_frames,
    local_frames,
    model_bf,
    validate_bf,
    wedge_bwd,
    wedge_fwd,
)

T = RatFun.t()


def random_bf(sampler, n, r, section):
    model = model_bf(n, r, section)
    return change_frames(model, sampler.unimodular(n), sampler.unimodular(n))


# ---------------------------------------------------------------
# Validation
# ---------------------------------------------------------------
class ValidateBfTests(SimpleTestCase):

    def test_model_frames_pass(self):
        g = BfMorphism(
            n=2, r=1, mu=LineWithSection(T),
            fwd=MatK.diag([1, T]), bwd=MatK.diag([T, 1]),
        )
        self.assertTrue(validate_bf(g).passed)

    def test_broken_composite(self):
        g = BfMorphism(
            n=2, r=1, mu=LineWithSection(T),
            fwd=MatK.diag([1, T]), bwd=MatK.diag([T, T]),
        )
        report = validate_bf(g)
        self.assertFalse(report.passed)
        self.assertIn("bwd-fwd", [item.name for item in report.failures])

    def test_unit_section_needs_no_fibre_condition(self):
        g = BfMorphism(n=2, r=2, mu=LineWithSection(ONE), fwd=MatK.identity(2), bwd=MatK.identity(2))
        report = validate_bf(g)
        self.assertTrue(report.passed)
        self.assertFalse(any("@" in item.name for item in report.items))

    def test_wrong_rank_tag(self):
        g = model_bf(2, 1, T)
        report = validate_bf(BfMorphism(n=2, r=0, mu=g.mu, fwd=g.fwd, bwd=g.bwd))
        self.assertIn("rank@closed", [item.name for item in report.failures])

    def test_zero_section_checks_both_points(self):
        g = model_bf(3, 1, ZERO)
        report = validate_bf(g)
        self.assertTrue(report.passed)
        names = [item.name for item in report.items]
        self.assertIn("rank@closed", names)
        self.assertIn("rank@generic", names)

    def test_non_integral_entries(self):
        g = BfMorphism(n=1, r=0, mu=LineWithSection(ONE), fwd=MatK([[1 / T]]), bwd=MatK([[T]]))
        self.assertIn("integral", [item.name for item in validate_bf(g).failures])

    def test_random_frames(self):
        """bwd = mu fwd^-1 and the closed fibre ranks are complementary."""
        sampler = InstanceSampler(seed=31)
        for n, r in [(2, 1), (3, 1), (3, 2)]:
            g = random_bf(sampler, n, r, T ** 2)
            self.assertTrue(validate_bf(g).passed)
            self.assertEqual(g.bwd, g.fwd.inv() * g.section)
            fwd, bwd = g.fibre("closed")
            self.assertEqual(fwd.rank(), r)
            self.assertEqual(bwd.rank(), n - r)

    def test_field_base(self):
        g = model_bf(2, 1, ZERO, base=FIELD)
        report = validate_bf(g)
        self.assertTrue(report.passed)
        self.assertNotIn("rank@generic", [item.name for item in report.items])


# ---------------------------------------------------------------
# Exterior powers
# ---------------------------------------------------------------
class WedgeTests(SimpleTestCase):

    def test_model_examples(self):
        g = model_bf(2, 1, T)
        top = wedge_fwd(g, 2)
        self.assertEqual(top.twist, 1)
        self.assertEqual(top.matrix, MatK([[1]]))
        first = wedge_bwd(g, 1)
        self.assertEqual(first.twist, 1)
        self.assertEqual(first.matrix, MatK.diag([T, 1]))

    def test_full_rank_unit_section(self):
        m = MatK([[1, T], [0, 1]])
        g = BfMorphism(n=2, r=2, mu=LineWithSection(ONE), fwd=m, bwd=m.inv())
        wedge = wedge_fwd(g, 2)
        self.assertEqual(wedge.twist, 0)
        self.assertEqual(wedge.matrix, MatK([[m.det()]]))

    def test_top_backward_power(self):
        sampler = InstanceSampler(seed=7)
        g = random_bf(sampler, 3, 1, T)
        wedge = wedge_bwd(g, 3)
        self.assertEqual(wedge.twist, 2)
        self.assertEqual(wedge.matrix, MatK([[g.bwd.det() * T ** -1]]))

    def test_integrality_on_random_morphisms(self):
        sampler = InstanceSampler(seed=19)
        for n in (2, 3):
            for r in range(n + 1):
                g = random_bf(sampler, n, r, T * (1 + T))
                for k in range(1, n + 1):
                    for wedge in (wedge_fwd(g, k), wedge_bwd(g, k)):
                        self.assertTrue(all(DVR.in_ring(x) for x in wedge.matrix.entries()))

    def test_zero_section_uses_local_frames(self):
        sampler = InstanceSampler(seed=23)
        g = random_bf(sampler, 2, 1, ZERO)
        frames = local_frames(g)
        self.assertEqual(frames.target * MatK.diag([1, 0]) * frames.source.inv(), g.fwd)
        self.assertEqual(frames.source * MatK.diag([0, 1]) * frames.target.inv(), g.bwd)
        self.assertEqual(wedge_fwd(g, 1).matrix, g.fwd)
        self.assertEqual(wedge_bwd(g, 1).matrix, g.bwd)
        self.assertTrue(DVR.is_unit(wedge_fwd(g, 2).matrix[0, 0]))

    def test_invalid_morphism_breaks_integrality(self):
        g = BfMorphism(n=2, r=0, mu=LineWithSection(T), fwd=MatK.diag([1, T]), bwd=MatK.diag([T, 1]))
        with self.assertRaises(IntegralityViolation):
            wedge_fwd(g, 2)


# ---------------------------------------------------------------
# Direct sums
# ---------------------------------------------------------------
class DirectSumTests(SimpleTestCase):

    def test_ranks_add(self):
        total = bf_direct_sum(model_bf(2, 1, T), model_bf(1, 0, T))
        self.assertEqual((total.n, total.r), (3, 1))
        self.assertTrue(validate_bf(total).passed)

    def test_section_mismatch(self):
        with self.assertRaises(SectionMismatch):
            bf_direct_sum(model_bf(1, 0, T), model_bf(1, 0, T ** 2))

    def test_wedge_factors_over_blocks(self):
        """With the rank split of the twist, wedge of the sum is the product of block wedges."""
        sampler = InstanceSampler(seed=29)
        g1 = random_bf(sampler, 2, 1, T)
        g2 = random_bf(sampler, 2, 1, T)
        total = bf_direct_sum(g1, g2)
        positions = {idx: pos for pos, idx in enumerate(index_sets(4, 2))}
        big = wedge_fwd(total, 2).matrix
        a, b = wedge_fwd(g1, 1).matrix, wedge_fwd(g2, 1).matrix
        for i1 in (1, 2):
            for i2 in (1, 2):
                for j1 in (1, 2):
                    for j2 in (1, 2):
                        row = positions[(i1, 2 + i2)]
                        col = positions[(j1, 2 + j2)]
                        self.assertEqual(big[row, col], a[i1 - 1, j1 - 1] * b[i2 - 1, j2 - 1])

        big = wedge_fwd(total, 3).matrix
        top = wedge_fwd(g1, 2).matrix[0, 0]
        positions = {idx: pos for pos, idx in enumerate(index_sets(4, 3))}
        for i2 in (1, 2):
            for j2 in (1, 2):
                self.assertEqual(
                    big[positions[(1, 2, 2 + i2)], positions[(1, 2, 2 + j2)]],
                    top * b[i2 - 1, j2 - 1],
                )
