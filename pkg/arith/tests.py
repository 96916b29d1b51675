# arith/tests.py
from django.test import SimpleTestCase
from sympy import QQ

from core.exceptions import DivisionByZero, ExpressionSyntaxError, NegativeValuation
from reports.sampling import InstanceSampler

from .parser import parse_ratfun
from .ratfun import INFINITY, ONE, ZERO, RatFun, residue, tval

T = RatFun.t()


# ---------------------------------------------------------------
# Valuation and residue
# ---------------------------------------------------------------
class ValuationTests(SimpleTestCase):

    def test_examples(self):
        self.assertEqual(tval(T ** 2 / (1 + T)), 2)
        self.assertEqual(tval(ZERO), INFINITY)
        self.assertEqual(tval((3 * T - T ** 3) / (2 + T)), 1)
        self.assertEqual(tval(RatFun.monomial(-2, 5)), -2)

    def test_valuation_is_multiplicative_and_ultrametric(self):
        """tval(fg) = tval f + tval g and tval(f+g) >= min, with equality when they differ."""
        sampler = InstanceSampler(seed=11)
        for _ in range(40):
            f, g = sampler.ratfun(), sampler.ratfun()
            self.assertEqual((f * g).tval(), f.tval() + g.tval())
            self.assertGreaterEqual((f + g).tval(), min(f.tval(), g.tval()))
            if f.tval() != g.tval():
                self.assertEqual((f + g).tval(), min(f.tval(), g.tval()))


class ResidueTests(SimpleTestCase):

    def test_examples(self):
        self.assertEqual(residue((1 + T) / (1 - T)), QQ(1))
        self.assertEqual(residue(T ** 2), QQ(0))
        self.assertEqual(residue((2 + T) / (4 - T)), QQ(1, 2))

    def test_negative_valuation_raises(self):
        with self.assertRaises(NegativeValuation):
            residue(1 / T)


# ---------------------------------------------------------------
# Field arithmetic
# ---------------------------------------------------------------
class FieldAxiomTests(SimpleTestCase):

    def test_canonical_form(self):
        """Denominators are monic and reduced, so equal values compare equal."""
        f = (2 * T + 2) / (4 * T ** 2 - 4)
        self.assertEqual(f, 1 / (2 * T - 2))
        self.assertEqual(f.den.LC, QQ(1))
        self.assertEqual(hash(f), hash(1 / (2 * T - 2)))

    def test_constants_hash_like_numbers(self):
        for value in (0, 1, -7, QQ(3, 4)):
            self.assertEqual(RatFun.const(value), value)
            self.assertEqual(hash(RatFun.const(value)), hash(value))
        self.assertEqual(len({ONE, 1, RatFun.const(QQ(1))}), 1)
        self.assertIn(ZERO, {0: "zero"})

    def test_random_triples(self):
        sampler = InstanceSampler(seed=5)
        for _ in range(25):
            a, b, c = sampler.ratfun(), sampler.ratfun(), sampler.ratfun()
            self.assertEqual((a + b) + c, a + (b + c))
            self.assertEqual((a * b) * c, a * (b * c))
            self.assertEqual(a * (b + c), a * b + a * c)
            if b:
                self.assertEqual(a / b * b, a)

    def test_division_by_zero(self):
        with self.assertRaises(DivisionByZero):
            ONE / ZERO

    def test_laurent_truncate(self):
        f = (1 + T) / T ** 2
        self.assertEqual(f.laurent_truncate(0), 1 / T ** 2 + 1 / T)
        self.assertEqual((1 / (1 - T)).laurent_truncate(3), 1 + T + T ** 2)


# ---------------------------------------------------------------
# Parser and printer
# ---------------------------------------------------------------
class ParserTests(SimpleTestCase):

    def test_examples(self):
        self.assertEqual(parse_ratfun("t^-1"), 1 / T)
        self.assertEqual(parse_ratfun("0"), ZERO)
        value = parse_ratfun("(3*t^2 - 1/2)/(1 + t)")
        self.assertEqual(value, (3 * T ** 2 - RatFun.const(QQ(1, 2))) / (1 + T))
        self.assertEqual(value.den.LC, QQ(1))

    def test_whitespace_is_ignored(self):
        self.assertEqual(parse_ratfun(" 2 * t ^ 3 "), parse_ratfun("2*t^3"))

    def test_syntax_error_carries_position(self):
        with self.assertRaises(ExpressionSyntaxError) as ctx:
            parse_ratfun("t^^2")
        self.assertEqual(ctx.exception.position, 2)

        with self.assertRaises(ExpressionSyntaxError) as ctx:
            parse_ratfun("1 + x")
        self.assertEqual(ctx.exception.position, 4)

    def test_unbalanced_parenthesis(self):
        with self.assertRaises(ExpressionSyntaxError) as ctx:
            parse_ratfun("(1 + t")
        self.assertEqual(ctx.exception.position, 6)

    def test_zero_denominator(self):
        with self.assertRaises(DivisionByZero):
            parse_ratfun("1/0")
        with self.assertRaises(DivisionByZero):
            parse_ratfun("t/(t - t)")

    def test_printer_round_trip(self):
        """parse(str(f)) == f on random canonical values."""
        sampler = InstanceSampler(seed=3)
        for _ in range(200):
            f = sampler.ratfun()
            self.assertEqual(parse_ratfun(str(f)), f, msg=str(f))

    def test_printer_format(self):
        self.assertEqual(str(-T ** 2 + 3 * T - 1), "-1*t^2 + 3*t - 1")
        self.assertEqual(str(1 / (1 + T)), "(1)/(t + 1)")
