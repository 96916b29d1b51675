# reports/sampling.py
"""Seeded random instances for the property checks."""
import random

from sympy import QQ

from arith.ratfun import ONE, ZERO, RatFun
from lattices.matrices import MatK


class InstanceSampler:
    """
    Draws rational functions p/q with deg p, deg q <= ``max_degree`` and
    coefficient numerators in [-coeff_range, coeff_range]. Every draw comes
    from one ``random.Random`` so a seed fixes the whole sequence.
    """

    def __init__(self, seed=0, max_degree=3, coeff_range=9):
        self.rng = random.Random(seed)
        self.max_degree = max_degree
        self.coeff_range = coeff_range

    def coefficient(self, nonzero=False):
        while True:
            value = QQ(self.rng.randint(-self.coeff_range, self.coeff_range), self.rng.randint(1, 3))
            if value or not nonzero:
                return value

    def polynomial(self, nonzero=False):
        while True:
            degree = self.rng.randint(0, self.max_degree)
            result = ZERO
            for k in range(degree + 1):
                # thin out low terms so valuations other than 0 show up
                if self.rng.random() < 0.35:
                    continue
                result = result + RatFun.monomial(k, self.coefficient())
            if result or not nonzero:
                return result

    def ratfun(self):
        return self.polynomial() / self.polynomial(nonzero=True)

    def unit(self):
        """A unit of A: nonzero constant term top and bottom."""
        while True:
            f = self.ratfun()
            if f and f.tval() == 0:
                return f

    def integral(self):
        """An element of A."""
        f = self.ratfun()
        while f.tval() < 0:
            f = f * RatFun.t()
        return f

    def matrix(self, n):
        while True:
            candidate = MatK([[self.ratfun() for _ in range(n)] for _ in range(n)], cols=n)
            if not candidate.det().is_zero():
                return candidate

    def integral_matrix(self, n):
        while True:
            candidate = MatK([[self.integral() for _ in range(n)] for _ in range(n)], cols=n)
            if not candidate.det().is_zero():
                return candidate

    def unimodular(self, n):
        """Element of GL_n(A): lower times upper unitriangular with unit diagonal."""
        lower = [[self.integral() if i > j else (ONE if i == j else ZERO) for j in range(n)] for i in range(n)]
        upper = [[self.integral() if i < j else (self.unit() if i == j else ZERO) for j in range(n)] for i in range(n)]
        perm = list(range(1, n + 1))
        self.rng.shuffle(perm)
        return MatK.permutation(perm) * MatK(lower, cols=n) * MatK(upper, cols=n)

    def rational_matrix(self, rows, cols):
        return MatK([[RatFun.const(self.coefficient()) for _ in range(cols)] for _ in range(rows)], cols=cols)

    def invertible_rational_matrix(self, n):
        while True:
            candidate = self.rational_matrix(n, n)
            if not candidate.det().is_zero():
                return candidate
