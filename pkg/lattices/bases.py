# lattices/bases.py
"""
The two base rings everything is evaluated over: the valuation ring A of
rational functions regular at t = 0, and its residue field Q.
"""
from arith.ratfun import INFINITY, ONE, RatFun

CLOSED = "closed"
GENERIC = "generic"


class Base:
    def __init__(self, kind):
        self.kind = kind

    def __repr__(self):
        return f"Base({self.kind})"

    @property
    def is_field(self):
        return self.kind == "field"

    def val(self, x):
        x = RatFun.coerce(x)
        if self.is_field:
            return INFINITY if x.is_zero() else 0
        return x.tval()

    def is_unit(self, x):
        return self.val(x) == 0

    def in_ring(self, x):
        return self.val(x) >= 0

    def power(self, k):
        """Generator of the ideal of valuation k."""
        if self.is_field:
            return ONE
        return RatFun.monomial(k)

    def points(self):
        if self.is_field:
            return (CLOSED,)
        return (CLOSED, GENERIC)

    def vanishes_at(self, x, point):
        x = RatFun.coerce(x)
        if point == GENERIC or self.is_field:
            return x.is_zero()
        return x.tval() > 0

    def vanishing_points(self, x):
        return tuple(point for point in self.points() if self.vanishes_at(x, point))

    def fibre(self, matrix, point):
        """The matrix over the residue field of ``point``."""
        if point == GENERIC:
            return matrix
        if self.is_field:
            if not matrix.is_constant():
                raise ValueError("matrix over the residue field has non-constant entries")
            return matrix
        return matrix.residue()


DVR = Base("dvr")
FIELD = Base("field")
