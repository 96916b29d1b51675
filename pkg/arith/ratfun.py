# arith/ratfun.py
import math

from sympy import QQ
from sympy.polys.fields import field

from core.exceptions import DivisionByZero, NegativeValuation

# K = Q(t); polynomials in t over the rationals live in K_FIELD.ring
K_FIELD, _ = field("t", QQ)
POLY_RING = K_FIELD.ring

INFINITY = math.inf


def rational(numerator, denominator=1):
    """Exact rational number as a sympy ``QQ`` element."""
    if denominator == 0:
        raise DivisionByZero("rational with zero denominator")
    return QQ(numerator, denominator)


def format_rational(value):
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _normalize(num, den):
    if not den:
        raise DivisionByZero("zero denominator polynomial")
    if not num:
        return POLY_RING.zero, POLY_RING.one
    g = num.gcd(den)
    if g != POLY_RING.one:
        num = num.exquo(g)
        den = den.exquo(g)
    lc = den.LC
    if lc != QQ.one:
        num = num.quo_ground(lc)
        den = den.quo_ground(lc)
    return num, den


def _low_degree(poly):
    return min(monom[0] for monom in poly.keys())


def _constant_term(poly):
    return poly.get((0,), QQ.zero)


class RatFun:
    """
    Element of K = Q(t), stored as numerator/denominator with a monic
    denominator and no common factor. Structural equality is mathematical
    equality.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        if den is None:
            den = POLY_RING.one
        self.num, self.den = _normalize(POLY_RING(num), POLY_RING(den))
        self._hash = None

    # ---- Constructors ----

    @classmethod
    def const(cls, value):
        return cls(POLY_RING.ground_new(QQ.convert(value)))

    @classmethod
    def monomial(cls, k, coeff=1):
        coeff = QQ.convert(coeff)
        if k >= 0:
            return cls(POLY_RING({(k,): coeff}) if coeff else POLY_RING.zero)
        return cls(POLY_RING.ground_new(coeff), POLY_RING({(-k,): QQ.one}))

    @classmethod
    def t(cls):
        return cls.monomial(1)

    @classmethod
    def from_frac(cls, element):
        return cls(element.numer, element.denom)

    def to_frac(self):
        return K_FIELD.raw_new(self.num, self.den)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, RatFun):
            return value
        if isinstance(value, int) or QQ.of_type(value):
            return cls.const(value)
        raise TypeError(f"cannot use {type(value).__name__} as a rational function")

    # ---- Arithmetic ----

    def __add__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        result = RatFun.__new__(RatFun)
        result.num, result.den, result._hash = -self.num, self.den, None
        return result

    def __sub__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RatFun.coerce(other) - self

    def __mul__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        if not other.num:
            raise DivisionByZero("division by the zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFun.coerce(other) / self

    def __pow__(self, exponent):
        if exponent < 0:
            return RatFun.const(1) / (self ** -exponent)
        return RatFun(self.num ** exponent, self.den ** exponent)

    def inverse(self):
        return RatFun.const(1) / self

    # ---- Comparison ----

    def __eq__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        # constants compare equal to ints and QQ values, so they hash like them
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((tuple(sorted(self.num.items())), tuple(sorted(self.den.items()))))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def is_constant(self):
        return self.num.is_ground and self.den.is_ground

    # ---- Valuation ----

    def tval(self):
        """Order of vanishing at t = 0; infinite for zero."""
        if not self.num:
            return INFINITY
        return _low_degree(self.num) - _low_degree(self.den)

    def residue(self):
        """Value at t = 0."""
        v = self.tval()
        if v < 0:
            raise NegativeValuation(f"{self} has valuation {v} < 0")
        if v > 0:
            return QQ.zero
        return _constant_term(self.num) / _constant_term(self.den)

    def constant_value(self):
        return _constant_term(self.num)

    def laurent_truncate(self, order):
        """Sum of the Laurent terms c_e t^e of self with e < order."""
        v = self.tval()
        if v >= order:
            return RatFun.const(0)
        low_num, low_den = _low_degree(self.num), _low_degree(self.den)
        a = [self.num.get((low_num + i,), QQ.zero) for i in range(order - v)]
        d = [self.den.get((low_den + i,), QQ.zero) for i in range(order - v)]
        coeffs = []
        for i in range(order - v):
            acc = a[i] - sum((d[j] * coeffs[i - j] for j in range(1, i + 1)), QQ.zero)
            coeffs.append(acc / d[0])
        result = RatFun.const(0)
        for i, c in enumerate(coeffs):
            if c:
                result = result + RatFun.monomial(v + i, c)
        return result

    # ---- Printing ----

    def __str__(self):
        if self.den == POLY_RING.one:
            return _format_poly(self.num)
        return f"({_format_poly(self.num)})/({_format_poly(self.den)})"

    def __repr__(self):
        return f"RatFun({self})"


def _format_poly(poly):
    if not poly:
        return "0"
    terms = sorted(poly.items(), key=lambda item: -item[0][0])
    parts = []
    for index, ((k,), c) in enumerate(terms):
        negative = c < 0
        magnitude = -c if negative else c
        coeff = format_rational(magnitude)
        if k == 0:
            body = coeff
        else:
            monomial = "t" if k == 1 else f"t^{k}"
            body = monomial if magnitude == 1 and not (negative and index == 0) else f"{coeff}*{monomial}"
        if index == 0:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts)


ZERO = RatFun.const(0)
ONE = RatFun.const(1)
T = RatFun.t()


def tval(f):
    return RatFun.coerce(f).tval()


def residue(f):
    return RatFun.coerce(f).residue()
