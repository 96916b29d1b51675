# geniso/chains.py
from collections import Counter
from dataclasses import dataclass

from arith.ratfun import RatFun
from lattices.bases import DVR, Base
from lattices.matrices import MatK


def _product(matrices, n):
    result = MatK.identity(n)
    for m in matrices:
        result = result * m
    return result


@dataclass(frozen=True)
class Twist:
    """
    Formal exponents of the named section lines a scalar is a section of,
    plus the exterior degree of the target line.
    """

    exponents: tuple = ()
    degree: int = 0

    @classmethod
    def of(cls, counts, degree=0):
        return cls(exponents=tuple(sorted((k, v) for k, v in counts.items() if v)), degree=degree)

    def __add__(self, other):
        counts = Counter(dict(self.exponents))
        counts.update(dict(other.exponents))
        return Twist.of(counts, self.degree + other.degree)

    def as_dict(self):
        return {"sections": dict(self.exponents), "degree": self.degree}


@dataclass(frozen=True)
class TwistedScalar:
    value: RatFun
    twist: Twist

    def __mul__(self, other):
        return TwistedScalar(value=self.value * other.value, twist=self.twist + other.twist)


@dataclass(frozen=True)
class WedgePhi:
    matrix: MatK
    twist: Twist


@dataclass(frozen=True)
class GenIso:
    """
    Two chains of bf-morphisms joined by an isomorphism E_n -> F_n.

    ``gs[i]`` has rank tag i and maps E_{i+1} -> E_i (section mu_i);
    ``hs[i]`` has rank tag i and maps F_{i+1} -> F_i (section lambda_i).
    Every module is free of rank n with a fixed basis. ``target_line``
    lists (LineWithSection, exponent) pairs twisting the target F_0; it
    is empty except for the reduced chains split off by diagonalization.
    """

    n: int
    gs: tuple
    hs: tuple
    iso: MatK
    base: Base = DVR
    target_line: tuple = ()

    @property
    def mus(self):
        return [g.section for g in self.gs]

    @property
    def lambdas(self):
        return [h.section for h in self.hs]

    def sections(self):
        """Mapping from section name to value, for twist clearing."""
        named = {line.name: line.section for line, _ in self.target_line}
        named.update({g.mu.name: g.section for g in self.gs})
        named.update({h.mu.name: h.section for h in self.hs})
        return named

    def has_zero_section(self):
        return any(s.is_zero() for s in self.mus + self.lambdas)

    # ---- Composites along the chains ----

    def e_down(self, a, b):
        """G_a ... G_{b-1}: E_b -> E_a."""
        return _product([self.gs[i].fwd for i in range(a, b)], self.n)

    def e_up(self, a, b):
        """Gb_{b-1} ... Gb_a: E_a -> E_b."""
        return _product([self.gs[i].bwd for i in reversed(range(a, b))], self.n)

    def f_down(self, a, b):
        return _product([self.hs[i].fwd for i in range(a, b)], self.n)

    def f_up(self, a, b):
        return _product([self.hs[i].bwd for i in reversed(range(a, b))], self.n)

    @property
    def e_composite(self):
        return self.e_down(0, self.n)

    @property
    def f_composite(self):
        return self.f_down(0, self.n)
