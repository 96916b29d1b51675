# lattices/lattice.py
from dataclasses import dataclass

from arith.ratfun import RatFun
from core.exceptions import Singular, SizeMismatch

from .matrices import MatK
from .normalforms import hnf_columns, hnf_dvr


@dataclass(frozen=True)
class Lattice:
    """Full-rank A-submodule of K^n; ``basis`` is its column Hermite form."""

    basis: MatK

    @classmethod
    def from_basis(cls, basis):
        return cls(hnf_dvr(basis))

    @classmethod
    def standard(cls, n, k=0):
        """t^k * A^n."""
        return cls(MatK.scalar(n, RatFun.monomial(k)))

    @property
    def rank(self):
        return self.basis.rows

    def dual(self):
        return Lattice.from_basis(self.basis.inv().T)

    def contains(self, vectors):
        """True iff every column of ``vectors`` lies in the lattice."""
        coords = self.basis.inv() * vectors
        return all(x.tval() >= 0 for x in coords.entries())


def lattice_sum(first, second):
    if first.rank != second.rank:
        raise SizeMismatch("lattices of different rank")
    return Lattice(hnf_columns(MatK.hstack(first.basis, second.basis)))


def intersect(first, second):
    """Intersection via duality: (L1^v + L2^v)^v."""
    return lattice_sum(first.dual(), second.dual()).dual()


def image(phi, lattice):
    if phi.det().is_zero():
        raise Singular("image of a lattice under a singular map")
    return Lattice.from_basis(phi * lattice.basis)


def preimage(phi, lattice):
    return Lattice.from_basis(phi.inv() * lattice.basis)
