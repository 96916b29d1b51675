# bf/morphisms.py
from dataclasses import dataclass, replace

from arith.ratfun import RatFun
from lattices.bases import DVR, Base
from lattices.matrices import MatK


@dataclass(frozen=True)
class LineWithSection:
    """A trivialized line bundle, remembered only through its section."""

    section: RatFun
    name: str = "mu"

    def is_zero(self):
        return self.section.is_zero()

    def renamed(self, name):
        return replace(self, name=name)


@dataclass(frozen=True)
class BfMorphism:
    """
    Back and forth pair between free modules of rank ``n``:
    ``fwd`` maps E -> F, ``bwd`` maps F -> M (x) E, and both composites
    are multiplication by ``mu.section``. ``r`` is the rank tag; it is
    stored, never inferred.
    """

    n: int
    r: int
    mu: LineWithSection
    fwd: MatK
    bwd: MatK
    base: Base = DVR

    @property
    def section(self):
        return self.mu.section

    def fibre(self, point):
        return self.base.fibre(self.fwd, point), self.base.fibre(self.bwd, point)

    def vanishing_points(self):
        return self.base.vanishing_points(self.mu.section)


@dataclass(frozen=True)
class Wedge:
    """Matrix of an exterior power together with the power of M it is twisted by."""

    matrix: MatK
    twist: int
