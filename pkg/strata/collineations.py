# strata/collineations.py
"""
Complete collineations over the residue field: one-sided chains of
bf-morphisms F_n -> F_{n-1} -> ... -> F_0 whose first section vanishes.
Also the translations into complete homomorphisms of type R and into
projectively complete bilinear forms.
"""
import logging
from dataclasses import dataclass

from arith.ratfun import ONE, ZERO
from bf.morphisms import BfMorphism, LineWithSection
from bf.services import validate_bf, wedge_fwd
from core.exceptions import Inconsistent, SizeMismatch, TypeMismatch
from core.reports import ValidationReport
from geniso.services import f_step, lambda_name
from lattices.bases import FIELD, Base
from lattices.fields import coordinates, same_subspace
from lattices.matrices import MatK, index_sets

from .subspaces import kernel, projective_normal, whole

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompleteCollineation:
    """
    ``chain[i]`` maps F_{i+1} -> F_i with rank tag i and section lambda_i.
    F_n is the source and F_0 the target.
    """

    n: int
    chain: tuple
    base: Base = FIELD

    @property
    def lambdas(self):
        return [h.section for h in self.chain]

    def down(self, a, b):
        """H_a ... H_{b-1}: F_b -> F_a."""
        result = MatK.identity(self.n)
        for i in range(a, b):
            result = result * self.chain[i].fwd
        return result

    def up(self, a, b):
        result = MatK.identity(self.n)
        for i in reversed(range(a, b)):
            result = result * self.chain[i].bwd
        return result

    def as_dict(self):
        return {
            "n": self.n,
            "lambdas": [str(x) for x in self.lambdas],
            "type": list(vainsencher_type(self)),
            "class": [[str(x) for x in row] for row in collineation_class(self).tolist()],
        }


def diagonal_collineation(lambdas, base=FIELD):
    """The chain of standard steps with the given sections; lambdas[0] must vanish."""
    n = len(lambdas)
    return CompleteCollineation(n=n, chain=tuple(f_step(n, i, lam, base) for i, lam in enumerate(lambdas)), base=base)


def collineation_from_matrix(matrix):
    """The interior point over an invertible field matrix: H_0 = 0, Hb_0 = matrix^-1, all other steps identities."""
    if not matrix.is_square() or matrix.rows == 0:
        raise SizeMismatch(f"complete collineation from a {matrix.shape} matrix")
    n = matrix.rows
    identity = MatK.identity(n)
    chain = [BfMorphism(
        n=n, r=0, mu=LineWithSection(section=ZERO, name=lambda_name(0)),
        fwd=MatK.zeros(n, n), bwd=matrix.inv(), base=FIELD,
    )]
    chain += [
        BfMorphism(n=n, r=i, mu=LineWithSection(section=ONE, name=lambda_name(i)), fwd=identity, bwd=identity, base=FIELD)
        for i in range(1, n)
    ]
    return CompleteCollineation(n=n, chain=tuple(chain))


def validate_cc(cc, subject="complete collineation"):
    report = ValidationReport(subject=subject)
    n, base = cc.n, cc.base
    sized = report.check(
        "size",
        n >= 1 and len(cc.chain) == n and all(h.n == n for h in cc.chain),
        f"n={n}, {len(cc.chain)} steps",
    )
    if not sized:
        return report

    for i, h in enumerate(cc.chain):
        report.check(f"h{i}.rank-tag", h.r == i, f"tag {h.r}")
        report.extend(validate_bf(h, subject=f"h{i}"), prefix=f"h{i}.")
    report.check("lambda0-zero", cc.chain[0].section.is_zero(), f"lambda0 = {cc.chain[0].section}")
    if not report.passed:
        logger.warning(f"{subject}: failed {[item.name for item in report.failures]}")
        return report

    for i, h in enumerate(cc.chain):
        for point in base.vanishing_points(h.section):
            for name, g, f in (("fwd", h.fwd, cc.down(i + 1, n)), ("bwd", h.bwd, cc.up(0, i))):
                g_x, gf_x = base.fibre(g, point), base.fibre(g * f, point)
                report.check(f"image-{name}{i}@{point}", gf_x.rank() == g_x.rank(), "im(g o f) must equal im(g)")

    if not report.passed:
        logger.warning(f"{subject}: failed {[item.name for item in report.failures]}")
    return report


def wedge_collineation(cc, r):
    """wedge^r of the whole chain, F_n -> F_0 with the section powers divided out."""
    matrix = MatK.identity(len(index_sets(cc.n, r)))
    for h in cc.chain:
        matrix = matrix * wedge_fwd(h, r).matrix
    return matrix


def collineation_class(cc):
    """The projective class of the first wedge: a nonzero matrix up to scale."""
    return projective_normal(wedge_collineation(cc, 1))


def vainsencher_type(cc):
    return tuple(i for i in range(1, cc.n) if cc.base.vanishing_points(cc.chain[i].section))


# -------------------- Complete homomorphisms of type R --------------------

@dataclass(frozen=True)
class VainsencherData:
    """
    ``e_spaces[i]`` = ker(F_n -> F_{r_i}) inside the source; ``f_spaces[0]``
    is the target and ``f_spaces[i]`` = ker(F_{r_{i+1}} -> F_{r_i}) for i >= 1.
    ``maps[i]`` is v_i: e_spaces[i] -> f_spaces[i] in those bases.
    """

    n: int
    R: tuple
    e_spaces: tuple
    f_spaces: tuple
    maps: tuple
    ranks: tuple

    @property
    def cuts(self):
        return (0,) + self.R + (self.n,)

    def as_dict(self):
        return {
            "R": list(self.R),
            "ranks": list(self.ranks),
            "maps": [[[str(x) for x in row] for row in v.tolist()] for v in self.maps],
        }


def cc_to_vainsencher(cc, R=None):
    actual = vainsencher_type(cc)
    if R is not None and tuple(sorted(R)) != actual:
        raise TypeMismatch(f"sections vanish at {list(actual)}, not at {sorted(R)}")
    n = cc.n
    cuts = (0,) + actual + (n,)
    k = len(actual)

    e_spaces = tuple(kernel(cc.down(cuts[i], n)) for i in range(k + 1))
    f_spaces = (whole(n),) + tuple(kernel(cc.down(cuts[i], cuts[i + 1])) for i in range(1, k + 1))
    # v_0 lands in the target through the twisted inverse of Hb_0
    first = wedge_fwd(cc.chain[0], 1).matrix * cc.down(1, n) * e_spaces[0]
    maps = (first,) + tuple(
        coordinates(f_spaces[i], cc.down(cuts[i + 1], n) * e_spaces[i]) for i in range(1, k + 1)
    )
    data = VainsencherData(
        n=n,
        R=actual,
        e_spaces=e_spaces,
        f_spaces=f_spaces,
        maps=maps,
        ranks=tuple(v.rank() for v in maps),
    )
    logger.debug(f"cc_to_vainsencher: R={list(actual)} ranks={list(data.ranks)}")
    return data


def check_vainsencher(data):
    """ker v_i = E_{i+1}, coker v_i has the dimension of F_{i+1}, and v_i has rank r_{i+1} - r_i."""
    report = ValidationReport(subject="complete homomorphism")
    cuts = data.cuts
    for i, v in enumerate(data.maps):
        rank = data.ranks[i]
        report.check(f"rank-v{i}", rank == cuts[i + 1] - cuts[i], f"rank {rank}")
        if i + 1 < len(data.maps):
            report.check(
                f"kernel-v{i}",
                same_subspace(data.e_spaces[i] * kernel(v), data.e_spaces[i + 1]),
                "ker v_i must be E_{i+1}",
            )
            report.check(
                f"cokernel-v{i}",
                data.f_spaces[i].cols - rank == data.f_spaces[i + 1].cols,
                f"dim F_{i} = {data.f_spaces[i].cols}",
            )
    return report


# -------------------- Bilinear forms --------------------

@dataclass(frozen=True)
class TKForm:
    """``rows[r - 1]`` is u_r as a row over the basis e_I (x) e_J of the r-th compound spaces."""

    rows: tuple

    def as_dict(self):
        return {"u": [[str(x) for x in row.entries()] for row in self.rows]}


def cc_to_tk(cc):
    rows = []
    for r in range(1, cc.n + 1):
        matrix = wedge_collineation(cc, r)
        if matrix.is_zero():
            raise Inconsistent(f"wedge^{r} of the collineation vanishes")
        rows.append(projective_normal(MatK([matrix.entries()], cols=matrix.rows * matrix.cols)))
    return TKForm(rows=tuple(rows))
