# atlas/diagonalize.py
"""
Diagonalization of a generalized isomorphism.

A pair (alpha, beta) is admissible when every leading twisted minor
det_{alpha[1..r], beta[1..r]} is a unit. For such a pair the chains split
off one rank-one summand at a time: the line through the first basis
vector and the kernel of the first coordinate of the 1x1 composite. What
is left is a generalized isomorphism of rank n - 1, and the recursion
ends in rank 0.
"""
import itertools
import logging
from dataclasses import dataclass

from arith.ratfun import RatFun
from bf.morphisms import BfMorphism
from bf.services import wedge_fwd
from core.exceptions import NotAdmissible
from core.reports import ValidationReport
from geniso.chains import GenIso
from geniso.services import gl_action, normal_form, twisted_minor_is_unit, wedge_phi
from lattices.fields import coordinates
from lattices.matrices import MatK, index_sets
from lattices.normalforms import is_unimodular

from .charts import identity_permutation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Split:
    """
    Rank-one splitting at the entry (1, 1).

    ``e_lines[i]`` spans the summand of E_i carried by the first basis
    vector of E_0 and ``e_kernels[i]`` is a basis of its complement; the
    same for F. ``last_step`` is G_{n-1} between the complements of E_n
    and E_{n-1}, in those bases.
    """

    epsilon: RatFun
    e_lines: tuple
    e_kernels: tuple
    f_lines: tuple
    f_kernels: tuple
    last_step: MatK
    reduced: GenIso


@dataclass(frozen=True)
class Diagonalization:
    u: tuple
    v: tuple
    phi: tuple
    alpha: tuple
    beta: tuple

    def as_dict(self):
        return {
            "alpha": list(self.alpha),
            "beta": list(self.beta),
            "phi": [str(x) for x in self.phi],
        }


def _first_row(matrix):
    return matrix.submatrix([0], range(matrix.cols))


def _complement_basis(line, functional, epsilon, order, base):
    """
    Basis of ker(functional) complementary to ``line``: projections of
    the standard vectors, leaving out the first coordinate in ``order``
    where the line has a unit entry.
    """
    n = line.rows
    dropped = next((k for k in order if base.is_unit(line[k, 0])), None)
    if dropped is None:
        raise NotAdmissible("the split-off line is not a direct summand")
    projection = MatK.identity(n) - line * functional * epsilon.inverse()
    return projection.columns([k for k in range(n) if k != dropped])


def split_first(phi, order=None):
    """Split off the summand on which the 1x1 twisted minor at (1, 1) lives."""
    n, base = phi.n, phi.base
    order = tuple(order) if order is not None else tuple(range(n))
    identity = MatK.identity(n)

    # wedge^1 h_0 maps F_1 back to F_0; it is the inverse of Hb_0
    back = wedge_fwd(phi.hs[0], 1).matrix
    through = back * phi.f_down(1, n) * phi.iso
    rows = [_first_row(through * phi.e_up(i, n)) for i in range(n + 1)]
    e_lines = [phi.e_up(0, i).columns([0]) for i in range(n + 1)]
    epsilon = (rows[0] * e_lines[0])[0, 0]
    if not base.is_unit(epsilon):
        raise NotAdmissible(f"1x1 twisted minor at (1, 1) is {epsilon}, not a unit")

    f_rows = [_first_row(identity)] + [_first_row(back * phi.f_down(1, i)) for i in range(1, n + 1)]
    f_lines = [None] + [
        (phi.f_down(i, n) * phi.iso * phi.e_up(0, n)).columns([0]) for i in range(1, n + 1)
    ]
    f_lines[0] = back * f_lines[1]

    e_kernels = [(identity - e_lines[0] * rows[0] * epsilon.inverse()).columns(range(1, n))]
    e_kernels += [_complement_basis(e_lines[i], rows[i], epsilon, order, base) for i in range(1, n + 1)]
    f_kernels = [identity.columns(range(1, n))]
    f_kernels.append(phi.hs[0].bwd * f_kernels[0])
    f_kernels += [_complement_basis(f_lines[i], f_rows[i], epsilon, order, base) for i in range(2, n + 1)]

    gs = tuple(
        BfMorphism(
            n=n - 1,
            r=i,
            mu=g.mu,
            fwd=coordinates(e_kernels[i], g.fwd * e_kernels[i + 1]),
            bwd=coordinates(e_kernels[i + 1], g.bwd * e_kernels[i]),
            base=base,
        )
        for i, g in enumerate(phi.gs[: n - 1])
    )
    hs = tuple(
        BfMorphism(
            n=n - 1,
            r=i,
            mu=h.mu,
            fwd=coordinates(f_kernels[i + 1], h.fwd * f_kernels[i + 2]),
            bwd=coordinates(f_kernels[i + 2], h.bwd * f_kernels[i + 1]),
            base=base,
        )
        for i, h in enumerate(phi.hs[1:])
    )
    last_step = coordinates(e_kernels[n - 1], phi.gs[n - 1].fwd * e_kernels[n])
    iso = coordinates(f_kernels[n], phi.iso * e_kernels[n]) * last_step.inv()
    reduced = GenIso(
        n=n - 1,
        gs=gs,
        hs=hs,
        iso=iso,
        base=base,
        target_line=tuple(phi.target_line) + ((phi.hs[0].mu, -1),),
    )
    return Split(
        epsilon=epsilon,
        e_lines=tuple(e_lines),
        e_kernels=tuple(e_kernels),
        f_lines=tuple(f_lines),
        f_kernels=tuple(f_kernels),
        last_step=last_step,
        reduced=reduced,
    )


def _diagonalize_at_identity(phi, order, depth=0):
    n = phi.n
    if n == 0:
        empty = MatK.zeros(0, 0)
        return (empty,), (empty,), ()

    split = split_first(phi, order=order)
    logger.debug(f"diagonalize: depth {depth}, rank {n}, split-off entry {split.epsilon}")
    sub_order = tuple(k for k in order if k < n - 1)
    sub_u, sub_v, sub_phi = _diagonalize_at_identity(split.reduced, sub_order, depth + 1)

    one = MatK.identity(1)
    scale = MatK.diag([split.epsilon])
    u = [
        MatK.block_diag(one, sub_u[i]) * MatK.hstack(split.e_lines[i], split.e_kernels[i]).inv()
        for i in range(n)
    ]
    u.append(
        MatK.block_diag(one, sub_u[n - 1] * split.last_step)
        * MatK.hstack(split.e_lines[n], split.e_kernels[n]).inv()
    )
    v = [MatK.block_diag(scale, sub_v[0]) * MatK.hstack(split.f_lines[0], split.f_kernels[0]).inv()]
    v += [
        MatK.block_diag(scale, sub_v[i - 1]) * MatK.hstack(split.f_lines[i], split.f_kernels[i]).inv()
        for i in range(1, n + 1)
    ]
    return tuple(u), tuple(v), (split.epsilon,) + sub_phi


def _front(index, n):
    """Permutation taking 1 to ``index`` and 2..n to the other indices in order."""
    return (index,) + tuple(k for k in range(1, n + 1) if k != index)


def _moved(phi, alpha, beta):
    """The point whose minor at rows r, columns s is the minor of phi at alpha(r), beta(s)."""
    return gl_action(MatK.permutation(beta).inv(), MatK.permutation(alpha).inv(), phi)


def diagonalize(phi, alpha=None, beta=None, order=None):
    """
    The unique diagonalization of ``phi`` with respect to an admissible
    pair. ``order`` permutes the coordinates tried when choosing
    complement bases; the result does not depend on it.
    """
    n = phi.n
    alpha = tuple(alpha) if alpha is not None else identity_permutation(n)
    beta = tuple(beta) if beta is not None else identity_permutation(n)
    for r in range(1, n + 1):
        if not twisted_minor_is_unit(phi, alpha[:r], beta[:r]):
            raise NotAdmissible(f"leading twisted minor of order {r} is not a unit for {alpha}, {beta}")

    order = tuple(order) if order is not None else tuple(range(n))
    u, v, phis = _diagonalize_at_identity(_moved(phi, alpha, beta), order)
    u = (u[0] * MatK.permutation(beta).inv(),) + u[1:]
    v = (v[0] * MatK.permutation(alpha).inv(),) + v[1:]
    return Diagonalization(u=u, v=v, phi=phis, alpha=alpha, beta=beta)


def find_admissible(phi, depth=0):
    """
    Greedy admissible pair: the 1x1 twisted minor of least valuation,
    ties broken by (row, column), then the same on the reduced point.
    """
    n, base = phi.n, phi.base
    if n == 0:
        return (), ()
    first = wedge_phi(phi, 1).matrix
    candidates = [
        (base.val(first[i, j]), i + 1, j + 1)
        for i in range(n) for j in range(n) if not first[i, j].is_zero()
    ]
    if not candidates or min(candidates)[0] != 0:
        raise NotAdmissible("no 1x1 twisted minor is a unit")
    _, row, col = min(candidates)
    logger.debug(f"find_admissible: depth {depth}, pivot ({row}, {col})")

    rows, cols = _front(row, n), _front(col, n)
    sub_alpha, sub_beta = find_admissible(split_first(_moved(phi, rows, cols)).reduced, depth + 1)
    return (
        (row,) + tuple(rows[a] for a in sub_alpha),
        (col,) + tuple(cols[b] for b in sub_beta),
    )


def admissible_pairs(phi):
    """All admissible (alpha, beta), by checking every pair of permutations."""
    n, base = phi.n, phi.base
    wedges = [wedge_phi(phi, r).matrix for r in range(1, n + 1)]
    positions = [{idx: k for k, idx in enumerate(index_sets(n, r))} for r in range(1, n + 1)]

    def leading_units(alpha, beta):
        for r in range(1, n + 1):
            lookup = positions[r - 1]
            value = wedges[r - 1][lookup[tuple(sorted(alpha[:r]))], lookup[tuple(sorted(beta[:r]))]]
            if not base.is_unit(value):
                return False
        return True

    perms = list(itertools.permutations(range(1, n + 1)))
    return [(alpha, beta) for alpha in perms for beta in perms if leading_units(alpha, beta)]


def _is_unitriangular(matrix, upper):
    n = matrix.rows
    for i in range(n):
        for j in range(n):
            if i == j and matrix[i, j] != 1:
                return False
            if (j < i if upper else j > i) and not matrix[i, j].is_zero():
                return False
    return True


def apply_diagonalization(phi, diagonalization):
    """Check that (u_i, v_i) carry phi onto the normal form with iso diag(phi_r)."""
    d = diagonalization
    n, base = phi.n, phi.base
    report = ValidationReport(subject="diagonalization")
    if not report.check("size", len(d.u) == n + 1 and len(d.v) == n + 1 and len(d.phi) == n):
        return report

    normal = normal_form(d.phi, phi.mus, phi.lambdas, base)
    for i in range(n + 1):
        report.check(f"u{i}-unimodular", is_unimodular(d.u[i], base))
        report.check(f"v{i}-unimodular", is_unimodular(d.v[i], base))
    report.check("phi-units", all(base.is_unit(x) for x in d.phi), f"phi {[str(x) for x in d.phi]}")
    report.check("u0-upper", _is_unitriangular(d.u[0] * MatK.permutation(d.beta), upper=True))
    report.check("v0-lower", _is_unitriangular(d.v[0] * MatK.permutation(d.alpha), upper=False))

    for i, (g, model) in enumerate(zip(phi.gs, normal.gs)):
        report.check(f"e{i}-fwd", d.u[i] * g.fwd == model.fwd * d.u[i + 1])
        report.check(f"e{i}-bwd", d.u[i + 1] * g.bwd == model.bwd * d.u[i])
    for i, (h, model) in enumerate(zip(phi.hs, normal.hs)):
        report.check(f"f{i}-fwd", d.v[i] * h.fwd == model.fwd * d.v[i + 1])
        report.check(f"f{i}-bwd", d.v[i + 1] * h.bwd == model.bwd * d.v[i])
    report.check("iso", d.v[n] * phi.iso == normal.iso * d.u[n])

    if not report.passed:
        logger.warning(f"diagonalization: failed {[item.name for item in report.failures]}")
    return report
