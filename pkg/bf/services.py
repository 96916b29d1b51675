# bf/services.py
import logging
from dataclasses import dataclass

from arith.ratfun import ONE, ZERO
from core.exceptions import IntegralityViolation, SectionMismatch
from core.reports import ValidationReport
from lattices.bases import DVR
from lattices.fields import same_subspace
from lattices.matrices import MatK, compound, index_sets
from lattices.normalforms import smith_reduce

from .morphisms import BfMorphism, LineWithSection, Wedge

logger = logging.getLogger(__name__)


def validate_bf(g, subject="bf-morphism"):
    """Check the bf-morphism axioms; every failure is an item of the report."""
    report = ValidationReport(subject=subject)
    n, base = g.n, g.base

    shapes_ok = report.check(
        "shape",
        g.fwd.shape == (n, n) and g.bwd.shape == (n, n),
        f"fwd {g.fwd.shape}, bwd {g.bwd.shape}, n={n}",
    )
    report.check("rank-range", 0 <= g.r <= n, f"r={g.r}")
    integral = report.check(
        "integral",
        base.in_ring(g.section)
        and all(base.in_ring(x) for x in g.fwd.entries() + g.bwd.entries()),
        "section and matrix entries must lie in the base ring",
    )
    if not shapes_ok:
        return report

    scalar = MatK.scalar(n, g.section)
    report.check("bwd-fwd", g.bwd * g.fwd == scalar, "bwd * fwd must equal mu * I")
    report.check("fwd-bwd", g.fwd * g.bwd == scalar, "fwd * bwd must equal mu * I")
    if not integral:
        return report

    for point in g.vanishing_points():
        fwd, bwd = g.fibre(point)
        rank = fwd.rank()
        report.check(f"rank@{point}", rank == g.r, f"rank {rank}, tag {g.r}")
        report.check(
            f"exact-at-source@{point}",
            same_subspace(bwd.kernel(), fwd.column_space()),
            "kernel of bwd must equal image of fwd",
        )
        report.check(
            f"exact-at-target@{point}",
            same_subspace(fwd.kernel(), bwd.column_space()),
            "kernel of fwd must equal image of bwd",
        )

    if not report.passed:
        logger.debug(f"{subject}: failed {[item.name for item in report.failures]}")
    return report


@dataclass(frozen=True)
class LocalFrames:
    """Bases in which fwd = diag(I_r, 0) and bwd = diag(0, I_{n-r})."""

    source: MatK
    target: MatK


def local_frames(g):
    """
    Frames for a bf-morphism with identically zero section: P on the
    source and Q on the target with fwd = Q diag(I_r, 0) P^-1 and
    bwd = P diag(0, I) Q^-1.
    """
    reduction = smith_reduce(g.fwd, g.base)
    if reduction.rank != g.r or any(e != 0 for e in reduction.exponents):
        raise IntegralityViolation(
            f"fwd has elementary divisors {reduction.exponents}, expected {g.r} units"
        )
    u, v, r = reduction.U, reduction.V, g.r
    reduced_bwd = v.inv() * g.bwd * u.inv()
    block = reduced_bwd.submatrix(range(r, g.n), range(r, g.n))
    if not g.base.is_unit(block.det()):
        raise IntegralityViolation("bwd is not invertible on the complement of the image")
    target = u.inv() * MatK.block_diag(MatK.identity(r), block.inv())
    return LocalFrames(source=v, target=target)


def _model_entry(count, required):
    return ONE if count == required else ZERO


def _model_wedge(n, rank, k, forward):
    """
    The k-th wedge of the model pair fwd = diag(I_rank, 0), bwd = diag(0, I)
    with the section set to zero and the twist already divided out.
    """
    head = set(range(1, rank + 1))
    if forward:
        required = max(0, k - rank)
        values = [_model_entry(len(set(idx) - head), required) for idx in index_sets(n, k)]
    else:
        required = max(0, k - (n - rank))
        values = [_model_entry(len(set(idx) & head), required) for idx in index_sets(n, k)]
    return MatK.diag(values)


def _check_integral(matrix, g, what):
    bad = [x for x in matrix.entries() if not g.base.in_ring(x)]
    if bad:
        raise IntegralityViolation(f"{what} has an entry {bad[0]} outside the base ring")
    return matrix


def wedge_fwd(g, k):
    """k-th exterior power of fwd, divided by mu^max(0, k - r)."""
    twist = max(0, k - g.r)
    if g.mu.is_zero():
        frames = local_frames(g)
        matrix = (
            compound(frames.target, k)
            * _model_wedge(g.n, g.r, k, forward=True)
            * compound(frames.source.inv(), k)
        )
    else:
        matrix = compound(g.fwd, k) * (g.section ** -twist)
    return Wedge(matrix=_check_integral(matrix, g, f"wedge^{k} fwd"), twist=twist)


def wedge_bwd(g, k):
    """k-th exterior power of bwd, multiplied by mu^(min(k, n - r) - k)."""
    twist = min(k, g.n - g.r)
    if g.mu.is_zero():
        frames = local_frames(g)
        matrix = (
            compound(frames.source, k)
            * _model_wedge(g.n, g.r, k, forward=False)
            * compound(frames.target.inv(), k)
        )
    else:
        matrix = compound(g.bwd, k) * (g.section ** (twist - k))
    return Wedge(matrix=_check_integral(matrix, g, f"wedge^-{k} bwd"), twist=twist)


def bf_direct_sum(first, second):
    if first.section != second.section:
        raise SectionMismatch(f"sections {first.section} and {second.section} differ")
    return BfMorphism(
        n=first.n + second.n,
        r=first.r + second.r,
        mu=first.mu,
        fwd=MatK.block_diag(first.fwd, second.fwd),
        bwd=MatK.block_diag(first.bwd, second.bwd),
        base=first.base,
    )


def model_bf(n, r, section, name="mu", base=DVR):
    """The standard pair fwd = diag(I_r, mu I_{n-r}), bwd = diag(mu I_r, I_{n-r})."""
    return BfMorphism(
        n=n,
        r=r,
        mu=LineWithSection(section=section, name=name),
        fwd=MatK.diag([ONE] * r + [section] * (n - r)),
        bwd=MatK.diag([section] * r + [ONE] * (n - r)),
        base=base,
    )


def change_frames(g, source, target):
    """Transport g along isomorphisms ``source`` of E and ``target`` of F."""
    return BfMorphism(
        n=g.n,
        r=g.r,
        mu=g.mu,
        fwd=target * g.fwd * source.inv(),
        bwd=source * g.bwd * target.inv(),
        base=g.base,
    )
