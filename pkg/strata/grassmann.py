# strata/grassmann.py
"""The map to the Grassmannian of n-planes in E + F: a point goes to the image of E_n."""
import logging
from dataclasses import dataclass

from core.exceptions import NotASubbundle
from core.reports import ValidationReport
from geniso.services import generic_map
from lattices.bases import CLOSED
from lattices.fields import same_subspace
from lattices.matrices import MatK, canonical_columns, index_sets, minor

from .services import decompose_stratum
from .subspaces import projective_normal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PlueckerVector:
    """All n x n minors of ``basis`` (n x 2n, rows span the plane), first nonzero one scaled to 1."""

    coordinates: tuple
    basis: MatK

    def as_dict(self):
        return {
            "pluecker": [str(x) for x in self.coordinates],
            "basis": [[str(x) for x in row] for row in self.basis.tolist()],
        }


def subbundle_matrix(phi):
    """Columns span the image of E_n -> E_0 + F_0."""
    return MatK.vstack(phi.e_composite, phi.f_composite * phi.iso)


def pluecker_coordinates(columns):
    n = columns.cols
    values = [minor(columns, rows, range(1, n + 1)) for rows in index_sets(columns.rows, n)]
    return tuple(projective_normal(MatK([values], cols=len(values))).entries())


def grass_point(phi):
    fibre = phi.base.fibre(subbundle_matrix(phi), CLOSED)
    rank = fibre.rank()
    if rank != phi.n:
        raise NotASubbundle(f"E_n spans a plane of dimension {rank} in the closed fibre, expected {phi.n}")
    point = PlueckerVector(coordinates=pluecker_coordinates(fibre), basis=canonical_columns(fibre).T)
    logger.debug(f"grass_point: {len(point.coordinates)} coordinates")
    return point


def grass_fibre_check(first, second):
    """
    Points over the same plane share the part of the decomposition the
    plane sees: the kernel and the projection on each side and the core
    between them. The collineations are free.
    """
    report = ValidationReport(subject="grassmannian fibre")
    if not report.check("same-plane", grass_point(first).coordinates == grass_point(second).coordinates):
        return report

    a, b = decompose_stratum(first), decompose_stratum(second)
    for side, flag_a, flag_b, k_a, k_b in (
        ("e", a.e_flag, b.e_flag, a.s, b.s),
        ("f", a.f_flag, b.f_flag, a.r, b.r),
    ):
        report.check(f"{side}-kernel", same_subspace(flag_a.steps[k_a], flag_b.steps[k_b]))
        report.check(f"{side}-projection", same_subspace(flag_a.steps[k_a + 1], flag_b.steps[k_b + 1]))
    if report.passed:
        report.check(
            "core",
            a.core.n == b.core.n and generic_map(a.core) == generic_map(b.core),
            f"core ranks {a.core.n} and {b.core.n}",
        )
    if not report.passed:
        logger.warning(f"grass_fibre_check: failed {[item.name for item in report.failures]}")
    return report
