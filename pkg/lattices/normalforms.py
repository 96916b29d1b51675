# lattices/normalforms.py
"""Smith and Hermite normal forms over the valuation ring."""
import logging
from dataclasses import dataclass

from arith.ratfun import INFINITY, RatFun
from core.exceptions import Singular, SizeMismatch

from .bases import DVR
from .matrices import MatK

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SmithData:
    U: MatK
    V: MatK
    m: tuple


@dataclass(frozen=True)
class SmithReduction:
    """U * M * V = diag(pivots) padded with zeros; ``rank`` pivots are nonzero."""

    U: MatK
    V: MatK
    exponents: tuple
    rank: int


def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]


def smith_reduce(matrix, base=DVR):
    """
    Diagonalize ``matrix`` by invertible row and column operations over the
    base ring. Each pivot is an entry of minimal valuation in the remaining
    block, ties broken by the lowest (row, col).
    """
    rows, cols = matrix.shape
    a = matrix.tolist()
    u = MatK.identity(rows).tolist()
    v = MatK.identity(cols).tolist()
    exponents = []

    for k in range(min(rows, cols)):
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                val = base.val(a[i][j])
                if val != INFINITY and (best is None or val < best[0]):
                    best = (val, i, j)
        if best is None:
            break
        val, pi, pj = best
        logger.debug(f"Smith pivot {k}: ({pi}, {pj}) with valuation {val}")
        _swap_rows(a, k, pi)
        _swap_rows(u, k, pi)
        _swap_cols(a, k, pj)
        _swap_cols(v, k, pj)

        # scale the pivot row so the pivot becomes t^val
        unit = a[k][k] / base.power(val)
        inv_unit = unit.inverse()
        a[k] = [x * inv_unit for x in a[k]]
        u[k] = [x * inv_unit for x in u[k]]
        pivot = a[k][k]

        for i in range(k + 1, rows):
            if a[i][k].is_zero():
                continue
            f = a[i][k] / pivot
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
            u[i] = [x - f * y for x, y in zip(u[i], u[k])]
        for j in range(k + 1, cols):
            if a[k][j].is_zero():
                continue
            g = a[k][j] / pivot
            for row in a:
                row[j] = row[j] - g * row[k]
            for row in v:
                row[j] = row[j] - g * row[k]
        exponents.append(val)

    return SmithReduction(
        U=MatK(u, cols=rows), V=MatK(v, cols=cols), exponents=tuple(exponents), rank=len(exponents),
    )


def smith_dvr(phi, base=DVR):
    """U * phi * V = diag(t^m_1, ..., t^m_n) with m ascending and U, V invertible over A."""
    if not phi.is_square():
        raise SizeMismatch(f"Smith form of a non-square {phi.shape} matrix")
    reduction = smith_reduce(phi, base)
    if reduction.rank < phi.rows:
        raise Singular("matrix is singular over K")
    return SmithData(U=reduction.U, V=reduction.V, m=reduction.exponents)


def hnf_columns(matrix):
    """
    Column Hermite form over A of an n x m matrix of rank n: lower triangular
    n x n basis of the column A-span, pivots t^k, entries left of a pivot
    reduced to their Laurent part below the pivot order.
    """
    n, m = matrix.shape
    a = matrix.tolist()
    for i in range(n):
        best = None
        for j in range(i, m):
            val = a[i][j].tval()
            if val != INFINITY and (best is None or val < best[0]):
                best = (val, j)
        if best is None:
            raise Singular("basis does not span a full-rank lattice")
        val, pj = best
        _swap_cols(a, i, pj)
        unit = a[i][i] / RatFun.monomial(val)
        inv_unit = unit.inverse()
        for row in a:
            row[i] = row[i] * inv_unit
        for j in range(i + 1, m):
            if a[i][j].is_zero():
                continue
            q = a[i][j] / a[i][i]
            for row in a:
                row[j] = row[j] - q * row[i]
        for j in range(i):
            rep = a[i][j].laurent_truncate(val)
            q = (a[i][j] - rep) / a[i][i]
            if q.is_zero():
                continue
            for row in a:
                row[j] = row[j] - q * row[i]
    return MatK([row[:n] for row in a], cols=n)


def hnf_dvr(matrix):
    if not matrix.is_square():
        raise SizeMismatch(f"Hermite form of a non-square {matrix.shape} matrix")
    if matrix.det().is_zero():
        raise Singular("lattice basis is singular")
    return hnf_columns(matrix)


def is_unimodular(matrix, base=DVR):
    return (
        matrix.is_square()
        and all(base.in_ring(x) for x in matrix.entries())
        and base.is_unit(matrix.det())
    )
