# lattices/fields.py
"""Exact Gaussian elimination over the residue field Q."""
from sympy import QQ

from arith.ratfun import RatFun

from .matrices import MatK, canonical_columns


def as_field_matrix(rows):
    """MatK with constant entries from nested rationals or ints."""
    return MatK([[RatFun.const(QQ.convert(x)) for x in row] for row in rows])


def field_rank(matrix):
    return matrix.rank()


def field_kernel(matrix):
    return matrix.kernel()


def field_image(matrix):
    return matrix.column_space()


def subspace_intersection(first, second):
    """Intersection of two column spans inside the same ambient space."""
    if first.cols == 0 or second.cols == 0:
        return MatK.zeros(first.rows, 0)
    relations = MatK.hstack(first, -second).kernel()
    return canonical_columns(first * relations.submatrix(range(first.cols), range(relations.cols)))


def contains(space, vectors):
    if vectors.cols == 0:
        return True
    if space.cols == 0:
        return vectors.is_zero()
    return space.solve(vectors) is not None


def same_subspace(first, second):
    return canonical_columns(first) == canonical_columns(second)


def complement(sub, space):
    """
    Canonical vectors extending a basis of ``sub`` to one of ``space``: the
    rows of rref(space) whose pivot is not a pivot of rref(sub).
    """
    if space.cols == 0:
        return MatK.zeros(space.rows, 0)
    reduced, pivots = space.T.rref()
    sub_pivots = set(sub.T.rref()[1]) if sub.cols else set()
    picked = [r for r, p in enumerate(pivots) if p not in sub_pivots]
    return reduced.submatrix(picked, range(reduced.cols)).T


def coordinates(basis, vectors):
    """Coordinates of ``vectors`` in the column basis ``basis`` (exact, unique)."""
    if basis.cols == 0:
        return MatK.zeros(0, vectors.cols)
    solution = basis.solve(vectors)
    if solution is None:
        raise ValueError("vectors are not in the span of the basis")
    return solution
