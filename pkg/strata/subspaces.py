# strata/subspaces.py
"""
Subspaces of Q^n are column bases; a quotient V / W is represented by the
canonical complement of W in V, so two quotient bases compare exactly.
"""
from dataclasses import dataclass

from lattices.fields import complement, contains, coordinates, same_subspace
from lattices.matrices import MatK, canonical_columns


def whole(n):
    return MatK.identity(n)


def nothing(n):
    return MatK.zeros(n, 0)


def image(matrix, space):
    """Canonical basis of matrix(space)."""
    return canonical_columns(matrix * space)


def kernel(matrix):
    return matrix.kernel()


def quotient_coordinates(basis, sub, vectors):
    """Coordinates of ``vectors`` modulo ``sub`` in the complement ``basis``."""
    full = coordinates(MatK.hstack(basis, sub), vectors)
    return full.submatrix(range(basis.cols), range(full.cols))


def lift(matrix, vectors, within):
    """Preimages of ``vectors`` under ``matrix`` taken inside the span of ``within``."""
    return within * coordinates(matrix * within, vectors)


@dataclass(frozen=True)
class Flag:
    """
    Nested subspaces 0 = steps[0] <= ... <= steps[-1] = Q^n; ``dims[p]`` is
    the dimension of ``steps[p]``. Consecutive steps may coincide.
    """

    dims: tuple
    steps: tuple

    @property
    def ambient(self):
        return self.steps[-1].rows

    def pieces(self):
        """Complement bases of steps[p - 1] in steps[p], p = 1, 2, ..."""
        return tuple(complement(self.steps[p - 1], self.steps[p]) for p in range(1, len(self.steps)))

    def adapted_basis(self):
        """The pieces side by side: an invertible matrix carrying the coordinate flag to this one."""
        return MatK.hstack(*self.pieces())

    def is_consistent(self):
        if len(self.dims) != len(self.steps):
            return False
        if any(step.cols != dim for step, dim in zip(self.steps, self.dims)):
            return False
        return all(contains(self.steps[p + 1], self.steps[p]) for p in range(len(self.steps) - 1))

    def moved(self, matrix):
        return Flag(dims=self.dims, steps=tuple(image(matrix, step) for step in self.steps))

    def same_as(self, other):
        return self.dims == other.dims and all(
            same_subspace(a, b) for a, b in zip(self.steps, other.steps)
        )

    def as_dict(self):
        return {
            "type": list(self.dims),
            "steps": [[[str(x) for x in row] for row in step.tolist()] for step in self.steps],
        }


def projective_normal(matrix):
    """``matrix`` scaled so that its first nonzero entry (row-major) is 1."""
    pivot = next((x for x in matrix.entries() if not x.is_zero()), None)
    if pivot is None:
        return matrix
    return matrix * pivot.inverse()
