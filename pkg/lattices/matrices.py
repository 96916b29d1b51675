# lattices/matrices.py
import itertools

from sympy import QQ
from sympy.polys.domains import FractionField
from sympy.polys.matrices import DomainMatrix

from arith.ratfun import K_FIELD, ONE, ZERO, RatFun
from core.exceptions import Singular, SizeMismatch

# sympy domain of K = Q(t) used for generic-fibre linear algebra
K_DOMAIN = FractionField(K_FIELD)


class MatK:
    """Dense immutable matrix over K = Q(t). Shapes with a zero side are allowed."""

    __slots__ = ("rows", "cols", "_entries", "_hash")

    def __init__(self, entries, cols=None):
        entries = tuple(tuple(RatFun.coerce(x) for x in row) for row in entries)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if any(len(row) != cols for row in entries):
            raise SizeMismatch("rows of unequal length")
        self.rows = len(entries)
        self.cols = cols
        self._entries = entries
        self._hash = None

    # ---- Constructors ----

    @classmethod
    def identity(cls, n):
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[ZERO] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diag(cls, values):
        values = [RatFun.coerce(v) for v in values]
        n = len(values)
        return cls([[values[i] if i == j else ZERO for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def scalar(cls, n, value):
        return cls.diag([value] * n)

    @classmethod
    def permutation(cls, perm):
        """n_perm with (n_perm)_{ij} = 1 iff i = perm(j); ``perm`` is 1-based."""
        n = len(perm)
        return cls([[ONE if i + 1 == perm[j] else ZERO for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def column(cls, values):
        return cls([[v] for v in values], cols=1)

    @staticmethod
    def hstack(*blocks):
        rows = blocks[0].rows
        if any(b.rows != rows for b in blocks):
            raise SizeMismatch("hstack needs equal row counts")
        return MatK(
            [sum((b._entries[i] for b in blocks), ()) for i in range(rows)],
            cols=sum(b.cols for b in blocks),
        )

    @staticmethod
    def vstack(*blocks):
        cols = blocks[0].cols
        if any(b.cols != cols for b in blocks):
            raise SizeMismatch("vstack needs equal column counts")
        return MatK([row for b in blocks for row in b._entries], cols=cols)

    @staticmethod
    def block_diag(*blocks):
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        entries = [[ZERO] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    entries[r0 + i][c0 + j] = b._entries[i][j]
            r0 += b.rows
            c0 += b.cols
        return MatK(entries, cols=cols)

    # ---- Access ----

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, key):
        i, j = key
        return self._entries[i][j]

    def row(self, i):
        return self._entries[i]

    def col(self, j):
        return tuple(row[j] for row in self._entries)

    def tolist(self):
        return [list(row) for row in self._entries]

    def entries(self):
        return [x for row in self._entries for x in row]

    def submatrix(self, rows, cols):
        return MatK([[self._entries[i][j] for j in cols] for i in rows], cols=len(cols))

    def columns(self, cols):
        return self.submatrix(range(self.rows), cols)

    def map(self, fn):
        return MatK([[fn(x) for x in row] for row in self._entries], cols=self.cols)

    @property
    def T(self):
        return MatK([self.col(j) for j in range(self.cols)], cols=self.rows)

    # ---- Arithmetic ----

    def __add__(self, other):
        if self.shape != other.shape:
            raise SizeMismatch(f"cannot add {self.shape} and {other.shape}")
        return MatK(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self._entries, other._entries)],
            cols=self.cols,
        )

    def __neg__(self):
        return self.map(lambda x: -x)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MatK):
            if self.cols != other.rows:
                raise SizeMismatch(f"cannot multiply {self.shape} by {other.shape}")
            other_cols = [other.col(j) for j in range(other.cols)]
            return MatK(
                [[_dot(row, col) for col in other_cols] for row in self._entries],
                cols=other.cols,
            )
        scalar = RatFun.coerce(other)
        return self.map(lambda x: x * scalar)

    def __rmul__(self, other):
        scalar = RatFun.coerce(other)
        return self.map(lambda x: scalar * x)

    def __eq__(self, other):
        if not isinstance(other, MatK):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self._entries))
        return self._hash

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in row) for row in self._entries)
        return f"MatK({self.rows}x{self.cols}: [{body}])"

    def is_zero(self):
        return all(x.is_zero() for row in self._entries for x in row)

    # ---- Reduction ----

    def is_constant(self):
        return all(x.is_constant() for row in self._entries for x in row)

    def residue(self):
        """Entrywise value at t = 0 (entries must lie in A)."""
        return self.map(lambda x: RatFun.const(x.residue()))

    def min_tval(self):
        return min((x.tval() for x in self.entries()), default=float("inf"))

    # ---- sympy bridge ----

    def to_domain(self):
        if self.is_constant():
            domain = QQ
            rows = [[x.constant_value() for x in row] for row in self._entries]
        else:
            domain = K_DOMAIN
            rows = [[x.to_frac() for x in row] for row in self._entries]
        return DomainMatrix(rows, self.shape, domain).to_dense()

    @classmethod
    def from_domain(cls, dm):
        rows, cols = dm.shape
        convert = RatFun.from_frac if dm.domain == K_DOMAIN else RatFun.const
        return cls([[convert(x) for x in row] for row in dm.to_list()], cols=cols)

    # ---- Linear algebra over K (or Q for constant matrices) ----

    def det(self):
        if not self.is_square():
            raise SizeMismatch(f"determinant of a {self.shape} matrix")
        if self.rows == 0:
            return ONE
        dm = self.to_domain()
        value = dm.det()
        return RatFun.from_frac(value) if dm.domain == K_DOMAIN else RatFun.const(value)

    def inv(self):
        if self.det().is_zero():
            raise Singular("matrix is not invertible over K")
        if self.rows == 0:
            return self
        return MatK.from_domain(self.to_domain().inv())

    def rref(self):
        """Reduced row echelon form and pivot columns."""
        if self.rows == 0 or self.cols == 0:
            return self, ()
        reduced, pivots = self.to_domain().rref()
        return MatK.from_domain(reduced), tuple(pivots)

    def rank(self):
        return len(self.rref()[1])

    def kernel(self):
        """Basis of the right kernel, one column per vector, in canonical form."""
        reduced, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in pivots]
        vectors = []
        for f in free:
            v = [ZERO] * self.cols
            v[f] = ONE
            for r, p in enumerate(pivots):
                v[p] = -reduced[r, f]
            vectors.append(v)
        return canonical_columns(MatK([list(x) for x in zip(*vectors)], cols=len(vectors))
                                 if vectors else MatK.zeros(self.cols, 0))

    def column_space(self):
        return canonical_columns(self)

    def solve(self, rhs):
        """A particular solution x of self * x = rhs (columns), or None."""
        if rhs.rows != self.rows:
            raise SizeMismatch("right hand side has the wrong height")
        if self.cols == 0:
            return MatK.zeros(0, rhs.cols) if rhs.is_zero() else None
        augmented = MatK.hstack(self, rhs)
        reduced, pivots = augmented.rref()
        if any(p >= self.cols for p in pivots):
            return None
        solution = [[ZERO] * rhs.cols for _ in range(self.cols)]
        for r, p in enumerate(pivots):
            for k in range(rhs.cols):
                solution[p][k] = reduced[r, self.cols + k]
        return MatK(solution, cols=rhs.cols)


def _dot(row, col):
    total = ZERO
    for a, b in zip(row, col):
        if not a.is_zero() and not b.is_zero():
            total = total + a * b
    return total


def canonical_columns(matrix):
    """Canonical basis (as columns) of the column space: the transposed nonzero rows of rref(M^T)."""
    if matrix.cols == 0 or matrix.rows == 0:
        return MatK.zeros(matrix.rows, 0)
    reduced, pivots = matrix.T.rref()
    return reduced.submatrix(range(len(pivots)), range(reduced.cols)).T


def minor(matrix, rows, cols):
    """Determinant of the submatrix on the 1-based index sets ``rows`` and ``cols``."""
    rows, cols = sorted(rows), sorted(cols)
    if len(rows) != len(cols):
        raise SizeMismatch(f"index sets of sizes {len(rows)} and {len(cols)}")
    if len(rows) > min(matrix.rows, matrix.cols):
        raise SizeMismatch("minor larger than the matrix")
    if any(i < 1 or i > matrix.rows for i in rows) or any(j < 1 or j > matrix.cols for j in cols):
        raise SizeMismatch("index out of range")
    return matrix.submatrix([i - 1 for i in rows], [j - 1 for j in cols]).det()


def index_sets(n, r):
    """All r-subsets of {1..n} in lexicographic order."""
    return list(itertools.combinations(range(1, n + 1), r))


def compound(matrix, r):
    """The r-th compound matrix: all r x r minors, index sets in lexicographic order."""
    if r < 1 or r > min(matrix.rows, matrix.cols):
        raise SizeMismatch(f"compound of order {r} for a {matrix.shape} matrix")
    row_sets = index_sets(matrix.rows, r)
    col_sets = index_sets(matrix.cols, r)
    return MatK(
        [[minor(matrix, a, b) for b in col_sets] for a in row_sets],
        cols=len(col_sets),
    )
