# atlas/charts.py
"""
Affine charts indexed by (alpha, beta, l): the Schur recursion on a
permuted matrix, its LDU certificate, and the toric coordinates.
"""
import logging
from dataclasses import dataclass, field

from arith.ratfun import ONE, ZERO
from core.exceptions import SizeMismatch, ZeroPivot
from lattices.bases import DVR
from lattices.matrices import MatK

logger = logging.getLogger(__name__)


def identity_permutation(n):
    return tuple(range(1, n + 1))


def iota(l, i):
    """Relabelling of [1, n+1] onto [0, n] that puts t_0 after t_1 .. t_l."""
    if i <= l:
        return i
    if i == l + 1:
        return 0
    return i - 1


@dataclass(frozen=True)
class ChartAddress:
    alpha: tuple
    beta: tuple
    l: int

    @property
    def n(self):
        return len(self.alpha)

    def as_dict(self):
        return {"alpha": list(self.alpha), "beta": list(self.beta), "l": self.l}


@dataclass(frozen=True)
class Decomposition:
    """x = n_alpha * Y * D * Z * n_beta^-1 with Y, Z unitriangular."""

    Y: MatK
    D: MatK
    Z: MatK


@dataclass(frozen=True)
class ChartCoords:
    """
    ``y`` maps (j, i) with j > i to the entries below the diagonal of Y,
    ``z`` maps (i, j) with i < j to those above the diagonal of Z (both
    1-based). ``t_ratios`` is empty when no chart l contains the point.
    """

    t_ratios: tuple
    y: dict
    z: dict
    t_over_t0: tuple
    l: int = None
    decomposition: Decomposition = field(default=None, compare=False)

    def in_chart(self, base):
        values = list(self.t_ratios) + list(self.y.values()) + list(self.z.values())
        return bool(self.t_ratios) and all(base.in_ring(x) for x in values)


@dataclass(frozen=True)
class ToricPoint:
    l: int
    a: tuple


@dataclass(frozen=True)
class StratumIndex:
    """
    Vanishing pattern of the sections at the closed point. ``zero_mu`` and
    ``zero_lambda`` hold the indices whose section is identically zero.
    """

    I: frozenset
    J: frozenset
    zero_mu: frozenset = frozenset()
    zero_lambda: frozenset = frozenset()

    def is_disjoint_pattern(self, n):
        if not self.I or not self.J:
            return True
        return min(self.I) + min(self.J) >= n

    def as_dict(self):
        return {
            "I": sorted(self.I),
            "J": sorted(self.J),
            "zero_mu": sorted(self.zero_mu),
            "zero_lambda": sorted(self.zero_lambda),
        }


# -------------------- Schur recursion --------------------

def _check_permutation(perm, n, name):
    if sorted(perm) != list(range(1, n + 1)):
        raise SizeMismatch(f"{name} is not a permutation of 1..{n}")


def _schur(x, alpha, beta):
    n = x.rows
    if not x.is_square():
        raise SizeMismatch(f"chart coordinates of a {x.shape} matrix")
    _check_permutation(alpha, n, "alpha")
    _check_permutation(beta, n, "beta")

    work = (MatK.permutation(alpha).inv() * x * MatK.permutation(beta)).tolist()
    y = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    z = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    pivots = []
    for k in range(n):
        pivot = work[k][k]
        if pivot.is_zero():
            raise ZeroPivot(k + 1)
        pivots.append(pivot)
        for i in range(k + 1, n):
            y[i][k] = work[i][k] / pivot
        for j in range(k + 1, n):
            z[k][j] = work[k][j] / pivot
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                work[i][j] = work[i][j] - y[i][k] * work[k][j]
        logger.debug(f"schur step {k + 1}: pivot {pivot}")
    return MatK(y, cols=n), tuple(pivots), MatK(z, cols=n)


def decompose_matrix(x, alpha=None, beta=None):
    """(Y, D, Z) with x = n_alpha Y D Z n_beta^-1; raises ZeroPivot(k) on a vanishing pivot."""
    alpha = alpha or identity_permutation(x.rows)
    beta = beta or identity_permutation(x.rows)
    Y, pivots, Z = _schur(x, alpha, beta)
    return Y, MatK.diag(pivots), Z


def schur_coords(x, alpha=None, beta=None, base=DVR):
    alpha = alpha or identity_permutation(x.rows)
    beta = beta or identity_permutation(x.rows)
    Y, pivots, Z = _schur(x, alpha, beta)
    n = x.rows
    l = smallest_chart(pivots, base)
    return ChartCoords(
        t_ratios=ratio_generators(pivots, l) if l is not None else (),
        y={(j + 1, i + 1): Y[j, i] for j in range(n) for i in range(j)},
        z={(i + 1, j + 1): Z[i, j] for i in range(n) for j in range(i + 1, n)},
        t_over_t0=pivots,
        l=l,
        decomposition=Decomposition(Y=Y, D=MatK.diag(pivots), Z=Z),
    )


# -------------------- Toric coordinates --------------------

def ratio_generators(t_over_t0, l):
    """t_{iota(nu+1)} / t_{iota(nu)} for nu = 1..n, from the ratios t_i / t_0."""
    values = (ONE,) + tuple(t_over_t0)
    n = len(t_over_t0)
    return tuple(values[iota(l, nu + 1)] / values[iota(l, nu)] for nu in range(1, n + 1))


def smallest_chart(t_over_t0, base):
    for l in range(len(t_over_t0) + 1):
        if all(base.in_ring(a) for a in ratio_generators(t_over_t0, l)):
            return l
    return None


def valid_toric_indices(mus, lambdas, base=DVR):
    """
    Every l with lambda_i a unit for i < l and mu_j a unit for j < n - l,
    the charts of the toric model containing the point.
    """
    n = len(mus)
    if len(lambdas) != n:
        raise SizeMismatch(f"{n} mu sections but {len(lambdas)} lambda sections")
    return [
        l for l in range(n + 1)
        if all(base.is_unit(lambdas[i]) for i in range(l))
        and all(base.is_unit(mus[j]) for j in range(n - l))
    ]


def _product(values):
    result = ONE
    for v in values:
        result = result * v
    return result


def toric_point(mus, lambdas, phis, l, base=DVR):
    """
    Coordinates a_1 .. a_n of the point on the chart l of the toric model,
    written through the sections so no vanishing section is inverted.
    With T_r = phi_r prod_{i<r} lambda_i / prod_{j<=n-r} mu_j these are
    the consecutive ratios of T_1 .. T_l, T_0 = 1, T_{l+1} .. T_n.
    """
    n = len(mus)
    if l not in valid_toric_indices(mus, lambdas, base):
        raise ValueError(f"chart {l} does not contain the point")
    a = []
    for nu in range(1, n + 1):
        if nu < l:
            value = phis[nu] / phis[nu - 1] * lambdas[nu] * mus[n - nu]
        elif nu == l:
            value = _product(mus[: n - l + 1]) / (phis[l - 1] * _product(lambdas[:l]))
        elif nu == l + 1:
            value = phis[l] * _product(lambdas[: l + 1]) / _product(mus[: n - l])
        else:
            value = phis[nu - 1] / phis[nu - 2] * lambdas[nu - 1] * mus[n - nu + 1]
        a.append(value)
    return ToricPoint(l=l, a=tuple(a))
