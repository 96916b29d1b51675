# atlas/services.py
import logging

from core.exceptions import InvalidStratumData
from lattices.bases import CLOSED
from lattices.matrices import MatK

from .charts import ChartAddress, ChartCoords, Decomposition, StratumIndex, toric_point, valid_toric_indices
from .diagonalize import diagonalize, find_admissible

logger = logging.getLogger(__name__)


def t_over_t0(phi, phis):
    """
    T_r = phi_r prod_{i<r} lambda_i / prod_{j<=n-r} mu_j, the diagonal of
    the generic map in the chart; empty when a section vanishes identically.
    """
    if phi.has_zero_section():
        return ()
    n, mus, lambdas = phi.n, phi.mus, phi.lambdas
    values = []
    for r in range(1, n + 1):
        value = phis[r - 1]
        for lam in lambdas[:r]:
            value = value * lam
        for mu in mus[: n - r + 1]:
            value = value / mu
        values.append(value)
    return tuple(values)


def stratum(phi):
    """Sections vanishing at the closed point; min I + min J >= n for a valid point."""
    base = phi.base
    index = StratumIndex(
        I=frozenset(i for i, mu in enumerate(phi.mus) if base.vanishes_at(mu, CLOSED)),
        J=frozenset(j for j, lam in enumerate(phi.lambdas) if base.vanishes_at(lam, CLOSED)),
        zero_mu=frozenset(i for i, mu in enumerate(phi.mus) if mu.is_zero()),
        zero_lambda=frozenset(j for j, lam in enumerate(phi.lambdas) if lam.is_zero()),
    )
    logger.debug(f"stratum: I={sorted(index.I)} J={sorted(index.J)}")
    return index


def chart_locate(phi):
    """
    Address and coordinates of ``phi`` in the atlas: an admissible pair
    from the greedy search, the triangular factors of the diagonalization
    and the smallest toric chart containing the point.
    """
    alpha, beta = find_admissible(phi)
    d = diagonalize(phi, alpha, beta)
    charts = valid_toric_indices(phi.mus, phi.lambdas, phi.base)
    if not charts:
        raise InvalidStratumData(f"no toric chart contains the point; stratum {stratum(phi).as_dict()}")
    l = charts[0]
    toric = toric_point(phi.mus, phi.lambdas, d.phi, l, phi.base)

    n = phi.n
    lower = (d.v[0] * MatK.permutation(alpha)).inv()
    upper = d.u[0] * MatK.permutation(beta)
    ratios = t_over_t0(phi, d.phi)
    coords = ChartCoords(
        t_ratios=toric.a,
        y={(j + 1, i + 1): lower[j, i] for j in range(n) for i in range(j)},
        z={(i + 1, j + 1): upper[i, j] for i in range(n) for j in range(i + 1, n)},
        t_over_t0=ratios,
        l=l,
        decomposition=Decomposition(Y=lower, D=MatK.diag(ratios) if ratios else None, Z=upper),
    )
    logger.info(f"chart_locate: alpha={alpha} beta={beta} l={l}")
    return ChartAddress(alpha=alpha, beta=beta, l=l), coords, toric
