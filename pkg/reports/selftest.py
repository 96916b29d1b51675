# reports/selftest.py
"""
Seeded property suite over random instances. Each property draws from its
own sampler, seeded by the suite seed and the property name, so results
do not depend on which properties run or in what order.
"""
import itertools
import logging
import time
from dataclasses import dataclass, field

from arith.ratfun import RatFun
from atlas.charts import decompose_matrix
from atlas.diagonalize import admissible_pairs, apply_diagonalization, diagonalize, find_admissible, split_first
from atlas.services import chart_locate, stratum
from bf.services import bf_direct_sum, change_frames, model_bf, wedge_bwd, wedge_fwd
from core.exceptions import KglError, NotAdmissible, ZeroPivot
from geniso.services import (
    det_minor,
    from_matrix,
    generic_map,
    gl_action,
    lattice_chain,
    matrix_data,
    validate_gi,
)
from lattices.lattice import Lattice, image, intersect, lattice_sum, preimage
from lattices.matrices import MatK, compound, index_sets
from lattices.normalforms import smith_dvr
from strata.grassmann import grass_point, pluecker_coordinates, subbundle_matrix
from strata.services import decompose_stratum, orbit_representative, recompose_stratum, same_point, stratum_patterns
from strata.subspaces import projective_normal

from .sampling import InstanceSampler

logger = logging.getLogger(__name__)

ACTION_PAIRS = 3


@dataclass
class PropertyResult:
    name: str
    checked: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self):
        return not self.failures

    def as_dict(self):
        return {
            "name": self.name,
            "checked": self.checked,
            "skipped": self.skipped,
            "failed": len(self.failures),
            "failures": self.failures,
        }


class Skip(Exception):
    """The drawn instance does not apply to the property."""


# -------------------- Direct sums --------------------

def rank_splits(sizes, ranks):
    """Orders (k1, k2) whose twists add up over the blocks: k1 - r1 and k2 - r2 never of opposite sign."""
    return [
        (k1, k2)
        for k1 in range(sizes[0] + 1)
        for k2 in range(sizes[1] + 1)
        if k1 + k2 > 0 and (k1 - ranks[0]) * (k2 - ranks[1]) >= 0
    ]


def _wedge_rows(wedge, g, k):
    if k == 0:
        return MatK.identity(1), [()]
    return wedge(g, k).matrix, index_sets(g.n, k)


def splits_over_blocks(wedge, total, first, second, k1, k2):
    """Each entry of the wedge of a direct sum is the product of the block entries."""
    big = wedge(total, k1 + k2).matrix
    positions = {idx: pos for pos, idx in enumerate(index_sets(total.n, k1 + k2))}
    a, sets_a = _wedge_rows(wedge, first, k1)
    b, sets_b = _wedge_rows(wedge, second, k2)
    pairs = [
        (p, q, positions[tuple(I1) + tuple(first.n + i for i in I2)])
        for p, I1 in enumerate(sets_a)
        for q, I2 in enumerate(sets_b)
    ]
    return all(
        big[row, col] == a[p, p2] * b[q, q2]
        for p, q, row in pairs
        for p2, q2, col in pairs
    )


# -------------------- Properties --------------------
# Each takes a sampler and returns None on success or a failure message.

def smith_oracle(sampler, n):
    x = sampler.matrix(n)
    m = smith_dvr(x).m
    for r in range(1, n + 1):
        if sum(m[:r]) != compound(x, r).min_tval():
            return f"n={n}: partial sum {r} of {list(m)} differs from the least minor valuation"


def construction_validity(sampler, n):
    report = validate_gi(from_matrix(sampler.matrix(n)))
    if not report.passed:
        return f"n={n}: {[item.name for item in report.failures]}"


def lattice_identities(sampler, n):
    x = sampler.matrix(n)
    data = matrix_data(x)
    chain = lattice_chain(from_matrix(x))
    standard = Lattice.standard(n)
    e_n = intersect(preimage(x, standard), standard)
    if chain.e[n] != e_n or chain.f[n] != image(x, e_n):
        return f"n={n}: E_n or F_n differs"
    for i in range(n + 1):
        if chain.e[i] != lattice_sum(e_n, Lattice.standard(n, data.a[i])):
            return f"n={n}: E_{i} differs"
        if chain.f[i] != lattice_sum(chain.f[n], Lattice.standard(n, data.b[i])):
            return f"n={n}: F_{i} differs"


def ldu_identity(sampler, n):
    x = sampler.matrix(n)
    alpha = tuple(sampler.rng.sample(range(1, n + 1), n))
    beta = tuple(sampler.rng.sample(range(1, n + 1), n))
    try:
        Y, D, Z = decompose_matrix(x, alpha, beta)
    except ZeroPivot as exc:
        raise Skip(str(exc)) from exc
    if MatK.permutation(alpha) * Y * D * Z * MatK.permutation(beta).inv() != x:
        return f"n={n}: n_alpha Y D Z n_beta^-1 differs from the input for {alpha}, {beta}"


def det_factorization(sampler, n):
    phi = from_matrix(sampler.matrix(n))
    alpha, beta = find_admissible(phi)
    moved = gl_action(MatK.permutation(beta).inv(), MatK.permutation(alpha).inv(), phi)
    reduced = split_first(moved).reduced
    first = det_minor(moved, (1,), (1,))
    for r in range(2, n + 1):
        expected = first * det_minor(reduced, range(1, r), range(1, r))
        if det_minor(moved, range(1, r + 1), range(1, r + 1)) != expected:
            return f"n={n}: det_[1,{r}] does not factor"


def admissible_diagonalizable(sampler, n):
    phi = from_matrix(sampler.matrix(n))
    alpha, beta = find_admissible(phi)
    d = diagonalize(phi, alpha, beta)
    report = apply_diagonalization(phi, d)
    if not report.passed:
        return f"n={n}: {[item.name for item in report.failures]}"
    if diagonalize(phi, alpha, beta, order=tuple(reversed(range(n)))) != d:
        return f"n={n}: diagonalization depends on the choice order"
    admissible = set(admissible_pairs(phi))
    for pair in itertools.product(itertools.permutations(range(1, n + 1)), repeat=2):
        try:
            found = diagonalize(phi, *pair)
        except NotAdmissible:
            found = None
        if (found is not None) != (pair in admissible):
            return f"n={n}: pair {pair} diagonalizes={found is not None}, admissible={pair in admissible}"
        if found is not None and not apply_diagonalization(phi, found).passed:
            return f"n={n}: pair {pair} gives a diagonalization that fails its identities"


def chart_covering(sampler, n):
    phi = from_matrix(sampler.matrix(n))
    _, coords, _ = chart_locate(phi)
    if not stratum(phi).is_disjoint_pattern(n):
        return f"n={n}: stratum violates min I + min J >= n"
    if not coords.in_chart(phi.base):
        return f"n={n}: a chart generator has negative valuation"


def exterior_integrality(sampler, n):
    def random_bf(size, r, section):
        return change_frames(model_bf(size, r, section), sampler.unimodular(size), sampler.unimodular(size))

    section = sampler.polynomial(nonzero=True)
    if section.tval() == 0:
        section = section * RatFun.t()
    r = sampler.rng.randint(0, n)
    g = random_bf(n, r, section)
    for k in range(1, n + 1):
        # an entry outside A raises IntegralityViolation
        wedge_fwd(g, k)
        wedge_bwd(g, k)

    sizes = sampler.rng.randint(1, n), sampler.rng.randint(1, n)
    ranks = tuple(sampler.rng.randint(0, size) for size in sizes)
    first, second = (random_bf(size, rank, section) for size, rank in zip(sizes, ranks))
    total = bf_direct_sum(first, second)
    for wedge, split_ranks in ((wedge_fwd, ranks), (wedge_bwd, tuple(s - r for s, r in zip(sizes, ranks)))):
        k1, k2 = sampler.rng.choice(rank_splits(sizes, split_ranks))
        if not splits_over_blocks(wedge, total, first, second, k1, k2):
            return f"{wedge.__name__} of {sizes} blocks, ranks {ranks}, order {k1}+{k2} does not split"


def strata_round_trip(sampler, n):
    # every pattern, each moved by its own random pair
    for I, J in stratum_patterns(n):
        u, v = sampler.invertible_rational_matrix(n), sampler.invertible_rational_matrix(n)
        phi = gl_action(u, v, orbit_representative(n, I, J))
        if not same_point(recompose_stratum(decompose_stratum(phi)), phi):
            return f"n={n}: pattern {I}, {J} does not come back"


def grassmann_equivariance(sampler, n):
    phi = from_matrix(sampler.matrix(n))
    point = grass_point(phi)
    if point.basis.rows != n:
        return f"n={n}: plane of dimension {point.basis.rows}"
    u, v = sampler.unimodular(n), sampler.unimodular(n)
    moved = grass_point(gl_action(u, v, phi)).coordinates
    block = MatK.block_diag(u.residue(), v.residue())
    before = MatK.column(pluecker_coordinates(subbundle_matrix(phi).residue()))
    if moved != tuple(projective_normal(compound(block, n) * before).entries()):
        return f"n={n}: Pluecker vector does not follow the group action"


def action_invariance(sampler, n):
    phi = from_matrix(sampler.matrix(n))
    m = smith_dvr(generic_map(phi)).m
    index = stratum(phi)
    for _ in range(ACTION_PAIRS):
        moved = gl_action(sampler.unimodular(n), sampler.unimodular(n), phi)
        if smith_dvr(generic_map(moved)).m != m:
            return f"n={n}: Smith exponents moved"
        if stratum(moved) != index:
            return f"n={n}: stratum moved"


PROPERTIES = [
    ("smith-oracle", smith_oracle, (1, 2, 3, 4)),
    ("construction-validity", construction_validity, (1, 2, 3, 4)),
    ("lattice-identities", lattice_identities, (1, 2, 3)),
    ("ldu-identity", ldu_identity, (2, 3, 4)),
    ("det-factorization", det_factorization, (2, 3)),
    ("admissible-diagonalizable", admissible_diagonalizable, (2, 3)),
    ("chart-covering", chart_covering, (1, 2, 3)),
    ("exterior-integrality", exterior_integrality, (2, 3)),
    ("strata-round-trip", strata_round_trip, (2, 3)),
    ("grassmann-equivariance", grassmann_equivariance, (1, 2, 3)),
    ("action-invariance", action_invariance, (2, 3)),
]


def run_property(name, check, dimensions, seed, count, max_degree=3, coeff_range=9, max_dimension=4):
    sampler = InstanceSampler(seed=f"{seed}:{name}", max_degree=max_degree, coeff_range=coeff_range)
    dimensions = [n for n in dimensions if n <= max_dimension] or [min(dimensions)]
    result = PropertyResult(name=name)
    started = time.perf_counter()
    for case in range(count):
        n = dimensions[case % len(dimensions)]
        try:
            failure = check(sampler, n)
        except Skip:
            result.skipped += 1
            continue
        except KglError as exc:
            failure = f"n={n}: {type(exc).__name__}: {exc}"
        result.checked += 1
        if failure:
            logger.warning(f"selftest {name} case {case}: {failure}")
            result.failures.append(f"case {case}: {failure}")
    result.seconds = time.perf_counter() - started
    logger.info(f"selftest {name}: {result.checked} checked, {len(result.failures)} failed in {result.seconds:.2f}s")
    return result


def run_suite(seed, count, only=None, **envelope):
    """Every property on ``count`` instances; ``only`` restricts to the named properties."""
    return [
        run_property(name, check, dimensions, seed, count, **envelope)
        for name, check, dimensions in PROPERTIES
        if only is None or name in only
    ]
