# strata/services.py
"""
Decomposition of a point of a stratum over the residue field.

A point whose sections vanish exactly at I (E side) and J (F side) is
the same as a pair of flags, one complete collineation per element of I
and of J between the flag pieces, and an isomorphism of rank
n' = min I + min J - n between the two middle pieces (the core). Empty I
or J counts as min = n.
"""
import itertools
import logging
from dataclasses import dataclass

from arith.ratfun import ONE, ZERO
from bf.morphisms import BfMorphism, LineWithSection
from core.exceptions import Inconsistent, InvalidStratumData, Singular
from geniso.chains import GenIso
from geniso.services import closed_fibre, generic_map, gl_action, lambda_name, mu_name, normal_form, validate_gi
from lattices.bases import FIELD
from lattices.fields import complement, coordinates, subspace_intersection
from lattices.matrices import MatK

from .collineations import CompleteCollineation, collineation_class, vainsencher_type, validate_cc
from .subspaces import Flag, image, kernel, lift, nothing, quotient_coordinates, whole

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StrataDecomposition:
    """
    ``phis[p - 1]`` runs from F-piece r - p + 1 to E-piece s + p + 1 and
    ``psis[q - 1]`` from E-piece s - q + 1 to F-piece r + q + 1 (pieces of
    a flag are numbered from 1). The core runs from E-piece s + 1 to
    F-piece r + 1.
    """

    n: int
    I: tuple
    J: tuple
    e_flag: Flag
    f_flag: Flag
    phis: tuple
    psis: tuple
    core: GenIso

    @property
    def r(self):
        return len(self.I)

    @property
    def s(self):
        return len(self.J)

    def as_dict(self):
        return {
            "n": self.n,
            "I": list(self.I),
            "J": list(self.J),
            "e_flag": self.e_flag.as_dict(),
            "f_flag": self.f_flag.as_dict(),
            "phis": [cc.as_dict() for cc in self.phis],
            "psis": [cc.as_dict() for cc in self.psis],
            "core": {
                "n": self.core.n,
                "map": [[str(x) for x in row] for row in generic_map(self.core).tolist()],
            },
        }


# -------------------- Patterns and representatives --------------------

def _leading(indices, n):
    return min(indices) if indices else n


def flag_dims(n, I, J):
    """Type of the E-flag: 0, n - j_s, ..., n - j_1, i_1, ..., i_r, n."""
    return (0,) + tuple(n - j for j in sorted(J, reverse=True)) + tuple(sorted(I)) + (n,)


def stratum_patterns(n):
    """Every (I, J) with min I + min J >= n, in a fixed order."""
    subsets = [c for k in range(n + 1) for c in itertools.combinations(range(n), k)]
    return [(I, J) for I in subsets for J in subsets if _leading(I, n) + _leading(J, n) >= n]


def orbit_representative(n, I, J):
    """Normal form with unit diagonal whose sections vanish exactly on I and J."""
    I, J = tuple(sorted(I)), tuple(sorted(J))
    if any(not 0 <= x < n for x in I + J):
        raise InvalidStratumData(f"indices {list(I)}, {list(J)} out of range for n={n}")
    if _leading(I, n) + _leading(J, n) < n:
        raise InvalidStratumData(f"min I + min J < n for I={list(I)}, J={list(J)}")
    return normal_form(
        [ONE] * n,
        [ZERO if i in I else ONE for i in range(n)],
        [ZERO if j in J else ONE for j in range(n)],
        FIELD,
    )


def mirrored(phi):
    """The same point read from F to E: chains swapped, iso inverted."""
    return GenIso(n=phi.n, gs=phi.hs, hs=phi.gs, iso=phi.iso.inv(), base=phi.base)


def vanishing_pattern(phi):
    return (
        tuple(i for i, mu in enumerate(phi.mus) if mu.is_zero()),
        tuple(j for j, lam in enumerate(phi.lambdas) if lam.is_zero()),
    )


# -------------------- Decomposition --------------------

def _up_kernel(phi, a, b):
    """ker(E_a -> E_b) along the twisted maps; everything once b passes E_n."""
    if b > phi.n:
        return whole(phi.n)
    return kernel(phi.e_up(a, b))


def _e_flag(phi, I, J):
    n = phi.n
    f_kernels = [kernel(phi.f_down(j, n) * phi.iso) for j in reversed(J)]
    steps = [nothing(n)]
    steps += [image(phi.e_composite, k) for k in f_kernels]
    steps += [kernel(phi.e_up(0, i + 1)) for i in I]
    steps.append(whole(n))
    flag = Flag(dims=tuple(step.cols for step in steps), steps=tuple(steps))
    expected = flag_dims(n, I, J)
    if flag.dims != expected or not flag.is_consistent():
        raise InvalidStratumData(f"flag of type {list(flag.dims)}, expected {list(expected)}")
    return flag


def _collineations(phi, I, J, e_flag, f_flag):
    """
    One chain per element i_p of I: the pieces ker(E_{i_p} <- E_{i_p + k})
    cut down by ker(E_{i_p + k} -> E_{i_{p+1} + 1}), with the E-flag piece
    at the target end and the F-flag piece, carried back through E_n, at
    the source end.
    """
    n = phi.n
    r, s = len(I), len(J)
    e_pieces, f_pieces = e_flag.pieces(), f_flag.pieces()
    bounds = tuple(I) + (n,)
    through = phi.f_composite * phi.iso
    result = []
    for p in range(1, r + 1):
        low, high = bounds[p - 1], bounds[p]
        m = high - low
        target = e_pieces[s + p]
        source = phi.e_down(high, n) * lift(through, f_pieces[r - p], kernel(phi.e_down(low, n)))
        bases = [target]
        bases += [
            subspace_intersection(kernel(phi.e_down(low, low + k)), _up_kernel(phi, low + k, high + 1))
            for k in range(1, m)
        ]
        bases.append(source)

        chain = [BfMorphism(
            n=m,
            r=0,
            mu=LineWithSection(section=ZERO, name=lambda_name(0)),
            fwd=MatK.zeros(m, m),
            bwd=coordinates(bases[1], phi.e_up(0, low + 1) * target),
            base=FIELD,
        )]
        for k in range(1, m):
            g = phi.gs[low + k]
            chain.append(BfMorphism(
                n=m,
                r=k,
                mu=LineWithSection(section=g.section, name=lambda_name(k)),
                fwd=coordinates(bases[k], g.fwd * bases[k + 1]),
                bwd=coordinates(bases[k + 1], g.bwd * bases[k]),
                base=FIELD,
            ))
        result.append(CompleteCollineation(n=m, chain=tuple(chain)))
    return tuple(result)


def _core_side(phi, i1, j1, middle):
    """
    Complement bases of im(ker(E_n -> F_{j1})) in ker(E_a -> E_{i1 + 1}),
    a = n - j1, ..., i1. The first one is the middle flag piece pulled back
    along the invertible E_{n - j1} -> E_0.
    """
    n = phi.n
    start = n - j1
    f_kernel = kernel(phi.f_down(j1, n) * phi.iso)
    uppers, lowers = [], []
    for a in range(start, i1 + 1):
        uppers.append(_up_kernel(phi, a, i1 + 1))
        lowers.append(image(phi.e_down(a, n), f_kernel))
    bases = [phi.e_down(0, start).inv() * middle]
    bases += [complement(lower, upper) for upper, lower in zip(uppers[1:], lowers[1:])]
    return bases, lowers


def _induced_step(g, k, bases, lowers, name):
    return BfMorphism(
        n=len(bases) - 1,
        r=k,
        mu=LineWithSection(section=g.section, name=name),
        fwd=quotient_coordinates(bases[k], lowers[k], g.fwd * bases[k + 1]),
        bwd=quotient_coordinates(bases[k + 1], lowers[k + 1], g.bwd * bases[k]),
        base=FIELD,
    )


def _core(phi, I, J, e_flag, f_flag):
    n = phi.n
    i1, j1 = _leading(I, n), _leading(J, n)
    size = i1 + j1 - n
    e_bases, e_lowers = _core_side(phi, i1, j1, e_flag.pieces()[len(J)])
    f_bases, f_lowers = _core_side(mirrored(phi), j1, i1, f_flag.pieces()[len(I)])

    gs = tuple(_induced_step(phi.gs[n - j1 + k], k, e_bases, e_lowers, mu_name(k)) for k in range(size))
    hs = tuple(_induced_step(phi.hs[n - i1 + k], k, f_bases, f_lowers, lambda_name(k)) for k in range(size))
    # a vector of E'_{n'} lifts to E_n; the choice of lift dies in F'_{n'}
    lifted = lift(phi.e_down(i1, n), e_bases[size], whole(n))
    iso = quotient_coordinates(f_bases[size], f_lowers[size], phi.f_down(j1, n) * phi.iso * lifted)
    return GenIso(n=size, gs=gs, hs=hs, iso=iso, base=FIELD)


def decompose_stratum(phi, I=None, J=None):
    """Flags, collineations and core of a point; a point over A is reduced to its closed fibre first."""
    if not phi.base.is_field:
        phi = closed_fibre(phi)
    actual_I, actual_J = vanishing_pattern(phi)
    if I is not None and tuple(sorted(I)) != actual_I:
        raise InvalidStratumData(f"mu vanishes at {list(actual_I)}, not at {sorted(I)}")
    if J is not None and tuple(sorted(J)) != actual_J:
        raise InvalidStratumData(f"lambda vanishes at {list(actual_J)}, not at {sorted(J)}")
    I, J, n = actual_I, actual_J, phi.n
    if _leading(I, n) + _leading(J, n) < n:
        raise InvalidStratumData(f"min I + min J < n for I={list(I)}, J={list(J)}")
    report = validate_gi(phi)
    if not report.passed:
        raise InvalidStratumData(f"not a valid point: {[item.name for item in report.failures]}")

    e_flag = _e_flag(phi, I, J)
    f_flag = _e_flag(mirrored(phi), J, I)
    decomposition = StrataDecomposition(
        n=n,
        I=I,
        J=J,
        e_flag=e_flag,
        f_flag=f_flag,
        phis=_collineations(phi, I, J, e_flag, f_flag),
        psis=_collineations(mirrored(phi), J, I, f_flag, e_flag),
        core=_core(phi, I, J, e_flag, f_flag),
    )
    logger.debug(f"decompose_stratum: I={list(I)} J={list(J)} core rank {decomposition.core.n}")
    return decomposition


# -------------------- Recomposition --------------------

def _check_consistent(dec):
    n, I, J = dec.n, tuple(dec.I), tuple(dec.J)
    if _leading(I, n) + _leading(J, n) < n:
        raise Inconsistent(f"min I + min J < n for I={list(I)}, J={list(J)}")
    for name, flag, expected in (
        ("E", dec.e_flag, flag_dims(n, I, J)),
        ("F", dec.f_flag, flag_dims(n, J, I)),
    ):
        if flag.dims != expected or flag.ambient != n or not flag.is_consistent():
            raise Inconsistent(f"{name}-flag of type {list(flag.dims)}, expected {list(expected)}")
    if len(dec.phis) != len(I) or len(dec.psis) != len(J):
        raise Inconsistent(f"{len(dec.phis)} + {len(dec.psis)} collineations for |I| = {len(I)}, |J| = {len(J)}")

    e_dims, f_dims = dec.e_flag.dims, dec.f_flag.dims
    r, s = len(I), len(J)
    for p, cc in enumerate(dec.phis, start=1):
        sizes = (e_dims[s + p + 1] - e_dims[s + p], f_dims[r - p + 1] - f_dims[r - p])
        if sizes != (cc.n, cc.n):
            raise Inconsistent(f"phi_{p} has rank {cc.n}, the flag pieces have dimensions {sizes}")
    for q, cc in enumerate(dec.psis, start=1):
        sizes = (f_dims[r + q + 1] - f_dims[r + q], e_dims[s - q + 1] - e_dims[s - q])
        if sizes != (cc.n, cc.n):
            raise Inconsistent(f"psi_{q} has rank {cc.n}, the flag pieces have dimensions {sizes}")
    if dec.core.n != _leading(I, n) + _leading(J, n) - n:
        raise Inconsistent(f"core of rank {dec.core.n}")

    parts = [(f"phi{p}", validate_cc(cc)) for p, cc in enumerate(dec.phis, start=1)]
    parts += [(f"psi{q}", validate_cc(cc)) for q, cc in enumerate(dec.psis, start=1)]
    parts.append(("core", validate_gi(dec.core)))
    failed = [name for name, report in parts if not report.passed]
    if failed:
        raise Inconsistent(f"invalid parts: {failed}")
    degenerate = [cc for cc in dec.phis + dec.psis if vainsencher_type(cc)]
    if degenerate:
        raise Inconsistent(f"{len(degenerate)} collineation(s) outside the open orbit")
    if dec.core.has_zero_section():
        raise Inconsistent("the core must lie in the open orbit")


def recompose_stratum(dec):
    """
    The point with the given decomposition: the orbit representative of
    (I, J), moved by a pair of matrices that carry its flags onto the
    given ones and act on the flag pieces so that every collineation and
    the core come out as prescribed.
    """
    _check_consistent(dec)
    n, I, J = dec.n, tuple(dec.I), tuple(dec.J)
    if not I and not J:
        return dec.core

    representative = orbit_representative(n, I, J)
    model = decompose_stratum(representative)
    r, s = len(I), len(J)
    blocks = [None] * (r + s + 1)
    try:
        blocks[s] = generic_map(dec.core).inv() * generic_map(model.core)
        for p in range(1, r + 1):
            blocks[s + p] = collineation_class(dec.phis[p - 1]) * collineation_class(model.phis[p - 1]).inv()
        for q in range(1, s + 1):
            blocks[s - q] = collineation_class(dec.psis[q - 1]).inv() * collineation_class(model.psis[q - 1])
    except Singular as exc:
        raise Inconsistent(f"a collineation is not in the open orbit: {exc}") from exc

    u = dec.e_flag.adapted_basis() * MatK.block_diag(*blocks) * model.e_flag.adapted_basis().inv()
    v = dec.f_flag.adapted_basis() * model.f_flag.adapted_basis().inv()
    logger.debug(f"recompose_stratum: I={list(I)} J={list(J)}")
    return gl_action(u, v, representative)


# -------------------- Comparison --------------------

def same_decomposition(first, second):
    """Equal flags, proportional collineations and equal cores."""
    if (first.n, first.I, first.J) != (second.n, second.I, second.J):
        return False
    if not (first.e_flag.same_as(second.e_flag) and first.f_flag.same_as(second.f_flag)):
        return False
    for a, b in zip(first.phis + first.psis, second.phis + second.psis):
        if collineation_class(a) != collineation_class(b):
            return False
    return generic_map(first.core) == generic_map(second.core)


def same_point(first, second):
    """Equality of two points of KGl_n over the residue field."""
    if first.n != second.n:
        return False
    first, second = closed_fibre(first), closed_fibre(second)
    if vanishing_pattern(first) != vanishing_pattern(second):
        return False
    return same_decomposition(decompose_stratum(first), decompose_stratum(second))
