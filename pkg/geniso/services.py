# geniso/services.py
import logging
from dataclasses import dataclass, replace

from arith.ratfun import ONE, RatFun
from bf.morphisms import BfMorphism, LineWithSection
from bf.services import change_frames, validate_bf, wedge_bwd, wedge_fwd
from core.exceptions import NotAUnit, SizeMismatch, UnsupportedDegenerate
from core.reports import ValidationReport
from lattices.bases import DVR, FIELD
from lattices.lattice import Lattice
from lattices.matrices import MatK, compound, index_sets
from lattices.normalforms import is_unimodular, smith_dvr

from .chains import GenIso, Twist, TwistedScalar, WedgePhi

logger = logging.getLogger(__name__)


def mu_name(i):
    return f"mu{i}"


def lambda_name(i):
    return f"lambda{i}"


# -------------------- Normal forms --------------------

def e_step(n, i, mu, base=DVR):
    """E_{i+1} -> E_i in standard shape: fwd diag(mu I_{n-i}, I_i), bwd diag(I_{n-i}, mu I_i)."""
    mu = RatFun.coerce(mu)
    return BfMorphism(
        n=n,
        r=i,
        mu=LineWithSection(section=mu, name=mu_name(i)),
        fwd=MatK.diag([mu] * (n - i) + [ONE] * i),
        bwd=MatK.diag([ONE] * (n - i) + [mu] * i),
        base=base,
    )


def f_step(n, i, lam, base=DVR):
    """F_{i+1} -> F_i in standard shape: fwd diag(I_i, lam I_{n-i}), bwd diag(lam I_i, I_{n-i})."""
    lam = RatFun.coerce(lam)
    return BfMorphism(
        n=n,
        r=i,
        mu=LineWithSection(section=lam, name=lambda_name(i)),
        fwd=MatK.diag([ONE] * i + [lam] * (n - i)),
        bwd=MatK.diag([lam] * i + [ONE] * (n - i)),
        base=base,
    )


def normal_form(phis, mus, lambdas, base=DVR):
    """The diagonal generalized isomorphism with iso diag(phis)."""
    n = len(phis)
    if len(mus) != n or len(lambdas) != n:
        raise SizeMismatch(f"{n} diagonal entries need {n} sections on each side")
    return GenIso(
        n=n,
        gs=tuple(e_step(n, i, mus[i], base) for i in range(n)),
        hs=tuple(f_step(n, i, lambdas[i], base) for i in range(n)),
        iso=MatK.diag(phis),
        base=base,
    )


# -------------------- Validation --------------------

def _image_condition(report, name, g, f, point, base):
    g_x = base.fibre(g, point)
    gf_x = base.fibre(g * f, point)
    report.check(name, gf_x.rank() == g_x.rank(), "im(g o f) must equal im(g)")


def validate_gi(phi, subject="generalized isomorphism"):
    report = ValidationReport(subject=subject)
    n, base = phi.n, phi.base

    sized = report.check(
        "size",
        len(phi.gs) == n and len(phi.hs) == n and phi.iso.shape == (n, n)
        and all(g.n == n for g in phi.gs + phi.hs),
        f"n={n}, {len(phi.gs)} E-steps, {len(phi.hs)} F-steps, iso {phi.iso.shape}",
    )
    if not sized:
        return report

    for i, g in enumerate(phi.gs):
        report.check(f"g{i}.rank-tag", g.r == i, f"tag {g.r}")
        report.extend(validate_bf(g, subject=f"g{i}"), prefix=f"g{i}.")
    for i, h in enumerate(phi.hs):
        report.check(f"h{i}.rank-tag", h.r == i, f"tag {h.r}")
        report.extend(validate_bf(h, subject=f"h{i}"), prefix=f"h{i}.")

    iso_integral = report.check("iso-integral", all(base.in_ring(x) for x in phi.iso.entries()))
    report.check("iso-unit", iso_integral and base.is_unit(phi.iso.det()), f"det {phi.iso.det()}")
    if not report.passed:
        logger.warning(f"{subject}: {len(report.failures)} axiom(s) failed before the image conditions")
        return report

    for i, g in enumerate(phi.gs):
        for point in base.vanishing_points(g.section):
            _image_condition(report, f"image-e{i}-bwd@{point}", g.bwd, phi.e_up(0, i), point, base)
            _image_condition(report, f"image-e{i}-fwd@{point}", g.fwd, phi.e_down(i + 1, n), point, base)
    for i, h in enumerate(phi.hs):
        for point in base.vanishing_points(h.section):
            _image_condition(report, f"image-f{i}-fwd@{point}", h.fwd, phi.f_down(i + 1, n), point, base)
            _image_condition(report, f"image-f{i}-bwd@{point}", h.bwd, phi.f_up(0, i), point, base)

    e_total, f_total = phi.e_composite, phi.f_composite
    iso_inv = phi.iso.inv()
    for point in base.points():
        stacked = base.fibre(MatK.vstack(e_total, f_total * phi.iso), point)
        report.check(f"oblique-e@{point}", stacked.rank() == n, "ker(E_n -> E) must inject into F")
        stacked = base.fibre(MatK.vstack(f_total, e_total * iso_inv), point)
        report.check(f"oblique-f@{point}", stacked.rank() == n, "ker(F_n -> F) must inject into E")

    if not report.passed:
        logger.warning(f"{subject}: failed {[item.name for item in report.failures]}")
    return report


# -------------------- Construction from a matrix --------------------

@dataclass(frozen=True)
class MatrixData:
    """Smith exponents and the valuation sequences of the lattice chains."""

    m: tuple
    a: tuple
    b: tuple


def matrix_data(phi_k):
    m = smith_dvr(phi_k).m
    n = len(m)
    a = (0,) + tuple(-min(0, m[n - i]) for i in range(1, n + 1))
    b = (0,) + tuple(max(0, m[i - 1]) for i in range(1, n + 1))
    return MatrixData(m=m, a=a, b=b)


def from_matrix(phi_k):
    """
    Generalized isomorphism over A whose generic fibre is ``phi_k``.
    With U phi V = diag(t^m), the chains are the standard ones with
    sections t^(a_{i+1} - a_i) and t^(b_{i+1} - b_i); the base changes
    V and U^-1 are absorbed into the first step of each chain.
    """
    if not phi_k.is_square():
        raise SizeMismatch(f"generalized isomorphism from a {phi_k.shape} matrix")
    smith = smith_dvr(phi_k)
    data = matrix_data(phi_k)
    n = phi_k.rows
    mus = [RatFun.monomial(data.a[i + 1] - data.a[i]) for i in range(n)]
    lambdas = [RatFun.monomial(data.b[i + 1] - data.b[i]) for i in range(n)]
    normal = normal_form([ONE] * n, mus, lambdas)
    identity = MatK.identity(n)
    gs = (change_frames(normal.gs[0], identity, smith.V),) + normal.gs[1:]
    hs = (change_frames(normal.hs[0], identity, smith.U.inv()),) + normal.hs[1:]
    logger.debug(f"from_matrix: m={data.m} a={data.a} b={data.b}")
    return GenIso(n=n, gs=gs, hs=hs, iso=identity)


def generic_map(phi):
    """F-chain o iso o (E-chain)^-1 over K."""
    if phi.has_zero_section():
        raise UnsupportedDegenerate("a section vanishes identically; the generic fibre is not invertible")
    return phi.f_composite * phi.iso * phi.e_composite.inv()


@dataclass(frozen=True)
class LatticeChain:
    e: tuple
    f: tuple


def lattice_chain(phi):
    """The lattices E_i inside E_0 (x) K and F_i inside F_0 (x) K."""
    if phi.has_zero_section():
        raise UnsupportedDegenerate("lattices need nonzero sections")
    n = phi.n
    return LatticeChain(
        e=tuple(Lattice.from_basis(phi.e_down(0, i)) for i in range(n + 1)),
        f=tuple(Lattice.from_basis(phi.f_down(0, i)) for i in range(n + 1)),
    )


def closed_fibre(phi):
    """Reduction of a generalized isomorphism over A to the residue field."""
    if phi.base.is_field:
        return phi

    def reduce(g):
        return BfMorphism(
            n=g.n,
            r=g.r,
            mu=LineWithSection(section=RatFun.const(g.section.residue()), name=g.mu.name),
            fwd=g.fwd.residue(),
            bwd=g.bwd.residue(),
            base=FIELD,
        )

    return GenIso(
        n=phi.n,
        gs=tuple(reduce(g) for g in phi.gs),
        hs=tuple(reduce(h) for h in phi.hs),
        iso=phi.iso.residue(),
        base=FIELD,
    )


# -------------------- Exterior powers and minors --------------------

def wedge_phi(phi, r):
    """
    r-th exterior power of phi: wedge^r h_0 ... wedge^r h_{n-1}, then
    wedge^r iso, then wedge^-r g_{n-1} ... wedge^-r g_0.
    """
    n = phi.n
    if not 1 <= r <= n:
        raise SizeMismatch(f"exterior power {r} of a rank {n} generalized isomorphism")
    matrix = MatK.identity(len(index_sets(n, r)))
    for h in phi.hs:
        matrix = matrix * wedge_fwd(h, r).matrix
    matrix = matrix * compound(phi.iso, r)
    for g in reversed(phi.gs):
        matrix = matrix * wedge_bwd(g, r).matrix
    counts = {line.name: exponent * r for line, exponent in phi.target_line}
    counts.update({g.mu.name: min(r, n - i) for i, g in enumerate(phi.gs)})
    counts.update({h.mu.name: -max(0, r - i) for i, h in enumerate(phi.hs)})
    return WedgePhi(matrix=matrix, twist=Twist.of(counts, degree=r))


def det_minor(phi, rows, cols):
    """Entry (rows, cols) of wedge^r phi: the twisted minor det_{rows, cols}."""
    rows, cols = tuple(sorted(rows)), tuple(sorted(cols))
    if len(rows) != len(cols):
        raise SizeMismatch(f"index sets of sizes {len(rows)} and {len(cols)}")
    r = len(rows)
    wedge = wedge_phi(phi, r)
    positions = {idx: pos for pos, idx in enumerate(index_sets(phi.n, r))}
    try:
        value = wedge.matrix[positions[rows], positions[cols]]
    except KeyError as exc:
        raise SizeMismatch(f"index set {exc.args[0]} out of range") from exc
    return TwistedScalar(value=value, twist=wedge.twist)


def clear_twist(scalar, phi):
    """Divide out the section powers of the twist; needs the named sections nonzero."""
    sections = phi.sections()
    value = scalar.value
    for name, exponent in scalar.twist.exponents:
        section = sections[name]
        if section.is_zero():
            raise UnsupportedDegenerate(f"section {name} vanishes identically")
        value = value * section ** -exponent
    return value


def twisted_minor_is_unit(phi, rows, cols):
    return phi.base.is_unit(det_minor(phi, rows, cols).value)


# -------------------- Group action and equivalence --------------------

def gl_action(u, v, phi):
    """(u, v) . phi = v o phi o u^-1, acting on the first step of each chain."""
    for name, g in (("u", u), ("v", v)):
        if not is_unimodular(g, phi.base):
            raise NotAUnit(f"{name} is not invertible over the base ring")
    identity = MatK.identity(phi.n)
    return replace(
        phi,
        gs=(change_frames(phi.gs[0], identity, u),) + tuple(phi.gs[1:]),
        hs=(change_frames(phi.hs[0], identity, v),) + tuple(phi.hs[1:]),
    )


def valuation_data(phi):
    return (
        tuple(phi.base.val(s) for s in phi.mus),
        tuple(phi.base.val(s) for s in phi.lambdas),
    )


def equivalent(first, second):
    """
    Equality of points with all sections nonzero: same generic map, same
    section valuations, same lattices E_i and F_i.
    """
    if first.has_zero_section() or second.has_zero_section():
        raise UnsupportedDegenerate("equivalence is decided only when every section is nonzero")
    if first.n != second.n:
        return False
    return (
        generic_map(first) == generic_map(second)
        and valuation_data(first) == valuation_data(second)
        and lattice_chain(first) == lattice_chain(second)
    )
