"""Kodaira fiber analysis of Weierstrass models  Y^2 Z = X^3 + a X Z^2 + b Z^3
over the projective line.

Fibers are grouped by place (Galois orbit of points); a place of degree g
stands for g identical singular fibers.  A valuation of an identically
zero coefficient form is treated as +infinity, so it satisfies every
">=" constraint in the classification table.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import overlattice as ov
from .errors import (
    AlreadyMinimal,
    DegreeMismatch,
    DegreeUnderflow,
    IdenticallyZeroDiscriminant,
    NoRowMatch,
    NonMinimalModel,
)
from .exactpoly import BinaryForm, Place, divide_exact, gcdfree_basis, valuation_at
from .lattice import IntegerLattice, direct_sum, discriminant_form, make_named

INF = None  # valuation of the zero form


@dataclass(frozen=True)
class WeierstrassModel:
    """Fundamental degree d plus coefficient forms of degrees 4d and 6d.

    d = 2 is the K3 case; d = 1 gives a rational elliptic surface."""

    d: int
    alpha: BinaryForm
    beta: BinaryForm

    def __post_init__(self):
        if self.d < 1:
            raise DegreeMismatch("d must be a positive integer")
        if self.alpha.degree != 4 * self.d:
            raise DegreeMismatch(
                f"alpha must have degree {4 * self.d}, got {self.alpha.degree}"
            )
        if self.beta.degree != 6 * self.d:
            raise DegreeMismatch(
                f"beta must have degree {6 * self.d}, got {self.beta.degree}"
            )


@dataclass(frozen=True)
class KodairaType:
    """Classification tag; n is only meaningful for I(n) and Istar(n)."""

    tag: str
    n: int = 0

    @property
    def label(self) -> str:
        if self.tag == "I":
            return f"I{self.n}"
        if self.tag == "Istar":
            return f"I{self.n}*"
        return {"II": "II", "III": "III", "IV": "IV",
                "IVstar": "IV*", "IIIstar": "III*", "IIstar": "II*"}[self.tag]

    @property
    def euler(self) -> int:
        if self.tag == "I":
            return self.n
        if self.tag == "Istar":
            return self.n + 6
        return {"II": 2, "III": 3, "IV": 4,
                "IVstar": 8, "IIIstar": 9, "IIstar": 10}[self.tag]

    @property
    def root_name(self):
        """ADE label of the root lattice contribution, or None."""
        if self.tag == "I":
            return None if self.n == 1 else f"A{self.n - 1}"
        if self.tag == "Istar":
            return f"D{self.n + 4}"
        return {"II": None, "III": "A1", "IV": "A2",
                "IVstar": "E6", "IIIstar": "E7", "IIstar": "E8"}[self.tag]

    @property
    def singularity(self):
        """ADE type of the Weierstrass-model surface singularity."""
        if self.tag == "Istar":
            return f"D{self.n + 4}"
        return self.root_name

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class FiberReport:
    place: Place
    nu_alpha: int | None
    nu_beta: int | None
    nu_delta: int
    type: KodairaType

    @property
    def count(self) -> int:
        return self.place.geometric_count

    @property
    def euler(self) -> int:
        return self.type.euler


@dataclass(frozen=True)
class SurfaceReport:
    fibers: tuple
    euler_total: int
    trivial_lattice: IntegerLattice
    torsion_candidates: tuple
    polarization_candidates: tuple


def discriminant_model(m: WeierstrassModel) -> BinaryForm:
    """Delta = 4 alpha^3 + 27 beta^2, of degree 12d."""
    delta = 4 * m.alpha**3 + 27 * m.beta**2
    if delta.is_zero():
        raise IdenticallyZeroDiscriminant(
            "4 alpha^3 + 27 beta^2 vanishes identically"
        )
    return delta


def _ge(v, bound: int) -> bool:
    return v is INF or v >= bound


def _eq(v, value: int) -> bool:
    return v is not INF and v == value


def classify_place(nu_alpha, nu_beta, nu_delta: int) -> KodairaType:
    """Match the valuation triple against the classification table.

    Raises NonMinimalModel for (>=4, >=6) with no row match, NoRowMatch
    for triples no Weierstrass model can produce."""
    a, b, d = nu_alpha, nu_beta, nu_delta
    if d < 1:
        raise NoRowMatch("place is not singular (nu_delta = 0)")
    if _eq(a, 0) and _eq(b, 0):
        return KodairaType("I", d)
    if _ge(a, 1) and _eq(b, 1) and d == 2:
        return KodairaType("II")
    if _eq(a, 1) and _ge(b, 2) and d == 3:
        return KodairaType("III")
    if _ge(a, 2) and _eq(b, 2) and d == 4:
        return KodairaType("IV")
    if d == 6 and (
        (_eq(a, 2) and _eq(b, 3))
        or (_ge(a, 3) and _eq(b, 3))
        or (_eq(a, 2) and _ge(b, 4))
    ):
        return KodairaType("Istar", 0)
    if _eq(a, 2) and _eq(b, 3) and d >= 7:
        return KodairaType("Istar", d - 6)
    if _ge(a, 3) and _eq(b, 4) and d == 8:
        return KodairaType("IVstar")
    if _eq(a, 3) and _ge(b, 5) and d == 9:
        return KodairaType("IIIstar")
    if _ge(a, 4) and _eq(b, 5) and d == 10:
        return KodairaType("IIstar")
    if _ge(a, 4) and _ge(b, 6):
        raise NonMinimalModel(
            f"valuations ({a},{b},{d}) exceed every table row; "
            "the model is not relatively minimal"
        )
    raise NoRowMatch(f"no table row matches valuations ({a},{b},{d})")


def _singular_places(m: WeierstrassModel):
    """(place, nu_alpha, nu_beta, nu_delta) for each zero place of Delta."""
    delta = discriminant_model(m)
    forms = [f for f in (m.alpha, m.beta) if not f.is_zero()] + [delta]
    places, vals = gcdfree_basis(forms)
    out = []
    for j, p in enumerate(places):
        nd = valuation_at(delta, p)
        if nd == 0:
            continue
        na = INF if m.alpha.is_zero() else valuation_at(m.alpha, p)
        nb = INF if m.beta.is_zero() else valuation_at(m.beta, p)
        out.append((p, na, nb, nd))
    return out


def classify_fibers(m: WeierstrassModel):
    """One FiberReport per singular place; NonMinimalModel is propagated
    with the offending place attached."""
    reports = []
    for p, na, nb, nd in _singular_places(m):
        try:
            ktype = classify_place(na, nb, nd)
        except NonMinimalModel as err:
            raise NonMinimalModel(str(err), place=p) from None
        reports.append(FiberReport(p, na, nb, nd, ktype))
    return reports


def euler_total(m: WeierstrassModel) -> int:
    """Sum of Euler numbers over all fibers; 12d for a minimal model."""
    return sum(r.count * r.euler for r in classify_fibers(m))


_ROOT_BUILDERS = {
    "A": lambda n: make_named("A", n, negate=True),
    "D": lambda n: make_named("D", n, negate=True),
    "E": lambda n: make_named(f"E{n}", negate=True),
}


def _root_lattice(name: str) -> IntegerLattice:
    return _ROOT_BUILDERS[name[0]](int(name[1:]))


def trivial_lattice(m: WeierstrassModel) -> IntegerLattice:
    """H plus one negated root block per fiber, in place order."""
    blocks = [make_named("H")]
    for r in classify_fibers(m):
        name = r.type.root_name
        if name is None:
            continue
        blocks.extend(_root_lattice(name) for _ in range(r.count))
    return direct_sum(*blocks)


def mw_torsion_candidates(m: WeierstrassModel, bound: int = ov.DEFAULT_ENUM_BOUND):
    """Isotropic subgroups of the trivial-lattice discriminant group,
    as invariant-factor lists.  These bound the section torsion; they are
    candidates, not assertions."""
    A = discriminant_form(trivial_lattice(m))
    return [_subgroup_factors(A, G) for G in ov.isotropic_subgroups(A, bound)]


def _subgroup_factors(A, G) -> tuple:
    """Invariant factors of an isotropic subgroup, from coordinate lifts."""
    from . import intmat

    k = len(A.invariant_factors)
    if k == 0 or G.order == 1:
        return ()
    d = list(A.invariant_factors)
    base_cols = [[d[i] * int(i == j) for i in range(k)] for j in range(k)]
    rows = intmat.hermite_column_basis([list(e) for e in G.elements] + base_cols, k)
    inv = intmat.mat_inverse(rows)
    M = intmat.mat_mul(inv, base_cols)
    facs = intmat.invariant_factors([[int(x) for x in row] for row in M])
    return tuple(f for f in facs if f > 1)


@dataclass(frozen=True)
class PolarizationCandidate:
    """Invariant summary of N = overlattice of the trivial lattice by a
    torsion candidate subgroup."""

    torsion: tuple
    rank: int
    signature: tuple
    disc: int
    q_multiset: tuple


def candidate_polarizations(m: WeierstrassModel, bound: int = ov.DEFAULT_ENUM_BOUND):
    from .lattice import discriminant as disc_of
    from .lattice import signature as sig_of

    L = trivial_lattice(m)
    A = discriminant_form(L)
    out = []
    for G in ov.isotropic_subgroups(A, bound):
        N, _ = ov.build_overlattice(L, G)
        out.append(
            PolarizationCandidate(
                torsion=_subgroup_factors(A, G),
                rank=N.rank,
                signature=sig_of(N).as_tuple(),
                disc=disc_of(N),
                q_multiset=discriminant_form(N).q_multiset(),
            )
        )
    return out


def verify_two_torsion_section(m: WeierstrassModel, X: BinaryForm) -> bool:
    """True iff X^3 + alpha X + beta vanishes identically: then Y = 0 gives
    a point of order two on every fiber, confirming 2-torsion."""
    if X.degree != 2 * m.d:
        raise DegreeMismatch(f"X must have degree {2 * m.d}")
    return (X**3 + m.alpha * X + m.beta).is_zero()


def reduce_non_minimal(m: WeierstrassModel) -> WeierstrassModel:
    """Strip p^4 from alpha and p^6 from beta at every non-minimal place,
    lowering d accordingly, until the model is minimal."""
    cur = m
    reduced = False
    while True:
        bad = None
        for p, na, nb, _nd in _singular_places(cur):
            if _ge(na, 4) and _ge(nb, 6):
                bad = p
                break
        if bad is None:
            if not reduced:
                raise AlreadyMinimal("model has no place with (>=4, >=6)")
            return cur
        dd = cur.d - bad.form.degree
        if dd < 1:
            raise DegreeUnderflow("reduction would drop d below 1")
        alpha = (
            BinaryForm.zero(4 * dd)
            if cur.alpha.is_zero()
            else divide_exact(cur.alpha, bad.form**4)
        )
        beta = (
            BinaryForm.zero(6 * dd)
            if cur.beta.is_zero()
            else divide_exact(cur.beta, bad.form**6)
        )
        cur = WeierstrassModel(dd, alpha, beta)
        reduced = True


def surface_report(m: WeierstrassModel, bound: int = ov.DEFAULT_ENUM_BOUND) -> SurfaceReport:
    fibers = tuple(classify_fibers(m))
    return SurfaceReport(
        fibers=fibers,
        euler_total=sum(r.count * r.euler for r in fibers),
        trivial_lattice=trivial_lattice(m),
        torsion_candidates=tuple(mw_torsion_candidates(m, bound)),
        polarization_candidates=tuple(candidate_polarizations(m, bound)),
    )
