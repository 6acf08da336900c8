"""Exact homogeneous binary forms in (s, t) over the rationals.

A form of degree D is stored as D+1 rational coefficients, entry i being
the coefficient of s^(D-i) t^i.  All factor-structure questions (gcd,
square-free decomposition, valuations) are answered without irreducible
factorization: we work with the dehomogenization f(x, 1) and carry the
pure t-power separately, since it is exactly the degree drop under
dehomogenization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .errors import BothZero, DegreeMismatch, ZeroForm

_X = sympy.Symbol("x")


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, sympy.Rational):
        return Fraction(int(v.p), int(v.q))
    raise TypeError(f"not an exact rational: {v!r}")


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous polynomial in (s, t); immutable and exact."""

    degree: int
    coeffs: tuple

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("need exactly degree+1 coefficients")
        object.__setattr__(
            self, "coeffs", tuple(_as_fraction(c) for c in self.coeffs)
        )

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_coeffs(coeffs) -> "BinaryForm":
        coeffs = list(coeffs)
        return BinaryForm(len(coeffs) - 1, tuple(coeffs))

    @staticmethod
    def zero(degree: int) -> "BinaryForm":
        return BinaryForm(degree, tuple([Fraction(0)] * (degree + 1)))

    @staticmethod
    def monomial(deg_s: int, deg_t: int, coeff=1) -> "BinaryForm":
        d = deg_s + deg_t
        cs = [Fraction(0)] * (d + 1)
        cs[deg_t] = _as_fraction(coeff)
        return BinaryForm(d, tuple(cs))

    @staticmethod
    def s() -> "BinaryForm":
        return BinaryForm.monomial(1, 0)

    @staticmethod
    def t() -> "BinaryForm":
        return BinaryForm.monomial(0, 1)

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def evaluate(self, sv, tv) -> Fraction:
        sv, tv = _as_fraction(sv), _as_fraction(tv)
        acc = Fraction(0)
        for i, c in enumerate(self.coeffs):
            acc += c * sv ** (self.degree - i) * tv**i
        return acc

    def t_valuation(self) -> int:
        """Exponent of t dividing the form."""
        if self.is_zero():
            raise ZeroForm("zero form has no valuations")
        return next(i for i, c in enumerate(self.coeffs) if c != 0)

    def s_valuation(self) -> int:
        if self.is_zero():
            raise ZeroForm("zero form has no valuations")
        return self.degree - max(i for i, c in enumerate(self.coeffs) if c != 0)

    def leading_coeff(self) -> Fraction:
        """First nonzero coefficient in s-descending order."""
        if self.is_zero():
            raise ZeroForm("zero form has no leading coefficient")
        return next(c for c in self.coeffs if c != 0)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if self.degree != other.degree:
            raise DegreeMismatch(
                f"cannot add degrees {self.degree} and {other.degree}"
            )
        return BinaryForm(
            self.degree,
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        if self.degree != other.degree:
            raise DegreeMismatch(
                f"cannot subtract degrees {self.degree} and {other.degree}"
            )
        return BinaryForm(
            self.degree,
            tuple(a - b for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self) -> "BinaryForm":
        return BinaryForm(self.degree, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, BinaryForm):
            d = self.degree + other.degree
            out = [Fraction(0)] * (d + 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    if b != 0:
                        out[i + j] += a * b
            return BinaryForm(d, tuple(out))
        c = _as_fraction(other)
        return BinaryForm(self.degree, tuple(c * a for a in self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "BinaryForm":
        if k < 0:
            raise ValueError("negative power")
        acc = BinaryForm.from_coeffs([1])
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def scale(self, c) -> "BinaryForm":
        return self * c

    # -- conversions --------------------------------------------------

    def _dehom(self) -> sympy.Poly:
        """f(x, 1); together with the formal degree this determines f."""
        cs = [sympy.Rational(c.numerator, c.denominator) for c in self.coeffs]
        return sympy.Poly(cs, _X, domain="QQ")

    @staticmethod
    def _rehom(poly: sympy.Poly, degree: int) -> "BinaryForm":
        if poly.is_zero:
            return BinaryForm.zero(degree)
        pcs = poly.all_coeffs()
        if len(pcs) - 1 > degree:
            raise ValueError("polynomial degree exceeds target degree")
        cs = [Fraction(0)] * (degree + 1)
        for j, c in enumerate(pcs):
            cs[degree - (len(pcs) - 1) + j] = _as_fraction(sympy.Rational(c))
        return BinaryForm(degree, tuple(cs))

    # -- display ------------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return f"0 (degree {self.degree})"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = []
            if self.degree - i:
                mono.append("s" + (f"^{self.degree - i}" if self.degree - i > 1 else ""))
            if i:
                mono.append("t" + (f"^{i}" if i > 1 else ""))
            body = "*".join(mono) or "1"
            parts.append(f"{c}*{body}" if abs(c) != 1 or not mono else ("-" if c < 0 else "") + body)
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class Place:
    """Square-free, normalized binary form standing for a Galois orbit of
    points on the projective line; the factor t alone is the point [1:0]."""

    form: BinaryForm

    def __post_init__(self):
        if self.form.is_zero():
            raise ZeroForm("a place cannot be the zero form")
        if self.form.leading_coeff() != 1:
            raise ValueError("place form must be normalized")
        if not is_squarefree(self.form):
            raise ValueError("place form must be square-free")

    @property
    def geometric_count(self) -> int:
        return self.form.degree

    def __str__(self):
        return str(self.form)


def normalize(f: BinaryForm):
    """Split f into (content, normalized form with first nonzero coeff 1)."""
    if f.is_zero():
        raise ZeroForm("cannot normalize the zero form")
    c = f.leading_coeff()
    return c, f * (1 / c)


def divide_exact(f: BinaryForm, g: BinaryForm):
    """f / g if g divides f exactly, else None."""
    if g.is_zero():
        raise ZeroForm("division by the zero form")
    if f.is_zero():
        return BinaryForm.zero(max(f.degree - g.degree, 0))
    if f.degree < g.degree or f.t_valuation() < g.t_valuation():
        return None
    q, r = sympy.div(f._dehom(), g._dehom())
    if not r.is_zero:
        return None
    return BinaryForm._rehom(q, f.degree - g.degree)


def is_squarefree(f: BinaryForm) -> bool:
    """Square-free test: pure t-power at most 1, and the dehomogenization
    shares no factor with its derivative."""
    if f.is_zero():
        raise ZeroForm("zero form")
    if f.t_valuation() > 1:
        return False
    p = f._dehom()
    if p.degree() == 0:
        return True
    return sympy.gcd(p, p.diff(_X)).degree() == 0


def bf_gcd(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Normalized gcd; the pure t-power is handled by explicit extraction."""
    if f.is_zero() and g.is_zero():
        raise BothZero("gcd of two zero forms")
    if f.is_zero():
        return normalize(g)[1]
    if g.is_zero():
        return normalize(f)[1]
    tpow = min(f.t_valuation(), g.t_valuation())
    p = sympy.gcd(f._dehom(), g._dehom())
    p = p.monic()
    return BinaryForm._rehom(p, p.degree() + tpow)


def squarefree_decomposition(f: BinaryForm):
    """Write f = c * prod g_k^k with the g_k square-free, pairwise coprime
    and normalized.  Returns (factors, content) with factors sorted by
    descending multiplicity; factors sharing a multiplicity are merged.
    """
    if f.is_zero():
        raise ZeroForm("square-free decomposition of the zero form")
    p = f._dehom()
    by_mult: dict[int, BinaryForm] = {}
    _, flist = p.sqf_list()
    for g, k in flist:
        g = g.monic()
        if g.degree() == 0:
            continue
        bf = BinaryForm._rehom(g, g.degree())
        by_mult[k] = by_mult[k] * bf if k in by_mult else bf
    tpow = f.t_valuation()
    if tpow:
        t = BinaryForm.t()
        by_mult[tpow] = by_mult[tpow] * t if tpow in by_mult else t
    factors = [(g, k) for k, g in sorted(by_mult.items(), reverse=True)]
    prod = BinaryForm.from_coeffs([1])
    for g, k in factors:
        prod = prod * g**k
    content = f.leading_coeff() / prod.leading_coeff()
    if prod * content != f:
        raise AssertionError("square-free decomposition failed to reconstruct")
    return factors, content


def valuation_at(f: BinaryForm, p: Place) -> int:
    """Largest k with p^k dividing f."""
    if f.is_zero():
        raise ZeroForm("valuation of the zero form")
    k = 0
    cur = f
    while True:
        nxt = divide_exact(cur, p.form)
        if nxt is None:
            return k
        cur = nxt
        k += 1


def gcdfree_basis(forms):
    """Pairwise-coprime square-free places covering all factors of the
    inputs, plus the valuation matrix (rows = inputs, cols = places).

    Because every place divides each square-free layer of each input
    either fully or not at all, each input has constant valuation across
    the roots of each place; no irreducible factorization is needed.
    """
    forms = list(forms)
    for f in forms:
        if f.is_zero():
            raise ZeroForm("gcd-free basis of a zero form")
    kernels = []
    for f in forms:
        for g, _ in squarefree_decomposition(f)[0]:
            kernels.append(g)
        # keep the point at infinity as its own place
        if f.t_valuation() > 0:
            kernels.append(BinaryForm.t())
    # refine to pairwise coprime by repeated gcd splitting
    basis: list[BinaryForm] = []
    work = kernels
    while work:
        cand = work.pop()
        if cand.degree == 0:
            continue
        split = False
        for i, b in enumerate(basis):
            d = bf_gcd(cand, b)
            if d.degree == 0:
                continue
            basis.pop(i)
            for piece in (divide_exact(b, d), divide_exact(cand, d), d):
                if piece is not None and piece.degree > 0:
                    work.append(normalize(piece)[1])
            split = True
            break
        if not split:
            basis.append(normalize(cand)[1])
    # dedupe and order deterministically
    uniq = sorted(set(basis), key=lambda b: (b.degree, b.coeffs))
    places = [Place(b) for b in uniq]
    vals = [[valuation_at(f, p) for p in places] for f in forms]
    return places, vals
