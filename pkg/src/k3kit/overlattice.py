"""Overlattices of an even lattice via isotropic subgroups of its
discriminant group.

The enumeration closes cyclic subgroups generated by isotropic elements
under joins, pruning by q-vanishing, so it only needs the discriminant
group to be small (bounded by DEFAULT_ENUM_BOUND by default).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import intmat
from .errors import GroupTooLarge, NotIsotropic, OddLattice
from .lattice import DiscriminantForm, IntegerLattice, discriminant_form, is_even

DEFAULT_ENUM_BOUND = 10**4


@dataclass(frozen=True)
class IsotropicSubgroup:
    """Subgroup of a discriminant group on which q vanishes identically."""

    generators: tuple
    elements: tuple
    order: int

    def __str__(self):
        if self.order == 1:
            return "trivial"
        return "<" + ", ".join(str(g) for g in self.generators) + f"> of order {self.order}"


def _check_bound(A: DiscriminantForm, bound: int):
    if A.order > bound:
        raise GroupTooLarge(
            f"discriminant group of order {A.order} exceeds enumeration bound {bound}"
        )


def isotropic_elements(A: DiscriminantForm, bound: int = DEFAULT_ENUM_BOUND):
    """All classes with q = 0 (mod 2Z), in lexicographic order."""
    _check_bound(A, bound)
    return [e for e in A.elements() if A.q_of(e) == 0]


def _add(A: DiscriminantForm, x, y):
    return tuple((a + b) % d for a, b, d in zip(x, y, A.invariant_factors))


def _span(A: DiscriminantForm, gens):
    zero = tuple(0 for _ in A.invariant_factors)
    seen = {zero}
    frontier = [zero]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = _add(A, cur, g)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)


def _is_isotropic(A: DiscriminantForm, elements) -> bool:
    return all(A.q_of(e) == 0 for e in elements)


def _canonical_generators(A: DiscriminantForm, elements):
    """Greedy minimal generating list over the sorted elements."""
    gens = []
    span = _span(A, [])
    for e in sorted(elements):
        if e not in span and any(c for c in e):
            gens.append(e)
            span = _span(A, gens)
            if len(span) == len(elements):
                break
    return tuple(gens)


def isotropic_subgroups(A: DiscriminantForm, bound: int = DEFAULT_ENUM_BOUND):
    """Every subgroup on which q vanishes identically, trivial included,
    sorted by order then by generator coordinates."""
    _check_bound(A, bound)
    iso = isotropic_elements(A, bound)
    zero = tuple(0 for _ in A.invariant_factors)
    trivial = frozenset([zero])
    found = {trivial}
    frontier = [trivial]
    while frontier:
        cur = frontier.pop()
        for g in iso:
            if g == zero or g in cur:
                continue
            new = _span(A, list(cur) + [g])
            if new not in found and _is_isotropic(A, new):
                found.add(new)
                frontier.append(new)
    out = []
    for elements in found:
        gens = _canonical_generators(A, elements)
        out.append(IsotropicSubgroup(gens, tuple(sorted(elements)), len(elements)))
    out.sort(key=lambda s: (s.order, s.generators))
    return out


def _assert_isotropic(A: DiscriminantForm, G: IsotropicSubgroup):
    for e in G.elements:
        if A.q_of(e) != 0:
            raise NotIsotropic(f"q does not vanish on {e}")
    for x in G.elements:
        for y in G.elements:
            if A.b_of(x, y) != 0:
                raise NotIsotropic(f"b is not integral on {x}, {y}")


def build_overlattice(L: IntegerLattice, G: IsotropicSubgroup):
    """The even lattice spanned by L and lifts of G; returns it together
    with the rational change-of-basis matrix (columns in L coordinates).

    The basis is the Hermite column reduction of L's basis plus the
    generator lifts, so the output is basis-deterministic."""
    A = discriminant_form(L)
    _assert_isotropic(A, G)
    n = L.rank
    if G.order == 1:
        return L, [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    lifts = [A.lift_of(g) for g in G.generators]
    denom = 1
    for lift in lifts:
        for c in lift:
            denom = denom * c.denominator // _gcd(denom, c.denominator)
    cols = [[denom * int(i == j) for i in range(n)] for j in range(n)]
    for lift in lifts:
        cols.append([int(c * denom) for c in lift])
    rows = intmat.hermite_column_basis(cols, n)
    basis = [[Fraction(x, denom) for x in row] for row in rows]
    gram = [
        [_pair(L, _col(basis, i), _col(basis, j)) for j in range(n)]
        for i in range(n)
    ]
    if any(x.denominator != 1 for row in gram for x in row):
        raise NotIsotropic("overlattice Gram is not integral")
    gram_int = tuple(tuple(int(x) for x in row) for row in gram)
    over = IntegerLattice(gram_int)
    if not is_even(over):
        raise NotIsotropic("overlattice is not even")
    return over, basis


def _col(rows, j):
    return [row[j] for row in rows]


def _pair(L, u, v):
    n = L.rank
    return sum(u[i] * L.gram[i][j] * v[j] for i in range(n) for j in range(n))


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a or 1


def overlattice_discriminant_form(
    A: DiscriminantForm, G: IsotropicSubgroup, bound: int = DEFAULT_ENUM_BOUND
) -> DiscriminantForm:
    """Discriminant form of the overlattice, computed inside A as the
    quotient of the b-orthogonal complement of G by G."""
    _check_bound(A, bound)
    _assert_isotropic(A, G)
    k = len(A.invariant_factors)
    if k == 0 or G.order == 1:
        return A
    perp = [
        e
        for e in A.elements()
        if all(A.b_of(e, g) == 0 for g in G.generators)
    ]
    d = list(A.invariant_factors)
    # lattices of coordinate lifts inside Z^k
    base_cols = [[d[i] * int(i == j) for i in range(k)] for j in range(k)]
    perp_rows = intmat.hermite_column_basis(
        [list(e) for e in perp] + base_cols, k
    )
    sub_rows = intmat.hermite_column_basis(
        [list(e) for e in G.elements] + base_cols, k
    )
    # express the subgroup lattice in the basis of the perp lattice
    perp_inv = intmat.mat_inverse(perp_rows)
    M = intmat.mat_mul(perp_inv, sub_rows)
    M_int = [[int(x) for x in row] for row in M]
    if any(M[i][j] != M_int[i][j] for i in range(k) for j in range(k)):
        raise NotIsotropic("subgroup lattice not contained in perp lattice")
    D, U, _ = intmat.smith_normal_form(M_int)
    u_inv = intmat.mat_inverse(U)
    gens = []
    for i in range(k):
        di = D[i][i]
        if di > 1:
            vec = [int(u_inv[r][i]) for r in range(k)]
            coords = tuple(
                int(sum(perp_rows[r][m] * vec[m] for m in range(k))) % d[r]
                for r in range(k)
            )
            gens.append((di, coords))
    factors = tuple(di for di, _ in gens)
    coords_list = [c for _, c in gens]
    q_values = tuple(A.q_of(c) for c in coords_list)
    b_matrix = tuple(
        tuple(A.b_of(x, y) for y in coords_list) for x in coords_list
    )
    lifts = tuple(A.lift_of(c) for c in coords_list)
    return DiscriminantForm(factors, q_values, b_matrix, lifts)


def all_overlattices(L: IntegerLattice, bound: int = DEFAULT_ENUM_BOUND):
    """One (subgroup, overlattice, discriminant form) triple per isotropic
    subgroup, sorted by index then generators."""
    if not is_even(L):
        raise OddLattice("overlattice enumeration requires an even lattice")
    A = discriminant_form(L)
    out = []
    for G in isotropic_subgroups(A, bound):
        over, _ = build_overlattice(L, G)
        out.append((G, over, overlattice_discriminant_form(A, G, bound)))
    return out
