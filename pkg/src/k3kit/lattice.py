"""Even integer lattices via Gram matrices, and their discriminant forms.

Conventions: q-values are stored in [0, 2) and b-values in [0, 1), so
golden values are deterministic (the class of -1/4 is stored as 7/4).
Signatures are computed by exact rational symmetric elimination; no
floating point is used anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import intmat
from .errors import (
    AsymmetricForm,
    BadParameter,
    DegenerateResult,
    NotInjective,
    OddLattice,
    RankTooLarge,
)


@dataclass(frozen=True)
class IntegerLattice:
    """Non-degenerate lattice given by a symmetric integer Gram matrix."""

    gram: tuple

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise BadParameter("Gram matrix must be square and non-empty")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise AsymmetricForm("Gram matrix must be symmetric")
        if intmat.det(g) == 0:
            raise DegenerateResult("Gram matrix is degenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pairing(self, u, v) -> int:
        return sum(
            u[i] * self.gram[i][j] * v[j]
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def norm(self, u) -> int:
        return self.pairing(u, u)

    def __str__(self):
        return "[" + "; ".join(" ".join(str(x) for x in row) for row in self.gram) + "]"


@dataclass(frozen=True)
class SignaturePair:
    positive: int
    negative: int

    def as_tuple(self):
        return (self.positive, self.negative)

    @property
    def is_indefinite(self) -> bool:
        return self.positive > 0 and self.negative > 0

    def __str__(self):
        return f"({self.positive},{self.negative})"


# --- named constructors -----------------------------------------------

_ADE_EDGES = {
    "E6": [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5)],
    "E7": [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6)],
    "E8": [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)],
}


def _ade_gram(kind: str, n: int):
    if kind == "A":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif kind == "D":
        edges = [(i, i + 1) for i in range(n - 3)] + [(n - 3, n - 2), (n - 3, n - 1)]
    else:
        edges = _ADE_EDGES[kind]
        n = int(kind[1])
    g = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        g[i][j] = g[j][i] = -1
    return g


def make_named(kind: str, param: int | None = None, negate: bool = False) -> IntegerLattice:
    """Standard lattices: H, A(n), D(n), E6/E7/E8, scalar(m), K3."""
    kind = kind.upper()
    if kind == "H":
        g = [[0, 1], [1, 0]]
    elif kind == "K3":
        e8 = _ade_gram("E8", 8)
        h = [[0, 1], [1, 0]]
        blocks = [h, h, h, [[-x for x in row] for row in e8],
                  [[-x for x in row] for row in e8]]
        g = _block_diag(blocks)
    elif kind == "A":
        if param is None or param < 1:
            raise BadParameter("A(n) needs n >= 1")
        g = _ade_gram("A", param)
    elif kind == "D":
        if param is None or param < 4:
            raise BadParameter("D(n) needs n >= 4")
        g = _ade_gram("D", param)
    elif kind in ("E6", "E7", "E8"):
        g = _ade_gram(kind, 0)
    elif kind == "SCALAR":
        if param is None or param == 0 or param % 2 != 0:
            raise BadParameter("scalar(m) needs nonzero even m")
        g = [[param]]
    else:
        raise BadParameter(f"unknown lattice name {kind!r}")
    if negate:
        g = [[-x for x in row] for row in g]
    return IntegerLattice(tuple(tuple(row) for row in g))


def _block_diag(blocks):
    n = sum(len(b) for b in blocks)
    g = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                g[off + i][off + j] = x
        off += len(b)
    return g


def direct_sum(*lattices: IntegerLattice) -> IntegerLattice:
    return IntegerLattice(
        tuple(tuple(row) for row in _block_diag([list(map(list, L.gram)) for L in lattices]))
    )


# --- invariants --------------------------------------------------------


def signature(L: IntegerLattice) -> SignaturePair:
    """Sylvester counts by symmetric rational elimination.

    A zero diagonal pivot is repaired by adding another basis vector with
    which it pairs non-trivially (possible by non-degeneracy)."""
    n = L.rank
    M = [[Fraction(x) for x in row] for row in L.gram]
    active = list(range(n))
    pos = neg = 0
    while active:
        i = next((i for i in active if M[i][i] != 0), None)
        if i is None:
            a = active[0]
            b = next(j for j in active[1:] if M[a][j] != 0)
            for k in active:
                M[a][k] += M[b][k]
            for k in active:
                M[k][a] += M[k][b]
            i = a
        piv = M[i][i]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        active.remove(i)
        for r in active:
            if M[r][i] == 0:
                continue
            f = M[r][i] / piv
            for c in active:
                M[r][c] -= f * M[i][c]
            M[r][i] = Fraction(0)
        for c in active:
            M[i][c] = Fraction(0)
    return SignaturePair(pos, neg)


def discriminant(L: IntegerLattice) -> int:
    return abs(int(intmat.det(L.gram)))


def is_even(L: IntegerLattice) -> bool:
    return all(L.gram[i][i] % 2 == 0 for i in range(L.rank))


def polarization_admissible(L: IntegerLattice) -> bool:
    """Even of signature (1, rank-1): eligible to polarize a K3 surface."""
    return is_even(L) and signature(L).as_tuple() == (1, L.rank - 1)


def period_domain_dimension(L: IntegerLattice) -> int:
    if L.rank > 20:
        raise RankTooLarge("rank must be at most 20")
    return 20 - L.rank


def nikulin_unique(L: IntegerLattice) -> bool:
    """True when rank, signature and discriminant form pin the lattice down:
    indefinite with at most rank-2 discriminant generators."""
    if not is_even(L):
        raise OddLattice("criterion applies to even lattices")
    if not signature(L).is_indefinite:
        return False
    dform = discriminant_form(L)
    return len(dform.invariant_factors) <= L.rank - 2


# --- discriminant forms -------------------------------------------------


@dataclass(frozen=True)
class DiscriminantForm:
    """Finite quadratic module on the dual quotient of an even lattice.

    Elements are integer coordinate tuples modulo the invariant factors.
    """

    invariant_factors: tuple
    q_values: tuple
    b_matrix: tuple
    generator_lifts: tuple = field(default=(), compare=False)

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def elements(self):
        """All group elements in lexicographic coordinate order."""
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def q_of(self, coords) -> Fraction:
        """Quadratic form value in [0, 2)."""
        k = len(self.invariant_factors)
        val = Fraction(0)
        for i in range(k):
            val += coords[i] ** 2 * self.q_values[i]
            for j in range(i + 1, k):
                val += 2 * coords[i] * coords[j] * self.b_matrix[i][j]
        return val % 2

    def b_of(self, x, y) -> Fraction:
        """Bilinear form value in [0, 1)."""
        k = len(self.invariant_factors)
        val = Fraction(0)
        for i in range(k):
            for j in range(k):
                val += x[i] * y[j] * self.b_matrix[i][j]
        return val % 1

    def element_order(self, coords) -> int:
        o = 1
        for c, d in zip(coords, self.invariant_factors):
            g = d // _gcd(c % d, d)
            o = o * g // _gcd(o, g)
        return o

    def q_multiset(self):
        """Sorted q-values over all elements: the canonical comparator
        together with the invariant factors."""
        return tuple(sorted(self.q_of(e) for e in self.elements()))

    def same_invariants(self, other: "DiscriminantForm") -> bool:
        return (
            self.invariant_factors == other.invariant_factors
            and self.q_multiset() == other.q_multiset()
        )

    def lift_of(self, coords):
        """An element of the dual lattice (rational coordinates in the
        ambient basis) mapping to the given class."""
        n = len(self.generator_lifts[0]) if self.generator_lifts else 0
        out = [Fraction(0)] * n
        for c, lift in zip(coords, self.generator_lifts):
            for i in range(n):
                out[i] += c * lift[i]
        return tuple(out)


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a or 1


def discriminant_form(L: IntegerLattice) -> DiscriminantForm:
    """Compute the dual quotient via the Smith form of the Gram matrix.

    With U*G*V = D, the class of the i-th elementary generator lifts to
    (column i of V) / d_i in the ambient basis.
    """
    if not is_even(L):
        raise OddLattice("discriminant forms require an even lattice")
    G = [list(row) for row in L.gram]
    D, U, V = intmat.smith_normal_form(G)
    n = L.rank
    gens = []
    for i in range(n):
        d = D[i][i]
        if d > 1:
            gens.append((d, tuple(Fraction(V[r][i], d) for r in range(n))))
    factors = tuple(d for d, _ in gens)
    lifts = tuple(lift for _, lift in gens)

    def pair(u, v):
        return sum(
            u[i] * L.gram[i][j] * v[j] for i in range(n) for j in range(n)
        )

    q_values = tuple(pair(lift, lift) % 2 for lift in lifts)
    b_matrix = tuple(
        tuple(pair(a, b) % 1 for b in lifts) for a in lifts
    )
    return DiscriminantForm(factors, q_values, b_matrix, lifts)


# --- other constructions -------------------------------------------------


def gram_from_trilinear(T, k_class) -> IntegerLattice:
    """Gram[i][j] = T(k, e_i, e_j) for a symmetric trilinear integer form
    given as a full r x r x r array."""
    r = len(T)
    for a in range(r):
        for b in range(r):
            for c in range(r):
                vals = {T[a][b][c], T[a][c][b], T[b][a][c],
                        T[b][c][a], T[c][a][b], T[c][b][a]}
                if len(vals) != 1:
                    raise AsymmetricForm("trilinear form is not symmetric")
    g = [
        [sum(k_class[m] * T[m][i][j] for m in range(r)) for j in range(r)]
        for i in range(r)
    ]
    if intmat.det(g) == 0:
        raise DegenerateResult("induced bilinear form is degenerate")
    return IntegerLattice(tuple(tuple(row) for row in g))


def embedding_is_primitive(M: IntegerLattice, embedding, L: IntegerLattice | None = None) -> bool:
    """True when the embedded sublattice is saturated: all Smith invariant
    factors of the column matrix equal 1.

    `embedding` has one row per M-basis vector; columns are the images of
    the sublattice basis."""
    cols = len(embedding[0])
    facs = intmat.invariant_factors(embedding)
    if len(facs) < cols:
        raise NotInjective("embedding matrix does not have full column rank")
    if L is not None:
        n = M.rank
        pullback = [
            [
                sum(
                    embedding[a][i] * M.gram[a][b] * embedding[b][j]
                    for a in range(n)
                    for b in range(n)
                )
                for j in range(cols)
            ]
            for i in range(cols)
        ]
        if tuple(tuple(r) for r in pullback) != L.gram:
            raise BadParameter("embedding is not form-compatible with L")
    return all(f == 1 for f in facs)
