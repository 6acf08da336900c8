"""Rank-2 hyperbolic chamber geometry: Picard-Lefschetz reflections,
(-2)-class enumeration, ample-chamber walls and boundary rays, Weyl
orbits, fibration criteria and automorphism-finiteness verdicts.

Boundary rays may be quadratic irrational; they are carried exactly as
elements of Q(sqrt(D)).  Wall enumeration is bounded, so chamber results
are certified by re-running at twice the bound and demanding identical
output; disagreement raises Unstable instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadSignature, NotPositive, NotRoot, OnWall, Unstable
from .lattice import IntegerLattice, is_even, signature

DEFAULT_HEIGHT_BOUND = 10**3


def _gcd(*xs):
    g = 0
    for x in xs:
        g = math.gcd(g, abs(int(x)))
    return g


def _primitive(vec):
    g = _gcd(*vec)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(int(x) // g for x in vec)


# --- exact quadratic-irrational scalars ---------------------------------


@dataclass(frozen=True)
class _Quad:
    """a + b*sqrt(D) with rational a, b and fixed non-square D >= 0."""

    a: Fraction
    b: Fraction
    D: int

    def __add__(self, other):
        return _Quad(self.a + other.a, self.b + other.b, max(self.D, other.D))

    def scaled(self, c):
        c = Fraction(c)
        return _Quad(self.a * c, self.b * c, self.D)

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0 or self.D == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 against b^2 D
        lhs, rhs = a * a, b * b * self.D
        if a > 0:
            return 1 if lhs > rhs else (-1 if lhs < rhs else 0)
        return -1 if lhs > rhs else (1 if lhs < rhs else 0)


def _quad_rational(x, D=0):
    return _Quad(Fraction(x), Fraction(0), D)


# --- rays ----------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryRay:
    """Chamber boundary direction: a primitive integer pair, or the
    quadratic direction ((p + q*sqrt(D)) : r)."""

    kind: str  # "rational" | "quadratic"
    coords: tuple | None = None
    p: int = 0
    q: int = 0
    r: int = 0
    D: int = 0

    @staticmethod
    def rational(vec) -> "BoundaryRay":
        return BoundaryRay("rational", coords=_primitive(vec))

    @staticmethod
    def quadratic(p, q, r, D) -> "BoundaryRay":
        g = _gcd(p, q, r)
        return BoundaryRay("quadratic", p=p // g, q=q // g, r=r // g, D=D)

    def vector(self):
        """(x, y) with _Quad components."""
        if self.kind == "rational":
            return (
                _quad_rational(self.coords[0]),
                _quad_rational(self.coords[1]),
            )
        return (
            _Quad(Fraction(self.p), Fraction(self.q), self.D),
            _Quad(Fraction(self.r), Fraction(0), self.D),
        )

    def __str__(self):
        if self.kind == "rational":
            return str(self.coords)
        return f"(({self.p}{self.q:+}*sqrt({self.D})) : {self.r})"


def _pair_quad(L, v, w_int):
    """<v, w> for a _Quad vector v and an integer vector w."""
    g = L.gram
    out = _quad_rational(0, 0)
    for i in range(2):
        coeff = g[i][0] * w_int[0] + g[i][1] * w_int[1]
        out = out + v[i].scaled(coeff)
    return out


# --- reflections and root enumeration ------------------------------------


def reflect(L: IntegerLattice, u, delta):
    """Picard-Lefschetz reflection u -> u + <u, delta> delta."""
    if L.norm(delta) != -2:
        raise NotRoot(f"{delta} has square {L.norm(delta)}, not -2")
    s = L.pairing(u, delta)
    return tuple(ui + s * di for ui, di in zip(u, delta))


def minus_two_classes(L: IntegerLattice, height_bound: int = DEFAULT_HEIGHT_BOUND):
    """All (a, b) with |a|, |b| <= bound and norm -2, in +/- pairs.

    For each a, the b-values solve an explicit integer quadratic, so the
    scan is linear in the bound."""
    g11, g12, g22 = L.gram[0][0], L.gram[0][1], L.gram[1][1]
    out = set()

    def try_add(a, b):
        if abs(a) <= height_bound and abs(b) <= height_bound:
            if g11 * a * a + 2 * g12 * a * b + g22 * b * b == -2:
                out.add((a, b))

    for a in range(-height_bound, height_bound + 1):
        # g22 b^2 + 2 g12 a b + (g11 a^2 + 2) = 0
        if g22 == 0:
            if g12 != 0:
                num = -(g11 * a * a + 2)
                den = 2 * g12 * a
                if den != 0 and num % den == 0:
                    try_add(a, num // den)
        else:
            disc = (g12 * a) ** 2 - g22 * (g11 * a * a + 2)
            if disc < 0:
                continue
            rt = math.isqrt(disc)
            if rt * rt != disc:
                continue
            for sgn in (1, -1):
                num = -g12 * a + sgn * rt
                if num % g22 == 0:
                    try_add(a, num // g22)
    return sorted(out)


# --- chamber computation --------------------------------------------------


@dataclass(frozen=True)
class ChamberReport:
    walls: tuple
    rays: tuple
    rational_polyhedral: bool
    weyl_trivial: bool


def _isotropic_directions(L: IntegerLattice):
    """Both isotropic directions of a rank-2 hyperbolic Gram matrix, as
    BoundaryRays (unoriented)."""
    g11, g12, g22 = L.gram[0][0], L.gram[0][1], L.gram[1][1]
    rays = []
    if g11 == 0:
        rays.append(BoundaryRay.rational((1, 0)))
        if g22 == 0:
            rays.append(BoundaryRay.rational((0, 1)))
        else:
            rays.append(BoundaryRay.rational(_primitive((-g22, 2 * g12))))
        return rays
    disc = g12 * g12 - g11 * g22
    rt = math.isqrt(disc)
    if rt * rt == disc:
        rays.append(BoundaryRay.rational(_primitive((-g12 + rt, g11))))
        if rt != 0:
            rays.append(BoundaryRay.rational(_primitive((-g12 - rt, g11))))
        return rays
    # strip the square part of the discriminant
    m, D = 1, disc
    f = 2
    while f * f <= D:
        while D % (f * f) == 0:
            D //= f * f
            m *= f
        f += 1
    rays.append(BoundaryRay.quadratic(-g12, m, g11, D))
    rays.append(BoundaryRay.quadratic(-g12, -m, g11, D))
    return rays


def _negate_ray(ray: BoundaryRay) -> BoundaryRay:
    if ray.kind == "rational":
        return BoundaryRay("rational", coords=tuple(-c for c in ray.coords))
    return BoundaryRay("quadratic", p=-ray.p, q=-ray.q, r=-ray.r, D=ray.D)


def _chamber_once(L: IntegerLattice, h, height_bound: int):
    roots = minus_two_classes(L, height_bound)
    effective = []
    for delta in roots:
        s = L.pairing(h, delta)
        if s == 0:
            raise OnWall(f"h pairs to zero with the (-2)-class {delta}")
        if s > 0:
            effective.append(delta)

    def feasible(vec_quad):
        return all(
            _pair_quad(L, vec_quad, d).sign() >= 0 for d in effective
        )

    candidates = []  # (ray, wall or None)
    seen = set()
    for delta in effective:
        n0 = L.gram[0][0] * delta[0] + L.gram[0][1] * delta[1]
        n1 = L.gram[1][0] * delta[0] + L.gram[1][1] * delta[1]
        d = _primitive((n1, -n0))
        if L.pairing(d, h) < 0:
            d = tuple(-x for x in d)
        ray = BoundaryRay.rational(d)
        if ray in seen:
            continue
        if feasible(ray.vector()):
            seen.add(ray)
            candidates.append((ray, delta))
    for ray in _isotropic_directions(L):
        v = ray.vector()
        sh = _pair_quad(L, v, h).sign()
        if sh < 0:
            ray = _negate_ray(ray)
            v = ray.vector()
        if feasible(v):
            candidates.append((ray, None))
    if len(candidates) != 2:
        raise Unstable(
            f"expected 2 boundary rays, found {len(candidates)} at bound {height_bound}"
        )
    rays = tuple(sorted((r for r, _ in candidates), key=_ray_key))
    walls = tuple(sorted(d for _, d in candidates if d is not None))
    return rays, walls, len(roots) == 0


def _ray_key(ray: BoundaryRay):
    if ray.kind == "rational":
        return (0, ray.coords)
    return (1, ray.p, ray.q, ray.r, ray.D)


def ample_chamber(
    L: IntegerLattice, h, height_bound: int = DEFAULT_HEIGHT_BOUND
) -> ChamberReport:
    """Chamber of h cut out by the h-positive (-2)-classes, with walls
    certified by bound doubling."""
    if L.rank != 2:
        raise BadSignature("chamber geometry is implemented for rank 2 only")
    if L.norm(h) <= 0:
        raise NotPositive(f"h has norm {L.norm(h)} <= 0")
    rays, walls, trivial = _chamber_once(L, h, height_bound)
    rays2, walls2, _ = _chamber_once(L, h, 2 * height_bound)
    if rays != rays2 or walls != walls2:
        raise Unstable(
            f"chamber changed between bounds {height_bound} and {2 * height_bound}"
        )
    return ChamberReport(
        walls=walls,
        rays=rays,
        rational_polyhedral=all(r.kind == "rational" for r in rays),
        weyl_trivial=trivial,
    )


def weyl_orbit_rays(L: IntegerLattice, ray, walls, steps: int):
    """Alternating reflection orbit of a boundary ray, primitive
    representatives, starting with the first wall that moves the ray."""
    for w in walls:
        if L.norm(w) != -2:
            raise NotRoot(f"wall {w} is not a (-2)-class")
    orbit = [_primitive(ray)]
    start = next(
        (i for i, w in enumerate(walls) if L.pairing(orbit[0], w) != 0), None
    )
    if start is None:
        return [orbit[0]] * steps
    cur = orbit[0]
    for i in range(steps - 1):
        w = walls[(start + i) % len(walls)]
        cur = _primitive(reflect(L, cur, w))
        orbit.append(cur)
    return orbit


# --- fibration criteria ---------------------------------------------------


def isotropic_class(L: IntegerLattice):
    """Primitive nonzero class of square zero in a rank-2 even lattice,
    or None; existence is exactly the discriminant being a perfect square."""
    g11, g12, g22 = L.gram[0][0], L.gram[0][1], L.gram[1][1]
    a, b, c = g11 // 2, g12, g22 // 2
    if a == 0:
        return (1, 0)
    disc = b * b - 4 * a * c
    if disc < 0:
        return None
    rt = math.isqrt(disc)
    if rt * rt != disc:
        return None
    return _primitive((-b + rt, 2 * a))


def _all_isotropic_directions_rank2(L: IntegerLattice):
    g11, g12, g22 = L.gram[0][0], L.gram[0][1], L.gram[1][1]
    a, b, c = g11 // 2, g12, g22 // 2
    dirs = []
    if a == 0:
        dirs.append((1, 0))
        if (b, c) != (0, 0):
            if c == 0:
                dirs.append((0, 1))
            else:
                dirs.append(_primitive((-c, b)))
        return dirs
    disc = b * b - 4 * a * c
    if disc < 0:
        return dirs
    rt = math.isqrt(disc)
    if rt * rt != disc:
        return dirs
    dirs.append(_primitive((-b + rt, 2 * a)))
    if rt != 0:
        dirs.append(_primitive((-b - rt, 2 * a)))
    return dirs


def admits_elliptic_section(L: IntegerLattice) -> bool:
    """True iff some primitive isotropic class pairs onto all of Z
    (divisibility one), i.e. the lattice contains a hyperbolic plane."""
    if L.rank != 2:
        raise BadSignature("rank-2 criterion")
    for u in _all_isotropic_directions_rank2(L):
        div = _gcd(*(sum(L.gram[i][j] * u[j] for j in range(2)) for i in range(2)))
        if div == 1:
            return True
    return False


@dataclass(frozen=True)
class FibrationVerdict:
    verdict: str  # yes | yes_no_witness | no | inconclusive
    witness: tuple | None = None


def genus_one_fibration_exists(
    L: IntegerLattice, search_bound: int = 5
) -> FibrationVerdict:
    """Existence of a nonzero square-zero class.

    Rank 2 is decided exactly; rank >= 5 indefinite always contains one
    (witness searched within bound); ranks 3-4 get a bounded search."""
    if not is_even(L) or signature(L).as_tuple() != (1, L.rank - 1):
        raise BadSignature("expected an even lattice of signature (1, n-1)")
    n = L.rank
    if n == 2:
        u = isotropic_class(L)
        return FibrationVerdict("yes", u) if u else FibrationVerdict("no")
    witness = _isotropic_witness(L, search_bound)
    if witness is not None:
        return FibrationVerdict("yes", witness)
    if n >= 5:
        return FibrationVerdict("yes_no_witness")
    return FibrationVerdict("inconclusive")


def _isotropic_witness(L: IntegerLattice, bound: int):
    n = L.rank
    for i in range(n):
        if L.gram[i][i] == 0:
            return tuple(int(i == j) for j in range(n))
    # rank-2 coordinate sublattices, solved exactly
    for i in range(n):
        for j in range(i + 1, n):
            sub = ((L.gram[i][i], L.gram[i][j]), (L.gram[j][i], L.gram[j][j]))
            if sub[0][0] % 2 or sub[1][1] % 2:
                continue
            try:
                subL = IntegerLattice(sub)
            except Exception:
                continue
            u = isotropic_class(subL)
            if u is not None:
                vec = [0] * n
                vec[i], vec[j] = u
                return tuple(vec)
    if n <= 4:
        import itertools

        for vec in itertools.product(range(-bound, bound + 1), repeat=n):
            if any(vec) and L.norm(vec) == 0:
                return _primitive(vec)
    return None


def aut_finiteness_rank2(
    L: IntegerLattice, h, height_bound: int = DEFAULT_HEIGHT_BOUND
) -> str:
    """'finite' iff both certified chamber rays are rational; 'infinite'
    when a quadratic ray appears; 'inconclusive' if uncertified."""
    try:
        report = ample_chamber(L, h, height_bound)
    except Unstable:
        return "inconclusive"
    return "finite" if report.rational_polyhedral else "infinite"
