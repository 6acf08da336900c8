import math
import random
from fractions import Fraction

import pytest

from k3kit import lattice as lat
from k3kit import weierstrass as wst
from k3kit.errors import (
    AlreadyMinimal,
    DegreeMismatch,
    IdenticallyZeroDiscriminant,
    NonMinimalModel,
    NoRowMatch,
)
from k3kit.exactpoly import BinaryForm

from helpers import S, T, const, random_form, random_rational, rank18_model, rank19_model

rng = random.Random(4242)

INF = None


def _ge(v, b):
    return v is INF or v >= b


def _eq(v, b):
    return v is not INF and v == b


# independent re-encoding of the classification rows used as an oracle
ORACLE_ROWS = [
    ("I", lambda a, b, d: _eq(a, 0) and _eq(b, 0) and d >= 1),
    ("II", lambda a, b, d: _ge(a, 1) and _eq(b, 1) and d == 2),
    ("III", lambda a, b, d: _eq(a, 1) and _ge(b, 2) and d == 3),
    ("IV", lambda a, b, d: _ge(a, 2) and _eq(b, 2) and d == 4),
    ("Istar0", lambda a, b, d: d == 6 and (
        (_eq(a, 2) and _eq(b, 3)) or (_ge(a, 3) and _eq(b, 3)) or (_eq(a, 2) and _ge(b, 4)))),
    ("Istarn", lambda a, b, d: _eq(a, 2) and _eq(b, 3) and d >= 7),
    ("IVstar", lambda a, b, d: _ge(a, 3) and _eq(b, 4) and d == 8),
    ("IIIstar", lambda a, b, d: _eq(a, 3) and _ge(b, 5) and d == 9),
    ("IIstar", lambda a, b, d: _ge(a, 4) and _eq(b, 5) and d == 10),
]


def test_classify_place_goldens():
    assert wst.classify_place(0, 0, 1).label == "I1"
    assert wst.classify_place(0, 0, 5).label == "I5"
    assert wst.classify_place(1, 1, 2).label == "II"
    assert wst.classify_place(INF, 1, 2).label == "II"
    assert wst.classify_place(1, 2, 3).label == "III"
    assert wst.classify_place(2, 2, 4).label == "IV"
    for triple in [(2, 3, 6), (3, 3, 6), (2, 4, 6), (2, INF, 6), (INF, 3, 6)]:
        assert wst.classify_place(*triple).label == "I0*"
    assert wst.classify_place(2, 3, 8).label == "I2*"
    assert wst.classify_place(3, 4, 8).label == "IV*"
    assert wst.classify_place(3, 5, 9).label == "III*"
    assert wst.classify_place(4, 5, 10).label == "II*"
    assert wst.classify_place(INF, 5, 10).label == "II*"


def test_classify_place_exclusivity_sweep():
    values = list(range(13)) + [INF]
    for a in values:
        for b in values:
            for d in range(1, 13):
                matches = [tag for tag, pred in ORACLE_ROWS if pred(a, b, d)]
                assert len(matches) <= 1
                try:
                    got = wst.classify_place(a, b, d)
                except NonMinimalModel:
                    assert _ge(a, 4) and _ge(b, 6)
                    assert not matches
                    continue
                except NoRowMatch:
                    assert not matches
                    continue
                assert len(matches) == 1
                tag = matches[0]
                if tag == "I":
                    assert got.label == f"I{d}"
                elif tag == "Istar0":
                    assert got.label == "I0*"
                elif tag == "Istarn":
                    assert got.label == f"I{d - 6}*"
                else:
                    assert got.label == tag.replace("star", "*")


def test_euler_and_root_data_per_type():
    assert wst.classify_place(0, 0, 4).euler == 4
    assert wst.classify_place(0, 0, 4).root_name == "A3"
    assert wst.classify_place(0, 0, 1).root_name is None
    assert wst.classify_place(2, 3, 9).root_name == "D7"
    assert wst.classify_place(2, 3, 9).euler == 9
    assert wst.classify_place(4, 5, 10).root_name == "E8"
    assert wst.classify_place(3, 5, 9).root_name == "E7"
    assert wst.classify_place(3, 4, 8).root_name == "E6"


def _random_model(d):
    while True:
        alpha = random_form(rng, 4 * d, sparse=True)
        beta = random_form(rng, 6 * d, sparse=True)
        if rng.random() < 0.05:
            alpha = BinaryForm.zero(4 * d)
        m = wst.WeierstrassModel(d, alpha, beta)
        try:
            wst.classify_fibers(m)
        except (NonMinimalModel, IdenticallyZeroDiscriminant):
            continue
        return m


def test_euler_identity_random_minimal_models():
    for _ in range(100):
        d = rng.choice([1, 2])
        assert wst.euler_total(_random_model(d)) == 12 * d


def test_alpha_identically_zero_gives_type_ii_fibers():
    m = wst.WeierstrassModel(2, BinaryForm.zero(8), S**12 + T**12)
    reports = wst.classify_fibers(m)
    assert all(r.type.label == "II" for r in reports)
    assert sum(r.count for r in reports) == 12
    assert wst.euler_total(m) == 24


def test_rank18_family_golden():
    m = rank18_model(2, Fraction(1, 3), -1)
    counts = {}
    for r in wst.classify_fibers(m):
        counts[r.type.label] = counts.get(r.type.label, 0) + r.count
    assert counts == {"II*": 2, "I1": 4}
    L = wst.trivial_lattice(m)
    assert L.rank == 18
    assert lat.discriminant(L) == 1
    assert lat.signature(L).as_tuple() == (1, 17)
    assert wst.mw_torsion_candidates(m) == [()]


def test_rank19_family_golden():
    m = rank19_model(1)
    counts = {}
    for r in wst.classify_fibers(m):
        counts[r.type.label] = counts.get(r.type.label, 0) + r.count
    assert counts == {"III*": 2, "I4": 1, "I1": 2}
    L = wst.trivial_lattice(m)
    named = lat.direct_sum(
        lat.make_named("H"),
        lat.make_named("E7", negate=True),
        lat.make_named("E7", negate=True),
        lat.make_named("A", 3, negate=True),
    )
    assert L.rank == named.rank == 19
    assert lat.discriminant(L) == lat.discriminant(named)
    assert lat.discriminant_form(L).same_invariants(lat.discriminant_form(named))
    assert wst.mw_torsion_candidates(m) == [(), (2,)]
    X = const(Fraction(1, 3)) * S**2 * T**2
    assert wst.verify_two_torsion_section(m, X)


def test_trivial_lattice_disc_is_product_of_root_discs():
    root_disc = {"A": lambda n: n + 1, "D": lambda n: 4, "E": lambda n: {6: 3, 7: 2, 8: 1}[n]}
    for _ in range(30):
        m = _random_model(rng.choice([1, 2]))
        expected = 1
        for r in wst.classify_fibers(m):
            name = r.type.root_name
            if name:
                expected *= root_disc[name[0]](int(name[1:])) ** r.count
        assert lat.discriminant(wst.trivial_lattice(m)) == expected


def test_two_torsion_check_rescaling_invariance():
    m = rank19_model(1)
    X = const(Fraction(1, 3)) * S**2 * T**2
    for _ in range(10):
        lam = random_rational(rng)
        scaled = wst.WeierstrassModel(m.d, const(lam**4) * m.alpha, const(lam**6) * m.beta)
        assert wst.verify_two_torsion_section(scaled, const(lam**2) * X)
    with pytest.raises(DegreeMismatch):
        wst.verify_two_torsion_section(m, S)


def test_polarization_candidates_satisfy_index_identity():
    m = rank19_model(1)
    L = wst.trivial_lattice(m)
    cands = wst.candidate_polarizations(m)
    assert len(cands) == 2
    for c in cands:
        index = math.isqrt(lat.discriminant(L) // c.disc)
        assert c.disc * index**2 == lat.discriminant(L)
        assert c.rank == 19
        assert c.signature == (1, 18)


def test_non_minimal_detection_and_reduction():
    m1 = _random_model(1)
    p = S + const(2) * T
    inflated = wst.WeierstrassModel(2, m1.alpha * p**4, m1.beta * p**6)
    with pytest.raises(NonMinimalModel) as err:
        wst.classify_fibers(inflated)
    assert err.value.place is not None
    back = wst.reduce_non_minimal(inflated)
    assert back.d == 1
    assert back.alpha == m1.alpha and back.beta == m1.beta
    with pytest.raises(AlreadyMinimal):
        wst.reduce_non_minimal(m1)


def test_identically_zero_discriminant():
    # alpha = -3 c^2, beta = 2 c^3 makes 4 alpha^3 + 27 beta^2 vanish
    c = S * T + T**2
    m = wst.WeierstrassModel(1, const(-3) * c**2, const(2) * c**3)
    with pytest.raises(IdenticallyZeroDiscriminant):
        wst.classify_fibers(m)
