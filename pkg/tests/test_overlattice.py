import itertools
import random
from fractions import Fraction

import pytest

from k3kit import lattice as lat
from k3kit import overlattice as ov
from k3kit.errors import GroupTooLarge, NotIsotropic

rng = random.Random(311)


def he7e7a3():
    return lat.direct_sum(
        lat.make_named("H"),
        lat.make_named("E7", negate=True),
        lat.make_named("E7", negate=True),
        lat.make_named("A", 3, negate=True),
    )


def test_isotropic_elements_golden():
    A = lat.discriminant_form(he7e7a3())
    nonzero = [e for e in ov.isotropic_elements(A) if any(e)]
    assert nonzero == [(1, 1, 2)]


def test_isotropic_subgroups_golden():
    A = lat.discriminant_form(he7e7a3())
    groups = ov.isotropic_subgroups(A)
    assert [g.order for g in groups] == [1, 2]
    assert groups[1].generators == ((1, 1, 2),)


def test_unique_index_two_overlattice_matches_named_lattice():
    L = he7e7a3()
    A = lat.discriminant_form(L)
    G = ov.isotropic_subgroups(A)[1]
    over, basis = ov.build_overlattice(L, G)
    assert over.rank == 19
    assert lat.signature(over).as_tuple() == (1, 18)
    assert lat.discriminant(over) == 4
    assert lat.is_even(over)
    assert lat.nikulin_unique(over)
    named = lat.direct_sum(
        lat.make_named("H"),
        lat.make_named("E8", negate=True),
        lat.make_named("E8", negate=True),
        lat.make_named("scalar", -4),
    )
    assert lat.discriminant_form(over).same_invariants(lat.discriminant_form(named))
    # q on the generator of Z/4 is -1/4 mod 2, stored as 7/4
    A_over = lat.discriminant_form(over)
    assert A_over.invariant_factors == (4,)
    assert A_over.q_values[0] == Fraction(7, 4)


def test_overlattice_contains_original_with_right_index():
    L = he7e7a3()
    A = lat.discriminant_form(L)
    for G in ov.isotropic_subgroups(A):
        over, basis = ov.build_overlattice(L, G)
        assert lat.discriminant(over) * G.order**2 == lat.discriminant(L)
        assert lat.is_even(over)
        assert lat.signature(over).as_tuple() == lat.signature(L).as_tuple()


def test_overlattice_discriminant_form_consistency():
    samples = [
        he7e7a3(),
        lat.direct_sum(lat.make_named("A", 1, negate=True),
                       lat.make_named("A", 1, negate=True),
                       lat.make_named("A", 1, negate=True),
                       lat.make_named("A", 1, negate=True)),
        lat.direct_sum(lat.make_named("H"), lat.make_named("D", 4, negate=True)),
    ]
    for L in samples:
        A = lat.discriminant_form(L)
        for G, over, dform in ov.all_overlattices(L):
            direct = lat.discriminant_form(over)
            assert dform.same_invariants(direct)


def _span(A, gens):
    zero = tuple(0 for _ in A.invariant_factors)
    span = {zero}
    frontier = [zero]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = tuple((a + b) % d for a, b, d in zip(x, g, A.invariant_factors))
            if y not in span:
                span.add(y)
                frontier.append(y)
    return span


def test_brute_force_count_of_even_intermediate_lattices():
    # every even integral lattice between L and its dual corresponds to a
    # subgroup of the discriminant group on which q and b vanish
    L = lat.direct_sum(*[lat.make_named("A", 1, negate=True)] * 4)
    A = lat.discriminant_form(L)
    elements = list(A.elements())
    isotropic = set()
    for r in range(5):
        for gens in itertools.combinations(elements, r):
            span = _span(A, gens)
            if all(A.q_of(x) == 0 for x in span) and all(
                A.b_of(x, y) == 0 for x in span for y in span
            ):
                isotropic.add(tuple(sorted(span)))
    enumerated = ov.all_overlattices(L)
    assert len(enumerated) == len(isotropic)
    for G, over, _ in enumerated:
        assert lat.is_even(over)


def test_trivial_subgroup_keeps_discriminant_form():
    L = he7e7a3()
    A = lat.discriminant_form(L)
    G = ov.isotropic_subgroups(A)[0]
    assert G.order == 1
    assert ov.overlattice_discriminant_form(A, G) is A


def test_non_isotropic_subgroup_rejected():
    L = he7e7a3()
    A = lat.discriminant_form(L)
    bad = ov.IsotropicSubgroup.__new__(ov.IsotropicSubgroup)
    object.__setattr__(bad, "generators", ((1, 0, 0),))
    object.__setattr__(bad, "elements", ((0, 0, 0), (1, 0, 0)))
    with pytest.raises(NotIsotropic):
        ov.build_overlattice(L, bad)


def test_group_too_large():
    L = he7e7a3()
    A = lat.discriminant_form(L)
    with pytest.raises(GroupTooLarge):
        ov.isotropic_subgroups(A, bound=4)
