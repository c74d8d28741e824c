"""Independent recomputation of the characteristic-3 Frobenius of a product.

The data in ``frobenius_data`` is an external, term-by-term derivation; these
tests check each intermediate identity with the library's Poisson operad."""

from itertools import permutations

import pytest

from divpow.combinatorics import Permutation, diamond, iota, wreath_coset_representatives, wreath_subgroup
from divpow.distributive import pois_law
from divpow.operads import OperadElement, com_generator

from frobenius_data import (
    A1,
    A2,
    ALL_INDICES,
    E_CYCLES,
    GROUPS,
    L2_PRINTED,
    L3_ORBIT,
    L4_ORBIT,
    L5_ORBIT,
    WREATH_CYCLES,
    l3_indexed,
    letters_in,
    read,
)

E = [Permutation.from_cycles(c, 6) for c in E_CYCLES]
ODD, EVEN = (1, 3, 5), (2, 4, 6)


def orbit(x, perms):
    total = OperadElement(x.operad, x.n, {}, x.characteristic)
    for s in perms:
        total = total + x.act(s)
    return total


def young_135_246():
    for a in permutations(ODD):
        for b in permutations(EVEN):
            img = [0] * 6
            for src, dst in zip(ODD + EVEN, a + b):
                img[src - 1] = dst
            yield Permutation(img)


def cubic_bracket():
    """L_3(x1,x2,x3) = [[x1;x2];x3] + [[x1;x3];x2] as a Lie element."""
    from divpow.operads import LIE

    return OperadElement(LIE, 3, {(1, 2, 3): 1, (1, 3, 2): 1}, 3)


def test_groups_sum_to_the_law_image():
    total = read(GROUPS[0], 3)
    for g in GROUPS[1:]:
        total = total + read(g, 3)
    assert total == pois_law(cubic_bracket(), [com_generator(2, 3)] * 3, characteristic=3)


def test_group_split_needs_char_three():
    total = read(GROUPS[0], 0)
    for g in GROUPS[1:]:
        total = total + read(g, 0)
    x = OperadElement(cubic_bracket().operad, 3, {(1, 2, 3): 1, (1, 3, 2): 1}, 0)
    assert total != pois_law(x, [com_generator(2)] * 3)


def test_second_group_as_printed_has_seven_letters():
    assert letters_in(L2_PRINTED) == [7, 7, 7, 7]
    assert letters_in(GROUPS[1]) == [6, 6, 6, 6]


@pytest.mark.parametrize("k,listing", [(2, L3_ORBIT), (3, L4_ORBIT), (4, L5_ORBIT)])
def test_orbit_listings_match_the_orbit_sums(k, listing):
    assert orbit(read(GROUPS[k], 3), E) == read(listing, 3)


@pytest.mark.parametrize("k,vanishes", [(0, False), (1, False), (2, False), (3, True), (4, True), (5, True)])
def test_which_orbit_sums_vanish(k, vanishes):
    assert orbit(read(GROUPS[k], 3), E).is_zero() == vanishes


def test_index_sets_partition_the_terms():
    assert sorted(A1 + A2) == sorted(ALL_INDICES)
    assert not set(A1) & set(A2)
    assert len(ALL_INDICES) == 18


def test_first_two_groups_orbit_to_minus_the_indexed_sum():
    lhs = orbit(read(GROUPS[0], 3) + read(GROUPS[1], 3), E)
    rhs = OperadElement(lhs.operad, 6, {}, 3)
    for idx in A1 + A2:
        rhs = rhs - l3_indexed(idx, 3)
    assert lhs == rhs


def test_indexed_sums_are_young_norms():
    young = list(young_135_246())
    assert len(young) == 36
    for base, block in (((1, 2, 3, 4, 5, 6), A1), ((1, 2, 4, 3, 5, 6), A2)):
        total = OperadElement(l3_indexed(base, 3).operad, 6, {}, 3)
        for idx in block:
            total = total + l3_indexed(idx, 3)
        # each indexed sum is four times (i.e. once, mod 3) the norm of its base term
        norm = orbit(l3_indexed(base, 3), young)
        assert norm == total * 4


def test_third_group_orbit_sign():
    """The orbit sum of the third group is +N with N the Young norm of
    [a1;a2][a3;a4]a5a6; a minus sign here would flip the [a;b]^2 term."""
    N = orbit(read("[a_1;a_2][a_3;a_4]a_5a_6", 3), young_135_246())
    got = orbit(read(GROUPS[2], 3), E)
    assert got == N
    assert got != -N


def test_fourth_group_orbit_vanishes_over_the_integers():
    assert orbit(read(GROUPS[3], 0), E).is_zero()


def test_cosets_and_wreath_group():
    blocks = diamond((3,), [iota((1, 1))])
    assert [tuple(b) for b in blocks.blocks if b] == [ODD, EVEN]
    W = {Permutation.from_cycles(c, 6) for c in WREATH_CYCLES}
    assert set(wreath_subgroup((3,), [(1, 1)])) == W
    reps = wreath_coset_representatives((3,), [(1, 1)])
    assert len(reps) == len(E) == 6

    def left_coset(s):
        return frozenset(s * w for w in W)

    assert {left_coset(s) for s in reps} == {left_coset(s) for s in E}
