from itertools import permutations
from math import factorial, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from divpow.combinatorics import (
    Composition,
    Permutation,
    SetPartition,
    block_permutation,
    compose_composition,
    coset_representatives,
    diamond,
    gamma_k,
    gamma_k_via_rhd,
    in_young_subgroup,
    iota,
    partition_circ,
    partition_circ_direct,
    pr,
    rhd,
    rhd_composition,
    tensor_partitions,
    wreath_coset_representatives,
    wreath_subgroup,
    young_subgroup,
)


# --- strategies -----------------------------------------------------------------

@st.composite
def set_partitions(draw, max_n=6, max_blocks=4, allow_empty=False):
    n = draw(st.integers(0 if allow_empty else 1, max_n))
    k = draw(st.integers(1, max_blocks))
    f = [draw(st.integers(0, k - 1)) for _ in range(n)]
    R = SetPartition.from_function(f, k)
    if not allow_empty:
        R = SetPartition([b for b in R.blocks if b], n)
    return R


@st.composite
def perms(draw, n):
    return Permutation(draw(st.permutations(range(1, n + 1))))


compositions_st = st.lists(st.integers(0, 3), min_size=1, max_size=4).map(Composition)


# --- worked examples ----------------------------------------------------------------

def test_gamma_k_example():
    assert str(gamma_k(SetPartition([(1, 3), (2,)]), 3)) == "({1,3,4,6,7,9},{2,5,8})"


def test_diamond_example_with_compositions():
    got = diamond((3, 2), [(2, 1), (1, 2)])
    assert str(got) == "({1,2,4,5,7,8},{3,6,9},{10,13},{11,12,14,15})"
    assert got.n == 15 and len(got) == 4


def test_diamond_example_with_partitions():
    Qs = [SetPartition.parse("({1,2},{3})"), SetPartition.parse("({1},{2,3})")]
    assert diamond(Composition((3, 2)), Qs) == diamond((3, 2), [(2, 1), (1, 2)])


def test_tensor_power_example():
    R = SetPartition([(1, 3), (2,)])
    cube = tensor_partitions(tensor_partitions(R, R), R)
    assert str(cube) == "({1,3},{2},{4,6},{5},{7,9},{8})"


# --- parsing and printing ---------------------------------------------------------------

@given(set_partitions(allow_empty=True))
def test_partition_parse_roundtrip(R):
    assert SetPartition.parse(str(R), R.n) == R


@given(compositions_st)
def test_composition_parse_roundtrip(r):
    assert Composition.parse(str(r)) == r


@given(st.integers(1, 6).flatmap(perms))
def test_permutation_parse_roundtrip(s):
    assert Permutation.parse(str(s), s.n) == s


def test_partition_rejects_bad_input():
    with pytest.raises(ValueError):
        SetPartition([(1, 2), (2, 3)])
    with pytest.raises(ValueError):
        SetPartition([(1, 3)], 3)
    with pytest.raises(ValueError):
        SetPartition.parse("{1,2}")


# --- group laws --------------------------------------------------------------------------

@given(st.integers(1, 6).flatmap(lambda n: st.tuples(perms(n), perms(n), perms(n))))
def test_permutation_group_laws(triple):
    a, b, c = triple
    n = a.n
    assert all((a * b)(x) == a(b(x)) for x in range(1, n + 1))
    assert (a * b) * c == a * (b * c)
    assert (a * a.inverse()).is_identity()
    assert Permutation.from_cycles(a.cycles(), n) == a


# --- partition operations against their defining formulas -------------------------------

@given(set_partitions(), st.integers(0, 4))
def test_gamma_k_two_ways(R, k):
    if k == 0:
        assert gamma_k(R, 0).n == 0
        return
    assert gamma_k(R, k) == gamma_k_via_rhd(R, k)


@given(set_partitions(max_n=5, max_blocks=3), st.data())
def test_rhd_is_composition_of_block_maps(R, data):
    p = len(R)
    g = [data.draw(st.integers(0, 2)) for _ in range(p)]
    Q = SetPartition.from_function(g, 3)
    out = rhd(Q, R)
    f = R.block_of()
    assert out.block_of() == [g[f[x - 1]] for x in range(1, R.n + 1)]


@given(compositions_st, st.data())
def test_rhd_on_compositions(r, data):
    splits = data.draw(st.lists(st.integers(0, len(r)), min_size=1, max_size=3))
    q = Composition(splits[:-1] + [len(r) - sum(splits[:-1])]) if sum(splits[:-1]) <= len(r) else Composition((len(r),))
    assert rhd_composition(q, r) == pr(rhd(iota(q), iota(r)))


@given(st.lists(compositions_st, min_size=1, max_size=3), st.data())
def test_diamond_is_tensor_of_gammas(qs, data):
    r = Composition(data.draw(st.lists(st.integers(0, 3), min_size=len(qs), max_size=len(qs))))
    out = diamond(r, [iota(q) for q in qs])
    expected = SetPartition([], 0)
    for k, q in zip(r, qs):
        expected = tensor_partitions(expected, gamma_k(iota(q), k))
    assert out == expected
    assert out.n == sum(k * q.n for k, q in zip(r, qs))


@given(compositions_st)
def test_iota_pr_inverse(r):
    assert pr(iota(r)) == r
    blocks = iota(r).blocks
    flat = [x for b in blocks for x in b]
    assert flat == list(range(1, r.n + 1))


@given(compositions_st, st.data())
def test_compose_composition(r, data):
    if not len(r):
        return
    i = data.draw(st.integers(1, len(r)))
    cuts = sorted(data.draw(st.lists(st.integers(0, r[i - 1]), max_size=2)))
    bounds = [0] + cuts + [r[i - 1]]
    q = Composition(b - a for a, b in zip(bounds, bounds[1:]))
    out = compose_composition(r, i, q)
    assert out.n == r.n
    assert len(out) == len(r) + len(q) - 1
    assert out.parts[i - 1:i - 1 + len(q)] == q.parts


@given(set_partitions(max_n=4, allow_empty=True), st.data())
def test_partition_circ_two_ways(J, data):
    if J.n == 0:
        return
    K = data.draw(set_partitions(max_n=4, allow_empty=True))
    if K.n == 0:
        return
    l = data.draw(st.integers(1, J.n))
    a, b = partition_circ(J, l, K), partition_circ_direct(J, l, K)
    # the two routes agree up to trailing empty blocks
    assert [blk for blk in a.blocks] == [blk for blk in b.blocks][:len(a.blocks)]
    assert all(not blk for blk in b.blocks[len(a.blocks):])


# --- cosets -------------------------------------------------------------------------------

def _brute_left_cosets(group, sub):
    return {frozenset(g * h for h in sub) for g in group}


@given(st.lists(st.integers(0, 3), min_size=1, max_size=3).filter(lambda r: 0 < sum(r) <= 6))
def test_coset_representatives(r):
    n = sum(r)
    reps = coset_representatives(n, r)
    young = young_subgroup(iota(r))
    assert len(reps) == factorial(n) // prod(factorial(x) for x in r)
    cosets = {frozenset(s * h for h in young) for s in reps}
    assert len(cosets) == len(reps)
    for s in reps:
        for block in iota(r).blocks:
            images = [s(x) for x in block]
            assert images == sorted(images)


@pytest.mark.parametrize("ks,qs", [
    ((3,), [(1, 1)]),
    ((2,), [(2, 1)]),
    ((2, 1), [(1, 1), (1, 2)]),
    ((2, 2), [(1,), (1, 1)]),
    ((3,), [(2,)]),
    ((1, 2), [(2,), (1,)]),
])
def test_wreath_coset_representatives_against_brute_force(ks, qs):
    R = diamond(ks, [iota(q) for q in qs])
    big = young_subgroup(R)
    sub = wreath_subgroup(ks, qs)
    assert all(in_young_subgroup(h, R) for h in sub)
    assert len(sub) == prod(factorial(k) * prod(factorial(x) for x in q) ** k for k, q in zip(ks, qs))
    reps = wreath_coset_representatives(ks, qs)
    assert len(reps) == len(big) // len(sub)
    assert all(in_young_subgroup(s, R) for s in reps)
    assert {frozenset(s * h for h in sub) for s in reps} == _brute_left_cosets(big, sub)


def test_block_permutation_moves_intervals():
    r = Composition((2, 1, 3))
    rho = Permutation((3, 1, 2))
    star = block_permutation(rho, r)
    target = iota(r.permuted(rho))
    for i, block in enumerate(iota(r).blocks, start=1):
        assert [star(x) for x in block] == list(target.blocks[rho(i) - 1])


def test_young_subgroup_size():
    assert len(young_subgroup(iota((3, 2)))) == 12
    assert len(set(young_subgroup(SetPartition([(1, 3, 5), (2, 4, 6)])))) == 36
    assert sorted(young_subgroup(iota((1, 1)))) == [Permutation.identity(2)]
    assert len(list(permutations(range(3)))) == len(young_subgroup(iota((3,))))
