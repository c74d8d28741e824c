import pytest
from hypothesis import given
from hypothesis import strategies as st

from divpow.distributive import (
    POIS,
    DerivationLaw,
    PoissonLaw,
    ShiftLaw,
    check_odl,
    der_law,
    der_operad,
    pois_law,
    shift_operad,
    shift_com_from_partition,
    shift_com_to_partition,
    shift_law,
)
from divpow.operads import COM, LIE, D, com_generator, comb_to_tree, left_comb

from polymodel import Poly, poisson

Q1, P1, Q2, P2 = (Poly.var(i, 4) for i in range(4))
T = Poly.var(0, 1)


# --- function models used as oracles ------------------------------------------------------

def eval_bracket_tree(tree, leaf):
    if isinstance(tree, int):
        return leaf(tree)
    return poisson(eval_bracket_tree(tree[0], leaf), eval_bracket_tree(tree[1], leaf))


def eval_pois(x, leaf):
    """Evaluate a Pois element with leaves replaced by functions on a symplectic space."""
    total = Poly.const(0, 4)
    for (top, facs), c in x.terms.items():
        term = Poly.const(c, 4)
        for f in facs:
            term = term * eval_bracket_tree(comb_to_tree(f), leaf)
        total = total + term
    return total


def eval_d_product(x, leaf, d_power):
    total = Poly.const(0, 1)
    for (top, facs), c in x.terms.items():
        term = Poly.const(c, 1)
        for j, label in facs:
            term = term * d_power(j, leaf(label))
        total = total + term
    return total


SAMPLES = [Q1 + 2 * P1, Q1 * P2 - Q2, P1**2 + Q2, Q1 * Q2 + P1 * P2, 3 * Q2 - P1 * Q1, P2**2 - Q1]


def leaf_function(k):
    return SAMPLES[(k - 1) % len(SAMPLES)] + k


def product(polys, nvars):
    out = Poly.const(1, nvars)
    for f in polys:
        out = out * f
    return out


# --- Leibniz law ------------------------------------------------------------------------------

@given(st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_pois_law_matches_poisson_bracket_of_products(sizes):
    q = left_comb(len(sizes))
    ps = [com_generator(s) for s in sizes]
    x = pois_law(q, ps)
    # leaf labels are consecutive; each input is the product of its leaves
    starts, pos = [], 0
    for s in sizes:
        starts.append(pos)
        pos += s

    def block(k):
        return product([leaf_function(l) for l in range(starts[k - 1] + 1, starts[k - 1] + sizes[k - 1] + 1)], 4)

    expected = eval_bracket_tree(comb_to_tree(q.terms and next(iter(q.terms))), block)
    assert eval_pois(x, leaf_function) == expected


def test_leibniz_example():
    # [x1*x2; x3] = x1*[x2;x3] + [x1;x3]*x2
    x = pois_law(left_comb(2), [com_generator(2), com_generator(1)])
    assert x.terms == {((1, 2), ((1,), (2, 3))): 1, ((1, 2), ((1, 3), (2,))): 1}


@st.composite
def pois_elements(draw, max_inputs=3):
    k = draw(st.integers(1, max_inputs))
    sizes = draw(st.lists(st.integers(1, 2), min_size=k, max_size=k))
    return pois_law(left_comb(k), [com_generator(s) for s in sizes])


@given(pois_elements(), pois_elements(), st.data())
def test_pois_composition_is_substitution(x, y, data):
    i = data.draw(st.integers(1, x.n))
    b = y.n
    composed = x.compose(i, y)
    inner = eval_pois(y, lambda l: leaf_function(100 + l))
    outer = eval_pois(x, lambda l: inner if l == i else leaf_function(l if l < i else l + b - 1))
    got = eval_pois(composed, lambda l: leaf_function(100 + l - i + 1) if i <= l < i + b else leaf_function(l))
    assert got == outer


# --- derivations and shifts on one-variable polynomials -------------------------------------------

POLYS = [T + 1, T**2 - 3, 2 * T**3 + T, T - 5, T**2 + T + 1]


def poly_leaf(l):
    return POLYS[(l - 1) % len(POLYS)]


@pytest.mark.parametrize("j", range(0, 5))
@pytest.mark.parametrize("n", range(1, 5))
def test_der_law_is_iterated_derivative(j, n):
    x = der_law(j, com_generator(n))
    whole = product([poly_leaf(l) for l in range(1, n + 1)], 1)
    assert eval_d_product(x, poly_leaf, lambda k, f: f.diff(0, k)) == whole.diff(0, j)


@pytest.mark.parametrize("j", range(0, 4))
@pytest.mark.parametrize("n", range(1, 5))
def test_shift_law_is_a_ring_endomorphism(j, n):
    x = shift_law(j, com_generator(n))

    def phi(k, f):
        return f.scale_var(0, 2**k)

    whole = product([poly_leaf(l) for l in range(1, n + 1)], 1)
    assert eval_d_product(x, poly_leaf, phi) == phi(j, whole)


def test_der_law_on_lie_bracket():
    x = der_law(2, left_comb(2), P=LIE)
    assert sorted(x.terms.values()) == [1, 1, 2]


def test_der_law_reduces_mod_p():
    x = der_law(3, com_generator(2), characteristic=3)
    # binomial(3, 1) = binomial(3, 2) = 0 mod 3
    assert len(x.terms) == 2


# --- shifted commutative monomials and partitions -------------------------------------------------

@given(st.lists(st.integers(0, 4), min_size=1, max_size=6))
def test_shift_com_partition_round_trip(exps):
    from divpow.combinatorics import partition_from_exponents

    J = partition_from_exponents(exps)
    assert shift_com_to_partition(shift_com_from_partition(J)) == J


# --- ODL diagrams -------------------------------------------------------------------------------

LAW_CASES = [
    (ShiftLaw(COM), 4),
    (ShiftLaw(LIE), 4),
    (DerivationLaw(COM), 4),
    (DerivationLaw(LIE), 4),
    (PoissonLaw(), 4),
]


@pytest.mark.parametrize("law,arity", LAW_CASES, ids=lambda v: repr(v) if not isinstance(v, int) else str(v))
@pytest.mark.parametrize("char", [0, 2, 3])
def test_odl_diagrams_commute(law, arity, char):
    report = check_odl(law, max_arity=arity, characteristic=char)
    assert report["passed"], [d for d in report["diagrams"] if d["failures"]][:1]
    assert all(d["instances"] > 0 for d in report["diagrams"])
    assert [d["diagram"] for d in report["diagrams"]] == ["ODL1", "ODL2", "ODL3", "ODL4"]


class _BrokenLaw(DerivationLaw):
    """Drops the mixed terms: a non-law that the checker must reject."""

    def apply(self, q, pmonos):
        out = super().apply(q, pmonos)
        return {m: c for m, c in out.items() if sum(1 for j, _ in m[1] if j) <= 1}


def test_odl_checker_rejects_a_broken_law():
    report = check_odl(_BrokenLaw(COM), max_arity=3)
    assert not report["passed"]
    failing = {d["diagram"] for d in report["diagrams"] if d["failures"]}
    assert "ODL1" in failing
    f = next(d for d in report["diagrams"] if d["failures"])["failures"][0]
    assert set(f) == {"input", "lhs", "rhs"}


# --- product operads ----------------------------------------------------------------------------

@pytest.mark.parametrize("operad", [POIS, der_operad(COM), der_operad(LIE)], ids=lambda o: o.name)
def test_product_operad_relabel_agrees_with_generic_path(operad):
    from itertools import permutations

    from divpow.distributive import _mul_combos, assemble

    for n in range(1, 4):
        for mono in operad.basis(tuple(range(1, n + 1))):
            for img in permutations(range(1, n + 1)):
                f = dict(zip(range(1, n + 1), img))
                fast = operad.relabel(mono, f)
                slow = {}
                top, facs = mono
                for new, c in _mul_combos([operad.Q.relabel(g, f) for g in facs]).items():
                    named = {min(operad.Q.labels(g)): h for g, h in zip(facs, new)}
                    for m, c2 in assemble(operad.P, operad.Q, top, named).items():
                        slow[m] = slow.get(m, 0) + c * c2
                assert fast == {m: c for m, c in slow.items() if c}


@pytest.mark.parametrize("n,dim", [(1, 1), (2, 2), (3, 6), (4, 24)])
def test_pois_dimension_is_factorial(n, dim):
    assert len(POIS.basis(tuple(range(1, n + 1)))) == dim


def test_d_operad_only_in_arity_one():
    assert D.supports_arity(1) and not D.supports_arity(2)
    # one commutative top, each leaf carrying a power of d up to the truncation degree
    assert len(der_operad(COM).basis((1, 2, 3))) == (D.max_degree + 1) ** 3


# --- shifted commutative operad and partitions ------------------------------------------------

def _shift_element(J):
    from divpow.operads import OperadElement

    return OperadElement(shift_operad(COM), J.n, {shift_com_from_partition(J): 1}, 0)


def test_shift_com_composition_is_partition_composition():
    from itertools import product

    from divpow.combinatorics import partition_circ, partition_from_exponents

    count = 0
    for n in range(1, 4):
        for m in range(1, 5 - n):
            for e1 in product(range(3), repeat=n):
                for e2 in product(range(3), repeat=m):
                    J, K = partition_from_exponents(list(e1)), partition_from_exponents(list(e2))
                    for i in range(1, n + 1):
                        count += 1
                        assert _shift_element(J).compose(i, _shift_element(K)) == _shift_element(partition_circ(J, i, K))
    assert count == 576


@pytest.mark.parametrize("j,k", [(j, k) for j in range(4) for k in range(4) if j + k <= 6])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_derivation_powers_compose(j, k, n):
    from divpow.distributive import product_element

    T = der_operad(COM)
    dj = product_element(T, (1,), ((j, 1),))
    assert dj.compose(1, der_law(k, com_generator(n))) == der_law(j + k, com_generator(n))
