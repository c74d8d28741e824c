from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from divpow.coefficients import (
    CharacteristicMismatch,
    Coefficient,
    NonInvertibleFactorial,
    compositions,
    divided_coefficient,
    field,
    multinomial,
    multinomial_int,
    vandermonde_check,
)

PRIMES = [2, 3, 5, 7]
parts_st = st.lists(st.integers(0, 6), min_size=1, max_size=4)


def binomial_chain(parts):
    """Multinomial as a product of binomials, independent of factorial division."""
    total, out = 0, 1
    for x in parts:
        total += x
        out *= comb(total, x)
    return out


def lucas_digits(n, p):
    out = []
    while n:
        out.append(n % p)
        n //= p
    return out


def lucas_multinomial(parts, p):
    """Multinomial mod p via base-p digits: zero on any carry."""
    digits = [lucas_digits(x, p) for x in parts]
    width = max((len(d) for d in digits), default=0)
    out = 1
    for k in range(width):
        column = [d[k] if k < len(d) else 0 for d in digits]
        out = out * binomial_chain(column) % p
    return out


@given(parts_st)
def test_multinomial_matches_binomial_chain(parts):
    assert multinomial_int(parts) == binomial_chain(parts)
    assert multinomial(sum(parts), parts).value == binomial_chain(parts)


@given(parts_st, st.sampled_from(PRIMES))
def test_multinomial_mod_p_matches_lucas(parts, p):
    assert multinomial(sum(parts), parts, p).value == lucas_multinomial(parts, p)


def test_multinomial_rejects_wrong_sum():
    with pytest.raises(ValueError):
        multinomial(5, (2, 2))


@given(st.integers(0, 6), st.integers(0, 6), st.integers(1, 4))
def test_vandermonde_property(j, k, m):
    assert vandermonde_check(j, k, m)


def test_vandermonde_exhaustive_small():
    assert all(vandermonde_check(j, k, m) for m in range(1, 5) for j in range(9) for k in range(9 - j))


@given(st.integers(0, 7), st.integers(0, 4))
def test_compositions_count_and_sum(n, m):
    out = list(compositions(n, m))
    expected = comb(n + m - 1, m - 1) if m else int(n == 0)
    assert len(out) == len(set(out)) == expected
    assert all(sum(c) == n and len(c) == m for c in out)
    assert out == sorted(out, reverse=True)


def test_divided_coefficient_values():
    assert divided_coefficient((2, 1)).value == Fraction(1, 2)
    assert divided_coefficient((2, 1), 3).value == 2
    assert divided_coefficient((3, 3)).value == Fraction(1, 36)
    with pytest.raises(NonInvertibleFactorial):
        divided_coefficient((3, 1), 3)


@given(st.integers(-50, 50), st.integers(1, 50), st.integers(-50, 50), st.integers(1, 50), st.sampled_from([0] + PRIMES))
def test_field_is_a_ring_homomorphism_from_rationals(a, b, c, d, p):
    F = field(p)
    x, y = Fraction(a, b), Fraction(c, d)
    if p and (b % p == 0 or d % p == 0):
        return
    assert F.add(F(x), F(y)) == F(x + y)
    assert F.mul(F(x), F(y)) == F(x * y)
    if F(y):
        assert F.mul(F.div(F(x), F(y)), F(y)) == F(x)


def test_big_integers_do_not_overflow():
    assert multinomial_int((6, 6)) == factorial(12) // (720 * 720)
    assert multinomial(12, (4, 4, 4), 0).value == 34650
    assert Coefficient(factorial(20), 0) * Coefficient(factorial(20), 0) == Coefficient(factorial(20) ** 2, 0)


@given(st.integers(-30, 30), st.integers(1, 30), st.sampled_from([0] + PRIMES))
def test_coefficient_parse_roundtrip(a, b, p):
    if p and b % p == 0:
        return
    c = Coefficient(Fraction(a, b), p)
    assert Coefficient.parse(str(c)) == c


def test_coefficient_arithmetic_and_mismatch():
    a = Coefficient(2, 3)
    assert a + a == Coefficient(1, 3)
    assert a * a == Coefficient(1, 3)
    assert a.inverse() == a
    assert (a ** 2).value == 1
    assert not Coefficient(3, 3)
    with pytest.raises(CharacteristicMismatch):
        a + Coefficient(1, 5)
    with pytest.raises(ZeroDivisionError):
        Coefficient(0, 3).inverse()
    with pytest.raises(ValueError):
        field(4)
