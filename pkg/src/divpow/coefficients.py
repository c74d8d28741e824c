"""Exact scalars over the rationals or a prime field.

A :class:`Coefficient` carries its characteristic, so adding a rational to a
residue mod 3 raises instead of silently producing garbage.  Internally the
heavier modules keep raw values (``int``/``Fraction`` in characteristic 0,
reduced ``int`` in characteristic p) and go through a :class:`Field` to
normalise them; the wrapper type is what crosses the public API.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod


class CharacteristicMismatch(TypeError):
    pass


class NonInvertibleFactorial(ZeroDivisionError):
    def __init__(self, part, characteristic):
        self.part = part
        self.characteristic = characteristic
        super().__init__(
            f"non-invertible factorial: {part}! vanishes in characteristic {characteristic}"
        )


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@lru_cache(maxsize=None)
def field(characteristic=0):
    """Shared :class:`Field` instance for a characteristic."""
    return Field(characteristic)


class Field:
    """Arithmetic on raw values for one characteristic."""

    def __init__(self, characteristic=0):
        if characteristic != 0 and not _is_prime(characteristic):
            raise ValueError(f"characteristic must be 0 or prime, got {characteristic}")
        self.characteristic = characteristic

    def __repr__(self):
        return f"Field({self.characteristic})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __call__(self, value):
        """Normalise an int / Fraction / Coefficient into a raw value."""
        if isinstance(value, Coefficient):
            if value.characteristic != self.characteristic:
                raise CharacteristicMismatch(
                    f"cannot use a characteristic {value.characteristic} scalar in characteristic {self.characteristic}"
                )
            return value.value
        p = self.characteristic
        if p == 0:
            if isinstance(value, Fraction):
                return int(value) if value.denominator == 1 else value
            return int(value)
        if isinstance(value, Fraction):
            den = value.denominator % p
            if den == 0:
                raise ZeroDivisionError(f"denominator {value.denominator} vanishes mod {p}")
            return value.numerator * pow(den, -1, p) % p
        return int(value) % p

    def add(self, a, b):
        s = a + b
        if self.characteristic:
            return s % self.characteristic
        return int(s) if isinstance(s, Fraction) and s.denominator == 1 else s

    def mul(self, a, b):
        s = a * b
        if self.characteristic:
            return s % self.characteristic
        return int(s) if isinstance(s, Fraction) and s.denominator == 1 else s

    def neg(self, a):
        return (-a) % self.characteristic if self.characteristic else -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic:
            return pow(a, -1, self.characteristic)
        f = Fraction(1) / a
        return int(f) if f.denominator == 1 else f

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def coefficient(self, raw):
        return Coefficient(raw, self.characteristic)

    def factorial_inverse(self, n):
        f = factorial(n)
        if self.characteristic and n >= self.characteristic:
            raise NonInvertibleFactorial(n, self.characteristic)
        return self.inv(self(f))


class Coefficient:
    """An exact scalar tagged with its characteristic."""

    __slots__ = ("value", "characteristic")

    def __init__(self, value=0, characteristic=0):
        if isinstance(value, Coefficient):
            if value.characteristic != characteristic:
                raise CharacteristicMismatch(
                    f"characteristic {value.characteristic} value given for characteristic {characteristic}"
                )
            value = value.value
        self.characteristic = characteristic
        self.value = field(characteristic)(value)

    def _other(self, other):
        if isinstance(other, Coefficient):
            if other.characteristic != self.characteristic:
                raise CharacteristicMismatch(
                    f"mixing characteristic {self.characteristic} and {other.characteristic}"
                )
            return other.value
        if isinstance(other, (int, Fraction)):
            return field(self.characteristic)(other)
        return NotImplemented

    def _wrap(self, raw):
        c = Coefficient.__new__(Coefficient)
        c.characteristic = self.characteristic
        c.value = raw
        return c

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(field(self.characteristic).add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        F = field(self.characteristic)
        return self._wrap(F.add(self.value, F.neg(o)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._wrap(field(self.characteristic).neg(self.value))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(field(self.characteristic).mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(field(self.characteristic).div(self.value, o))

    def __rtruediv__(self, other):
        return Coefficient(other, self.characteristic) / self

    def __pow__(self, k):
        if k < 0:
            return (1 / self) ** (-k)
        F = field(self.characteristic)
        acc = F(1)
        for _ in range(k):
            acc = F.mul(acc, self.value)
        return self._wrap(acc)

    def inverse(self):
        return self._wrap(field(self.characteristic).inv(self.value))

    def is_zero(self):
        return self.value == 0

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, Coefficient):
            return self.characteristic == other.characteristic and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == field(self.characteristic)(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.characteristic))

    def __repr__(self):
        return f"Coefficient({str(self)!r})"

    def __str__(self):
        if self.characteristic:
            return f"{self.value} mod {self.characteristic}"
        v = Fraction(self.value)
        return f"{v.numerator}/{v.denominator}"

    @classmethod
    def parse(cls, text):
        """Inverse of ``str``: accepts "a/b", "a", or "k mod p"."""
        s = text.strip()
        m = re.fullmatch(r"(-?\d+)\s+mod\s+(\d+)", s)
        if m:
            return cls(int(m.group(1)), int(m.group(2)))
        m = re.fullmatch(r"(-?\d+)\s*(?:/\s*(\d+))?", s)
        if m:
            den = int(m.group(2)) if m.group(2) else 1
            return cls(Fraction(int(m.group(1)), den), 0)
        raise ValueError(f"not a scalar: {text!r}")


def _parts(q):
    return tuple(getattr(q, "parts", q))


def multinomial(j, q, characteristic=0):
    """j! / prod(q_i!) reduced into the given characteristic."""
    parts = _parts(q)
    if any(x < 0 for x in parts) or sum(parts) != j:
        raise ValueError(f"parts {parts} do not sum to {j}")
    return Coefficient(multinomial_int(parts), characteristic)


def multinomial_int(parts):
    return factorial(sum(parts)) // prod(factorial(x) for x in parts)


def divided_coefficient(r, characteristic=0):
    """1 / prod(r_i!); fails when some r_i! vanishes in characteristic p."""
    parts = _parts(r)
    if characteristic:
        for x in parts:
            if x >= characteristic:
                raise NonInvertibleFactorial(x, characteristic)
    return Coefficient(Fraction(1, prod(factorial(x) for x in parts)), characteristic)


def compositions(n, m):
    """All compositions of n into m non-negative parts, lexicographically decreasing."""
    if m == 0:
        if n == 0:
            yield ()
        return
    if m == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, m - 1):
            yield (first,) + rest


def vandermonde_check(j, k, m):
    """Check sum over q'+q''=q of mult(j,q') mult(k,q'') == mult(j+k,q) for all q."""
    for q in compositions(j + k, m):
        total = 0
        for q1 in compositions(j, m):
            q2 = tuple(a - b for a, b in zip(q, q1))
            if min(q2, default=0) < 0:
                continue
            total += multinomial_int(q1) * multinomial_int(q2)
        if total != multinomial_int(q):
            return False
    return True


# --- sparse vectors over raw field values -----------------------------------

def add_term(vec, key, c, F):
    """vec[key] += c, dropping zeros."""
    v = vec.get(key)
    if v is None:
        if c != 0:
            vec[key] = c
        return
    s = F.add(v, c)
    if s == 0:
        del vec[key]
    else:
        vec[key] = s


def add_scaled(vec, other, c, F):
    """vec += c * other."""
    if c == 0:
        return
    for key, v in other.items():
        add_term(vec, key, F.mul(c, v), F)


def reduce_int_vector(vec, F):
    """Map an integer-coefficient dict into F, dropping zeros."""
    out = {}
    for key, v in vec.items():
        r = F(v)
        if r != 0:
            out[key] = r
    return out
