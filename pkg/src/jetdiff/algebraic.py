"""Exact arithmetic in a simple number field ``Q[t]/(m(t))``, used for non-rational curve points."""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache

__all__ = ["NumberField", "AlgebraicNumber", "cyclotomic_polynomial", "cyclotomic_field"]


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        f = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = f
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        _trim(a)
    return _trim(q), a


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of ``Phi_n`` from low to high degree."""
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _divmod(num, [Fraction(c) for c in cyclotomic_polynomial(d)])
            assert not rem
    return tuple(int(c) for c in num)


class NumberField:
    """``Q[t]/(modulus)`` for an irreducible monic ``modulus``, with an embedding ``t -> root``."""

    def __init__(self, modulus, root: complex, name: str = "t"):
        self.modulus = [Fraction(c) for c in modulus]
        self.degree = len(self.modulus) - 1
        self.root = complex(root)
        self.name = name

    def __call__(self, coeffs) -> "AlgebraicNumber":
        return AlgebraicNumber(self, coeffs)

    @property
    def gen(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, [0, 1])

    def reduce(self, p: list) -> tuple:
        _, r = _divmod(_trim([Fraction(c) for c in p]), self.modulus)
        return tuple(r)

    def inverse(self, p: tuple) -> tuple:
        # extended Euclid: find s with s*p = 1 mod modulus
        r0, r1 = list(self.modulus), list(p)
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _divmod(r0, r1)
            r0, r1 = r1, r
            qs = _mul(q, s1)
            s0, s1 = s1, _trim([x - y for x, y in _zip_pad(s0, qs)])
        if len(r0) != 1:
            raise ZeroDivisionError("element is not invertible")
        return self.reduce([c / r0[0] for c in s0])


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


@lru_cache(maxsize=None)
def cyclotomic_field(n: int) -> NumberField:
    """``Q(zeta_n)`` with ``zeta_n`` embedded as ``exp(2 pi i / n)``."""
    return NumberField(cyclotomic_polynomial(n), cmath.exp(2j * cmath.pi / n), f"z{n}")


class AlgebraicNumber:
    __slots__ = ("field", "c")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        self.c = field.reduce(list(coeffs))

    def _lift(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field is not self.field:
                raise TypeError("numbers from different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(self.field, [other])
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return AlgebraicNumber(self.field, [x + y for x, y in _zip_pad(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, [-x for x in self.c])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return AlgebraicNumber(self.field, _mul(list(self.c), list(o.c)))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if not self.c:
            raise ZeroDivisionError("division by zero")
        return AlgebraicNumber(self.field, self.field.inverse(self.c))

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = AlgebraicNumber(self.field, [1]), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        return hash(self.c[0]) if len(self.c) <= 1 else hash((self.field.name, self.c))

    def __bool__(self):
        return bool(self.c)

    def __complex__(self):
        return sum((complex(x) * self.field.root ** k for k, x in enumerate(self.c)), 0j)

    def __abs__(self):
        return abs(complex(self))

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for k, x in enumerate(self.c):
            if not x:
                continue
            mono = "" if k == 0 else (self.field.name if k == 1 else f"{self.field.name}^{k}")
            if not mono:
                parts.append(str(x))
            elif x == 1:
                parts.append(mono)
            elif x == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{x}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__
