"""Exact sparse bivariate polynomials over the rationals.

A :class:`Poly2` holds the affine equation ``R(x, y)`` of a plane curve and
everything derived from it (partial derivatives, the chart at infinity).
Coefficients are :class:`fractions.Fraction`; nothing here ever rounds.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "NEG_INF",
    "Poly2",
    "PolySyntaxError",
    "CurveSpec",
    "AdaptedReport",
    "parse_poly",
    "partial",
    "validate_curve",
    "infinity_chart",
    "chart_partial_transfer",
    "ChartTransferReport",
    "upoly_gcd",
]


class _NegInf:
    """Degree of the zero polynomial. Compares below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INF"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("NEG_INF")


NEG_INF = _NegInf()


class PolySyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class Poly2:
    """Sparse polynomial in ``x`` and ``y`` with rational coefficients.

    ``terms`` maps exponent pairs ``(a, b)`` (for ``x^a y^b``) to nonzero
    coefficients. Instances are immutable and hashable.
    """

    __slots__ = ("_terms", "_degree", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent in {(a, b)}")
            c = _frac(c)
            if c:
                clean[(int(a), int(b))] = c
        self._terms = clean
        self._degree = max((a + b for a, b in clean), default=NEG_INF)
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c) -> "Poly2":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "Poly2":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "Poly2":
        return cls({(0, 1): 1})

    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._terms)

    @property
    def degree(self):
        return self._degree

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, a: int, b: int) -> Fraction:
        return self._terms.get((a, b), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.sorted_terms())

    def sorted_terms(self) -> list[tuple[tuple[int, int], Fraction]]:
        # graded lex, x before y: higher total degree first, then higher x power
        return sorted(self._terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly2.const(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def _coerce(self, other) -> "Poly2":
        if isinstance(other, Poly2):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly2.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return Poly2(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly2({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, int], Fraction] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + c1 * c2
        return Poly2(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Poly2.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x, y):
        """Evaluate at a point; works for any numeric type supporting ``*`` and ``+``."""
        total = 0
        for (a, b), c in self._terms.items():
            total += c * x**a * y**b
        return total

    def evaluate(self, x, y):
        return self(x, y)

    def homogeneous_part(self, k: int) -> "Poly2":
        return Poly2({(a, b): c for (a, b), c in self._terms.items() if a + b == k})

    def __repr__(self):
        return f"Poly2({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)

    def to_json(self) -> list[dict]:
        return [{"a": a, "b": b, "c": _fmt_frac(c)} for (a, b), c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> "Poly2":
        terms: dict[tuple[int, int], Fraction] = {}
        for item in data:
            k = (int(item["a"]), int(item["b"]))
            terms[k] = terms.get(k, 0) + Fraction(str(item["c"]))
        return cls(terms)


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_mono(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("x" if a == 1 else f"x^{a}")
    if b:
        parts.append("y" if b == 1 else f"y^{b}")
    return "*".join(parts)


def format_poly(p: Poly2) -> str:
    """Canonical text form, readable back by :func:`parse_poly`."""
    if p.is_zero():
        return "0"
    out = []
    for i, ((a, b), c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        mono = _fmt_mono(a, b)
        if not mono:
            body = _fmt_frac(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_frac(mag)}*{mono}"
        if i == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([xy])|(\^)|(\*)|(/)|([+-]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        n = len(text)
        while pos < n:
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise PolySyntaxError(f"unexpected character {text[pos]!r}", len(text[:pos].encode()))
            start = m.start(m.lastindex)
            kind = ("int", "var", "^", "*", "/", "sign")[m.lastindex - 1]
            self.toks.append((kind, m.group(m.lastindex), len(text[:start].encode())))
            pos = m.end()
        self.i = 0
        self.end_offset = len(text.encode())

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", self.end_offset)

    def take(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise PolySyntaxError(f"expected {kind}, found {what}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Poly2:
        terms: dict[tuple[int, int], Fraction] = {}
        sign = 1
        if self.peek()[0] == "sign":
            sign = -1 if self.take("sign")[1] == "-" else 1
        while True:
            k, c = self.term()
            terms[k] = terms.get(k, 0) + sign * c
            tok = self.peek()
            if tok[0] == "eof":
                break
            sign = -1 if self.take("sign")[1] == "-" else 1
        return Poly2(terms)

    def term(self):
        kind = self.peek()[0]
        if kind == "int":
            c = self.coeff()
            if self.peek()[0] == "*":
                self.take("*")
                return self.mono(), c
            return (0, 0), c
        if kind == "var":
            return self.mono(), Fraction(1)
        tok = self.peek()
        raise PolySyntaxError("expected coefficient or monomial", tok[2])

    def coeff(self) -> Fraction:
        num = int(self.take("int")[1])
        if self.peek()[0] == "/":
            self.take("/")
            tok = self.take("int")
            den = int(tok[1])
            if den == 0:
                raise PolySyntaxError("zero denominator", tok[2])
            return Fraction(num, den)
        return Fraction(num)

    def power(self) -> int:
        if self.peek()[0] == "^":
            self.take("^")
            return int(self.take("int")[1])
        return 1

    def mono(self) -> tuple[int, int]:
        tok = self.take("var")
        if tok[1] == "x":
            a = self.power()
            b = 0
            if self.peek()[0] == "*":
                self.take("*")
                ytok = self.take("var")
                if ytok[1] != "y":
                    raise PolySyntaxError("expected 'y' after 'x*'", ytok[2])
                b = self.power()
            return a, b
        return 0, self.power()


def parse_poly(text: str) -> Poly2:
    """Parse ``c*x^a*y^b`` style text into a :class:`Poly2`.

    Raises :class:`PolySyntaxError` (carrying the byte offset) on malformed
    input, including a zero denominator.
    """
    if not text.strip():
        raise PolySyntaxError("empty polynomial", 0)
    return _Parser(text).parse()


def partial(p: Poly2, i: int, j: int) -> Poly2:
    """Mixed partial derivative of order ``i`` in x and ``j`` in y."""
    if i < 0 or j < 0:
        raise ValueError("derivative orders must be nonnegative")
    out = {}
    for (a, b), c in p.terms.items():
        if a < i or b < j:
            continue
        out[(a - i, b - j)] = c * math.perm(a, i) * math.perm(b, j)
    return Poly2(out)


# --- univariate helpers over Q (lists of Fractions, lowest degree first) ---

def _utrim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _umod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    lead = b[-1]
    while len(a) >= len(b) and a:
        f = a[-1] / lead
        shift = len(a) - len(b)
        for k, bc in enumerate(b):
            a[shift + k] -= f * bc
        _utrim(a)
    return a


def upoly_gcd(a: list, b: list) -> list[Fraction]:
    """Monic gcd of two univariate rational polynomials (coefficients low to high)."""
    a = _utrim([Fraction(c) for c in a])
    b = _utrim([Fraction(c) for c in b])
    while b:
        a, b = b, _umod(a, b)
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


@dataclass(frozen=True)
class AdaptedReport:
    monomial_xd_present: bool
    monomial_yd_present: bool
    infinity_transversal: bool

    @property
    def ok(self) -> bool:
        return self.monomial_xd_present and self.monomial_yd_present and self.infinity_transversal


@dataclass(frozen=True)
class CurveSpec:
    """A plane curve ``R(x, y) = 0`` of degree ``d`` with its coordinate checks.

    Affine smoothness is taken on trust; only the position relative to the
    line at infinity is checked.
    """

    r: Poly2
    d: int
    adapted: AdaptedReport

    @classmethod
    def from_text(cls, text: str) -> "CurveSpec":
        return validate_curve(parse_poly(text))

    def __str__(self):
        return format_poly(self.r)


def validate_curve(r: Poly2) -> CurveSpec:
    if r.is_zero() or r.degree < 1:
        raise ValueError("curve polynomial must be nonconstant")
    d = r.degree
    xd = r.coeff(d, 0) != 0
    yd = r.coeff(0, d) != 0
    # R2(x2, 0) is the top homogeneous part evaluated at (x2, 1)
    top = [r.coeff(a, d - a) for a in range(d + 1)]
    transversal = False
    if len(_utrim(list(top))) == d + 1:
        deriv = [a * top[a] for a in range(1, d + 1)]
        g = upoly_gcd(top, deriv)
        transversal = len(g) == 1
    return CurveSpec(r=r, d=d, adapted=AdaptedReport(xd, yd, transversal))


def infinity_chart(c: CurveSpec) -> Poly2:
    """``R2(x2, y2) = y2^d R(x2/y2, 1/y2)``, the curve in the chart ``Y != 0``.

    Returned as a :class:`Poly2` whose first variable is ``x2`` and second ``y2``.
    """
    if c.r.degree != c.d:
        raise ValueError(f"declared degree {c.d} does not match polynomial degree {c.r.degree}")
    # x^a y^b -> x2^a y2^(d - a - b)
    return Poly2({(a, c.d - a - b): coef for (a, b), coef in c.r.terms.items()})


@dataclass(frozen=True)
class ChartTransferReport:
    passed: bool
    residual: Poly2

    def to_json(self) -> dict:
        return {"pass": self.passed, "residual": format_poly(self.residual)}


def chart_partial_transfer(c: CurveSpec) -> ChartTransferReport:
    """Check ``y2^(d-1) * R_x(x2/y2, 1/y2) == d/dx2 R2(x2, y2)`` exactly."""
    d = c.d
    rx = partial(c.r, 1, 0)
    # y2^(d-1) * x^a y^b at (x2/y2, 1/y2) = x2^a y2^(d-1-a-b); deg R_x <= d-1
    lhs = Poly2({(a, d - 1 - a - b): coef for (a, b), coef in rx.terms.items()})
    rhs = partial(infinity_chart(c), 1, 0)
    residual = lhs - rhs
    return ChartTransferReport(residual.is_zero(), residual)
