"""Formal jet expressions with derivative-symbol coefficients.

The coefficient ring is generated by free symbols ``D(i, j)`` standing for
the partial derivatives ``R_{x^i y^j}`` of an unspecified curve equation. Jet
variables ``x^(k)``, ``y^(k)`` are the derivatives of a holomorphic disc.

Two layers live here:

* :class:`JetPoly` -- the raw ring. Polynomial in both letters' jets and in
  the ``D`` symbols, with negative exponents allowed on ``D``. All calculus
  (total derivative, substitution, mirror) is done at this level.
* :class:`JetExpression` -- a :class:`JetPoly` tagged with a :class:`Side`.
  On the x-side (``R_x != 0``) the active letter is ``y`` and only
  ``D(1,0)`` may be inverted; the y-side mirrors this.
"""
from __future__ import annotations

import enum
import re
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

__all__ = [
    "DSym",
    "DPoly",
    "Side",
    "JetPoly",
    "JetExpression",
    "ForeignVariableError",
    "jet_weight",
    "total_derivative",
    "substitute_foreign_first_order",
    "mirror",
    "jet_var",
    "dsym",
    "format_jet_monomial",
    "jet_monomial_order",
    "parse_dsym_laurent",
    "first_order_relation",
]


class DSym(NamedTuple):
    """Symbol for ``R_{x^i y^j}``; ``i + j >= 1``."""

    i: int
    j: int

    @classmethod
    def of(cls, i: int, j: int) -> "DSym":
        if i < 0 or j < 0 or i + j < 1:
            raise ValueError(f"invalid derivative symbol D({i},{j})")
        return cls(i, j)

    def swapped(self) -> "DSym":
        return DSym(self.j, self.i)

    def __str__(self):
        return f"R[{self.i},{self.j}]"


RX = DSym(1, 0)
RY = DSym(0, 1)


class Side(enum.Enum):
    X_SIDE = "left"
    Y_SIDE = "right"

    @property
    def letter(self) -> str:
        """The letter whose jets are fiber coordinates on this side."""
        return "y" if self is Side.X_SIDE else "x"

    @property
    def foreign(self) -> str:
        return "x" if self is Side.X_SIDE else "y"

    @property
    def denominator(self) -> DSym:
        return RX if self is Side.X_SIDE else RY

    @property
    def other(self) -> "Side":
        return Side.Y_SIDE if self is Side.X_SIDE else Side.X_SIDE


class ForeignVariableError(ValueError):
    pass


# ---------------------------------------------------------------------------
# key helpers
#
# A term key is (xj, yj, dm):
#   xj, yj  exponent tuples of the jets x', x'', ... and y', y'', ... (trimmed)
#   dm      sorted tuple of ((i, j), e) with e != 0; e < 0 means a denominator

_ONE_KEY = ((), (), ())


def _trim(t) -> tuple:
    t = list(t)
    while t and t[-1] == 0:
        t.pop()
    return tuple(t)


def _jet_bump(t: tuple, k: int, delta: int) -> tuple:
    """Add ``delta`` to the exponent of the order-``k`` jet (k >= 1)."""
    t = list(t)
    if len(t) < k:
        t.extend([0] * (k - len(t)))
    t[k - 1] += delta
    return _trim(t)


def _jet_mul(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, e in enumerate(b):
        out[k] += e
    return tuple(out)


def _dm_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for s, e in b:
        n = d.get(s, 0) + e
        if n:
            d[s] = n
        else:
            d.pop(s, None)
    return tuple(sorted(d.items()))


def _dm_bump(dm: tuple, s, delta: int) -> tuple:
    return _dm_mul(dm, ((tuple(s), delta),))


def _dm_swap(dm: tuple) -> tuple:
    return tuple(sorted(((j, i), e) for (i, j), e in dm))


class JetPoly:
    """Element of ``Q[x-jets, y-jets, D(i,j), D(i,j)^-1]``.

    Immutable; arithmetic returns new objects. Zero coefficients are never
    stored, so structural equality is equality in the ring.
    """

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping | None = None, _trusted: bool = False):
        if _trusted:
            self._t = terms
        else:
            t = {}
            for k, c in (terms or {}).items():
                c = Fraction(c)
                if c:
                    t[k] = t.get(k, 0) + c
            self._t = {k: c for k, c in t.items() if c}
        self._hash = None

    @classmethod
    def const(cls, c) -> "JetPoly":
        c = Fraction(c)
        return cls({_ONE_KEY: c} if c else {}, _trusted=True)

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def __len__(self):
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = JetPoly.const(other)
        if not isinstance(other, JetPoly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    @staticmethod
    def _coerce(other):
        if isinstance(other, JetPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return JetPoly.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._t)
        for k, c in other._t.items():
            n = out.get(k, 0) + c
            if n:
                out[k] = n
            else:
                out.pop(k, None)
        return JetPoly(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return JetPoly({k: -c for k, c in self._t.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return JetPoly()
            return JetPoly({k: c * other for k, c in self._t.items()}, _trusted=True)
        if not isinstance(other, JetPoly):
            return NotImplemented
        out: dict = {}
        for (xa, ya, da), ca in self._t.items():
            for (xb, yb, db), cb in other._t.items():
                k = (_jet_mul(xa, xb), _jet_mul(ya, yb), _dm_mul(da, db))
                out[k] = out.get(k, 0) + ca * cb
        return JetPoly({k: c for k, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = JetPoly.const(1)
        for _ in range(n):
            result = result * self
        return result

    # --- structure queries -------------------------------------------------

    def max_jet_order(self, letter: str) -> int:
        idx = 0 if letter == "x" else 1
        return max((len(k[idx]) for k in self._t), default=0)

    def symbols(self) -> set:
        return {DSym(*s) for k in self._t for s, _ in k[2]}

    # --- calculus ----------------------------------------------------------

    def total_derivative(self) -> "JetPoly":
        """Formal ``d/dzeta``: jets shift up one order, ``D(i,j)`` follows the chain rule."""
        out: dict = {}

        def acc(k, c):
            n = out.get(k, 0) + c
            if n:
                out[k] = n
            else:
                out.pop(k, None)

        for (xj, yj, dm), c in self._t.items():
            for which, jets in ((0, xj), (1, yj)):
                for k0, e in enumerate(jets):
                    if not e:
                        continue
                    order = k0 + 1
                    nj = _jet_bump(_jet_bump(jets, order, -1), order + 1, 1)
                    key = (nj, yj, dm) if which == 0 else (xj, nj, dm)
                    acc(key, c * e)
            for (i, j), e in dm:
                base = _dm_bump(dm, (i, j), -1)
                # dD(i,j) = x' D(i+1,j) + y' D(i,j+1)
                acc((_jet_bump(xj, 1, 1), yj, _dm_bump(base, (i + 1, j), 1)), c * e)
                acc((xj, _jet_bump(yj, 1, 1), _dm_bump(base, (i, j + 1), 1)), c * e)
        return JetPoly(out, _trusted=True)

    def substitute_first_order(self, letter: str, value: "JetPoly") -> "JetPoly":
        """Replace every first-order jet of ``letter`` by ``value``.

        Raises :class:`ForeignVariableError` if a higher jet of that letter occurs.
        """
        idx = 0 if letter == "x" else 1
        powers = {0: JetPoly.const(1)}
        out = JetPoly()
        groups: dict[int, dict] = {}
        for key, c in self._t.items():
            jets = key[idx]
            if len(jets) > 1:
                raise ForeignVariableError(
                    f"{letter}-jet of order {len(jets)} cannot be eliminated by first-order substitution"
                )
            e = jets[0] if jets else 0
            stripped = (((), key[1], key[2]) if idx == 0 else (key[0], (), key[2]))
            groups.setdefault(e, {})[stripped] = c
        for e in sorted(groups):
            if e not in powers:
                p = powers[max(powers)]
                for n in range(max(powers) + 1, e + 1):
                    p = p * value
                    powers[n] = p
            out = out + JetPoly(groups[e], _trusted=True) * powers[e]
        return out

    def mirror(self) -> "JetPoly":
        """Exchange the letters ``x <-> y`` and map ``D(i,j) -> D(j,i)``."""
        return JetPoly({(yj, xj, _dm_swap(dm)): c for (xj, yj, dm), c in self._t.items()}, _trusted=True)

    # --- evaluation --------------------------------------------------------

    def evaluate(self, xjets: Mapping[int, object], yjets: Mapping[int, object], dvals: Mapping) -> object:
        """Numeric value given jet values (keyed by order) and symbol values."""
        total = 0
        for (xj, yj, dm), c in self._t.items():
            v = c
            for k0, e in enumerate(xj):
                if e:
                    v = v * xjets[k0 + 1] ** e
            for k0, e in enumerate(yj):
                if e:
                    v = v * yjets[k0 + 1] ** e
            for s, e in dm:
                val = dvals[s]
                v = v * (val**e if e > 0 else 1 / val ** (-e))
            total = total + v
        return total

    def __repr__(self):
        return f"JetPoly({len(self._t)} terms)"


def jet_var(letter: str, k: int) -> JetPoly:
    """The jet coordinate ``letter^(k)`` as a :class:`JetPoly`."""
    if k < 1:
        raise ValueError("jet order must be >= 1")
    j = _jet_bump((), k, 1)
    return JetPoly({((j, (), ()) if letter == "x" else ((), j, ())): Fraction(1)}, _trusted=True)


def dsym(i: int, j: int, power: int = 1) -> JetPoly:
    DSym.of(i, j)
    return JetPoly({((), (), (((i, j), power),)): Fraction(1)}, _trusted=True)


# ---------------------------------------------------------------------------
# public coefficient polynomial

class DPoly:
    """Polynomial in the ``D(i, j)`` symbols with rational coefficients.

    Keys are sorted tuples of ``(DSym, exponent)`` pairs, exponents positive.
    """

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping | None = None):
        self._t = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if not c:
                continue
            key = tuple(sorted((DSym(*s), int(e)) for s, e in mono))
            if any(e <= 0 for _, e in key):
                raise ValueError("DPoly exponents must be positive")
            self._t[key] = self._t.get(key, 0) + c
        self._t = {k: c for k, c in self._t.items() if c}

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __eq__(self, other):
        return isinstance(other, DPoly) and self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __len__(self):
        return len(self._t)

    def evaluate(self, dvals: Mapping) -> object:
        total = 0
        for mono, c in self._t.items():
            v = c
            for s, e in mono:
                v = v * dvals[s] ** e
            total = total + v
        return total

    def sorted_terms(self):
        return sorted(self._t.items(), key=lambda kv: _dmono_sort_key(kv[0]))

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for n, (mono, c) in enumerate(self.sorted_terms()):
            body = "*".join(str(s) if e == 1 else f"{s}^{e}" for s, e in mono)
            parts.append(_signed(c, body, n == 0))
        return "".join(parts)


def _dmono_sort_key(mono) -> tuple:
    # fewer symbols first, then by symbol order
    return (sum(abs(e) for _, e in mono), tuple((tuple(s), e) for s, e in mono))


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _signed(c: Fraction, body: str, first: bool) -> str:
    mag = abs(c)
    if body:
        text = body if mag == 1 else f"{_fmt_frac(mag)}*{body}"
    else:
        text = _fmt_frac(mag)
    if first:
        return text if c > 0 else f"-{text}"
    return f" + {text}" if c > 0 else f" - {text}"


def _prime_name(letter: str, k: int) -> str:
    return letter + "'" * k if k <= 3 else f"{letter}^({k})"


def format_jet_monomial(mu: tuple, letter: str) -> str:
    """Render ``(y')^2 y''`` style monomials, highest derivative first."""
    parts = []
    for k in range(len(mu), 0, -1):
        e = mu[k - 1]
        if not e:
            continue
        name = _prime_name(letter, k)
        parts.append(name if e == 1 else f"({name})^{e}")
    return "*".join(parts) if parts else "1"


def jet_weight(mu: Iterable[int]) -> int:
    """Sum of ``k * mu_k`` over jet orders ``k >= 1``."""
    return sum((k + 1) * e for k, e in enumerate(mu))


def jet_monomial_order(mu: tuple) -> tuple:
    """Canonical order: weight, then lexicographic on mu from the highest order down."""
    w = jet_weight(mu)
    padded = tuple(mu) + (0,) * (w - len(mu))
    return (w, tuple(-e for e in reversed(padded)))


# ---------------------------------------------------------------------------
# side-tagged expressions

class JetExpression:
    """A jet expression living on one side of the generator identity.

    Only the side's own denominator symbol may carry a negative exponent.
    Jets of the foreign letter are allowed transiently (first order only
    after a total derivative) and are flagged by :attr:`has_foreign`.
    """

    __slots__ = ("side", "poly")

    def __init__(self, side: Side, poly: JetPoly):
        self.side = side
        self.poly = poly
        den = tuple(side.denominator)
        for (_, _, dm) in poly._t:
            for s, e in dm:
                if e < 0 and s != den:
                    raise ValueError(f"denominator {DSym(*s)} not allowed on side {side.value}")

    @classmethod
    def from_terms(cls, side: Side, terms: Mapping[tuple, tuple]) -> "JetExpression":
        """Build from ``{jet monomial: (DPoly numerator, denominator power)}``."""
        den = tuple(side.denominator)
        raw = {}
        for mu, (num, p) in terms.items():
            mu = _trim(mu)
            for mono, c in num.terms.items():
                dm = _dm_mul(tuple((tuple(s), e) for s, e in mono), ((den, -p),) if p else ())
                key = ((), mu, dm) if side is Side.X_SIDE else (mu, (), dm)
                raw[key] = raw.get(key, 0) + c
        return cls(side, JetPoly(raw))

    @property
    def has_foreign(self) -> bool:
        idx = 0 if self.side is Side.X_SIDE else 1
        return any(k[idx] for k in self.poly._t)

    def _active_idx(self) -> int:
        return 1 if self.side is Side.X_SIDE else 0

    def terms(self) -> dict:
        """``{jet monomial mu: (DPoly numerator, denominator power)}``.

        The power of the side's denominator is the smallest that clears
        every term of that jet monomial; the numerator keeps the rest.
        """
        if self.has_foreign:
            raise ForeignVariableError("expression still carries foreign jets")
        den = tuple(self.side.denominator)
        a = self._active_idx()
        grouped: dict[tuple, dict] = {}
        for key, c in self.poly._t.items():
            grouped.setdefault(key[a], {})[key[2]] = c
        out = {}
        for mu, monos in grouped.items():
            p = max((-dict(dm).get(den, 0) for dm in monos), default=0)
            p = max(p, 0)
            num = {}
            for dm, c in monos.items():
                shifted = _dm_mul(dm, ((den, p),)) if p else dm
                num[tuple((DSym(*s), e) for s, e in shifted)] = c
            out[mu] = (DPoly(num), p)
        return out

    def sorted_jet_monomials(self) -> list[tuple]:
        a = self._active_idx()
        return sorted({k[a] for k in self.poly._t}, key=jet_monomial_order)

    def coefficient(self, mu: tuple) -> "JetPoly":
        """The ``D``-part multiplying jet monomial ``mu`` (as a Laurent :class:`JetPoly`)."""
        a = self._active_idx()
        mu = _trim(mu)
        return JetPoly({((), (), k[2]): c for k, c in self.poly._t.items() if k[a] == mu and not k[1 - a]},
                       _trusted=True)

    def __eq__(self, other):
        if not isinstance(other, JetExpression):
            return NotImplemented
        return self.side is other.side and self.poly == other.poly

    def __hash__(self):
        return hash((self.side, self.poly))

    def __neg__(self):
        return JetExpression(self.side, -self.poly)

    def __add__(self, other):
        if not isinstance(other, JetExpression) or other.side is not self.side:
            return NotImplemented
        return JetExpression(self.side, self.poly + other.poly)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, JetExpression):
            if other.side is not self.side:
                return NotImplemented
            return JetExpression(self.side, self.poly * other.poly)
        if isinstance(other, (int, Fraction)):
            return JetExpression(self.side, self.poly * other)
        return NotImplemented

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def normalize(self) -> "JetExpression":
        # terms are kept canonical at construction; this is the identity
        return self

    def evaluate(self, jets: Mapping[int, object], dvals: Mapping, foreign: Mapping[int, object] | None = None):
        """Value at concrete active-letter jets and symbol values."""
        foreign = foreign or {}
        if self.side is Side.X_SIDE:
            return self.poly.evaluate(foreign, jets, dvals)
        return self.poly.evaluate(jets, foreign, dvals)

    def render(self) -> list[str]:
        return render_expression(self)

    def __str__(self):
        return "\n".join(self.render())

    def __repr__(self):
        return f"JetExpression({self.side.value}, {len(self.poly)} terms)"

    def to_json(self) -> dict:
        rows = []
        terms = self.terms()
        for mu in self.sorted_jet_monomials():
            num, p = terms[mu]
            rows.append({
                "jet": list(mu),
                "denom_power": p,
                "numerator": [
                    {"c": _fmt_frac(c), "syms": [[s.i, s.j, e] for s, e in mono]}
                    for mono, c in num.sorted_terms()
                ],
            })
        return {"side": self.side.value, "letter": self.side.letter, "terms": rows}


def _ratio_factor_text(mono: tuple, den: tuple) -> tuple[int, str]:
    """Split a Laurent monomial into ``den^k * prod(D/den)`` and render the product."""
    d = dict(mono)
    den_e = d.pop(den, 0)
    rest = sorted(d.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0]))
    k = den_e + sum(e for _, e in rest)
    dname = str(DSym(*den))
    parts = []
    for s, e in rest:
        f = f"{DSym(*s)}/{dname}"
        if len(rest) > 0 and (s == (0, 1) or s == (1, 0)):
            f = f"({f})"
        if e == 1:
            parts.append(f)
        elif e > 1:
            parts.append(f"({DSym(*s)}/{dname})^{e}")
        else:
            parts.append(f"({dname}/{DSym(*s)})^{-e}")
    return k, "*".join(parts)


def render_expression(e: JetExpression) -> list[str]:
    """One line per jet monomial, coefficient bracketed in ratio form.

    A line reads ``+ y''*(y')^2/R[1,0] * [ ... ]`` where each bracketed
    monomial is a product of ratios over the side's denominator.
    """
    den = tuple(e.side.denominator)
    dname = str(e.side.denominator)
    letter = e.side.letter
    a = e._active_idx()
    lines = []
    grouped: dict[tuple, list] = {}
    for key, c in e.poly._t.items():
        grouped.setdefault(key[a], []).append((key[2], c, key[1 - a]))
    for mu in e.sorted_jet_monomials():
        entries = grouped[mu]
        by_k: dict[int, list] = {}
        for dm, c, foreign in entries:
            k, txt = _ratio_factor_text(dm, den)
            if foreign:
                txt = "*".join(filter(None, [format_jet_monomial(foreign, e.side.foreign), txt]))
            by_k.setdefault(k, []).append((txt, c))
        jm = format_jet_monomial(mu, letter)
        for k in sorted(by_k, reverse=True):
            items = sorted(by_k[k], key=lambda t: (t[0].count("*"), t[0]))
            prefix = jm if k == 0 else (f"{jm}/{dname}" if k == -1 else f"{jm}*{dname}^{k}")
            if len(items) == 1 and not items[0][0]:
                c = items[0][1]
                lines.append(("- " if c < 0 else "+ ") + (prefix if abs(c) == 1 else f"{_fmt_frac(abs(c))}*{prefix}"))
                continue
            inner = "".join(_signed(c, txt, n == 0) for n, (txt, c) in enumerate(items))
            lines.append(f"+ {prefix} * [ {inner} ]")
    return lines or ["0"]


# ---------------------------------------------------------------------------
# module-level operations

def total_derivative(e: JetExpression) -> JetExpression:
    """Formal derivative along the disc. The result may carry foreign first-order jets."""
    return JetExpression(e.side, e.poly.total_derivative())


def first_order_relation(side: Side) -> JetPoly:
    """The foreign first-order jet written on ``side``.

    On the x-side ``x' = -y' D(0,1)/D(1,0)``; the y-side mirrors it.
    """
    if side is Side.X_SIDE:
        return -(jet_var("y", 1) * dsym(0, 1) * dsym(1, 0, -1))
    return -(jet_var("x", 1) * dsym(1, 0) * dsym(0, 1, -1))


def substitute_foreign_first_order(e: JetExpression) -> JetExpression:
    """Eliminate the foreign first-order jet using ``x' R_x + y' R_y = 0``."""
    poly = e.poly.substitute_first_order(e.side.foreign, first_order_relation(e.side))
    return JetExpression(e.side, poly)


def mirror(e: JetExpression) -> JetExpression:
    """Swap ``x <-> y`` everywhere, moving the expression to the other side."""
    return JetExpression(e.side.other, e.poly.mirror())


_DTERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*((?:[*/]?\s*R\[\d+,\d+\](?:\^\d+)?\s*)*)")
_DFACTOR = re.compile(r"([*/]?)\s*R\[(\d+),(\d+)\](?:\^(\d+))?")


def parse_dsym_laurent(text: str) -> JetPoly:
    """Parse ``"-6*R[0,1]*R[2,0]/R[1,0]^4 + R[1,2]/R[1,0]^2"`` into a :class:`JetPoly`.

    Only products and quotients of symbols with a rational coefficient are
    understood; this is meant for transcribing fixed tables.
    """
    out = JetPoly()
    pos = 0
    text = text.strip()
    first = True
    while pos < len(text):
        m = _DTERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse symbol expression at {pos}: {text[pos:]!r}")
        sign, coeff, factors = m.groups()
        if not first and not sign:
            raise ValueError(f"missing sign at {pos}")
        first = False
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        dm: tuple = ()
        for fm in _DFACTOR.finditer(factors):
            op, i, j, e = fm.groups()
            e = int(e) if e else 1
            dm = _dm_mul(dm, (((int(i), int(j)), -e if op == "/" else e),))
        out = out + JetPoly({((), (), dm): c})
        pos = m.end()
    return out
