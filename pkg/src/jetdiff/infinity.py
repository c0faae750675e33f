"""Vanishing orders of the generators on the line at infinity (chart ``U2``)."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .generator import GeneratorPair, generate
from .jetalgebra import DSym, JetExpression, Side, format_jet_monomial, jet_monomial_order
from .polycore import CurveSpec, Poly2, infinity_chart, partial

__all__ = [
    "TransferJet",
    "transfer_jet",
    "MalformedMonomialError",
    "monomial_infinity_order",
    "MonomialOrder",
    "InfinityReport",
    "verify_uniform_order",
    "TransferCheck",
    "symbolic_transfer_check",
]


# ---------------------------------------------------------------------------
# jets of y0 = 1/y2

@dataclass(frozen=True)
class TransferJet:
    """``y0^(order) = numerator / y2^(order+1)``.

    Numerator keys are exponent tuples ``(e0, e1, ..., e_order)`` on
    ``(y2, y2', ..., y2^(order))``; values are integers.
    """

    order: int
    numerator: dict

    @property
    def denominator_power(self) -> int:
        return self.order + 1

    def prime_counts(self) -> set[int]:
        return {sum(k * e for k, e in enumerate(mono)) for mono in self.numerator}

    def leading(self) -> tuple[tuple, int]:
        mono = (self.order - 1,) + (0,) * (self.order - 1) + (1,)
        return mono, self.numerator.get(mono, 0)

    def trailing(self) -> tuple[tuple, int]:
        mono = (0, self.order) + (0,) * (self.order - 1)
        return mono, self.numerator.get(mono, 0)

    def evaluate(self, y2jets) -> complex | Fraction:
        """Value given ``y2jets[k] = y2^(k)`` for ``k = 0..order``."""
        total = 0
        for mono, c in self.numerator.items():
            v = c
            for k, e in enumerate(mono):
                if e:
                    v = v * y2jets[k] ** e
            total += v
        return total / y2jets[0] ** (self.order + 1)

    def __str__(self):
        names = ["y2"] + [f"y2{chr(39) * k}" if k <= 3 else f"y2^({k})" for k in range(1, self.order + 1)]
        parts = []
        for mono, c in sorted(self.numerator.items(), key=lambda t: tuple(-e for e in reversed(t[0]))):
            body = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e)
            parts.append(f"{c:+d}*{body}")
        return f"({' '.join(parts)})/y2^{self.order + 1}"


def _pad(mono: tuple, n: int) -> tuple:
    return mono + (0,) * (n - len(mono))


@lru_cache(maxsize=None)
def _transfer_numerator(order: int) -> tuple:
    if order == 0:
        return (((0,), 1),)
    prev = dict(_transfer_numerator(order - 1))
    n = order + 1
    out: dict[tuple, int] = {}

    def add(mono, c):
        out[mono] = out.get(mono, 0) + c
        if not out[mono]:
            del out[mono]

    for mono, c in prev.items():
        mono = _pad(mono, n)
        # N' * y2
        for k, e in enumerate(mono):
            if e and k + 1 < n:
                m = list(mono)
                m[k] -= 1
                m[k + 1] += 1
                m[0] += 1
                add(tuple(m), c * e)
        # -order * y2' * N
        m = list(mono)
        m[1] += 1
        add(tuple(m), -order * c)
    return tuple(sorted(out.items()))


def transfer_jet(order: int) -> TransferJet:
    """Derivative of order ``order`` of ``y0 = 1/y2`` along a disc.

    Uses ``N_{k+1} = N_k' * y2 - (k+1) * y2' * N_k`` with ``N_0 = 1``.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    return TransferJet(order, dict(_transfer_numerator(order)))


# ---------------------------------------------------------------------------
# integer bookkeeping

class MalformedMonomialError(ValueError):
    pass


def monomial_infinity_order(mu: tuple, dm, d: int) -> int:
    """Order at infinity of ``y^mu * dm`` for a curve of degree ``d``.

    ``dm`` is a Laurent monomial in the ``D`` symbols given as pairs
    ``((i, j), e)``; ``R[1,0]`` must appear only in the denominator, once
    more than the number of numerator symbols, so the term reads
    ``(1/R_x) * prod(R_ij/R_x)``. Each jet ``y^(k)`` costs ``k+1``, the
    leading ``1/R_x`` gains ``d-1`` and each ratio gains ``i+j-1``.
    """
    jet_part = -sum((k + 1) * e for k, e in enumerate(mu, start=1))
    p = 0
    count = 0
    bonus = 0
    for s, e in dm:
        i, j = s
        if (i, j) == (1, 0):
            if e > 0:
                raise MalformedMonomialError("R[1,0] in a numerator")
            p = -e
            continue
        if e < 0:
            raise MalformedMonomialError(f"foreign denominator {DSym(i, j)}")
        count += e
        bonus += e * (i + j - 1)
    if p != count + 1:
        raise MalformedMonomialError(f"denominator power {p} does not match {count} numerator symbols")
    return jet_part + (d - 1) + bonus


@dataclass(frozen=True)
class MonomialOrder:
    jet: tuple
    dmono: tuple
    coefficient: Fraction
    order: int

    def to_json(self) -> dict:
        return {
            "jet": list(self.jet),
            "syms": [[i, j, e] for (i, j), e in self.dmono],
            "c": str(self.coefficient),
            "order": self.order,
        }


@dataclass(frozen=True)
class InfinityReport:
    order: int
    degree: int
    monomials: tuple[MonomialOrder, ...]
    uniform: bool
    uniform_value: int

    @property
    def vanishes(self) -> bool:
        return self.uniform and self.uniform_value >= 1

    def to_json(self) -> dict:
        return {
            "kappa": self.order,
            "d": self.degree,
            "uniform": self.uniform,
            "value": self.uniform_value,
            "vanishes": self.vanishes,
            "monomials": [m.to_json() for m in self.monomials],
        }

    def render(self) -> list[str]:
        lines = [f"kappa={self.order} d={self.degree} uniform={'yes' if self.uniform else 'no'} "
                 f"order={self.uniform_value} vanishes={'yes' if self.vanishes else 'no'}"]
        for m in self.monomials:
            syms = "*".join(f"R[{i},{j}]^{e}" if e != 1 else f"R[{i},{j}]" for (i, j), e in m.dmono)
            lines.append(f"  {m.order:>4}  {m.coefficient}  {format_jet_monomial(m.jet, 'y')}  {syms}")
        return lines


def _left_terms(e: JetExpression):
    if e.side is not Side.X_SIDE:
        raise ValueError("infinity analysis works on the left side")
    for (_, yj, dm), c in e.poly.items():
        yield yj, dm, c


def verify_uniform_order(g: GeneratorPair, d: int) -> InfinityReport:
    """Apply :func:`monomial_infinity_order` to every term of ``g.left``."""
    rows = []
    for mu, dm, c in _left_terms(g.left):
        rows.append(MonomialOrder(mu, dm, c, monomial_infinity_order(mu, dm, d)))
    rows.sort(key=lambda m: (jet_monomial_order(m.jet), m.dmono))
    target = d - g.order - 2
    uniform = all(m.order == target for m in rows)
    if not uniform:
        # report the smallest order seen so the caller sees what broke
        target = min(m.order for m in rows)
    return InfinityReport(g.order, d, tuple(rows), uniform, target)


# ---------------------------------------------------------------------------
# symbolic transfer on a concrete curve

class _Laurent:
    """Sparse polynomial in ``y2^{+-1}``, ``x2`` and ``y2', ..., y2^(k)``.

    Keys are ``(e_y2, e_x2, e_1, ..., e_k)`` with a fixed length.
    """

    __slots__ = ("t", "n")

    def __init__(self, t: dict, n: int):
        self.t = {k: c for k, c in t.items() if c}
        self.n = n

    @classmethod
    def one(cls, n):
        return cls({(0,) * n: Fraction(1)}, n)

    def __mul__(self, other: "_Laurent") -> "_Laurent":
        out: dict = {}
        for a, ca in self.t.items():
            for b, cb in other.t.items():
                k = tuple(x + y for x, y in zip(a, b))
                out[k] = out.get(k, 0) + ca * cb
        return _Laurent(out, self.n)

    def __pow__(self, e: int) -> "_Laurent":
        out = _Laurent.one(self.n)
        for _ in range(e):
            out = out * self
        return out

    def __add__(self, other: "_Laurent") -> "_Laurent":
        out = dict(self.t)
        for k, c in other.t.items():
            out[k] = out.get(k, 0) + c
        return _Laurent(out, self.n)

    def scale(self, c, shift: int = 0) -> "_Laurent":
        return _Laurent({(k[0] + shift,) + k[1:]: v * c for k, v in self.t.items()}, self.n)

    def valuation(self):
        return min((k[0] for k in self.t), default=None)

    def below(self, v: int) -> "_Laurent":
        return _Laurent({k: c for k, c in self.t.items() if k[0] < v}, self.n)


@dataclass(frozen=True)
class TransferCheck:
    """Outcome of :func:`symbolic_transfer_check`.

    ``factor`` is the exponent ``d - kappa - 2`` of ``y2`` that must divide
    the cleared expression; ``valuation`` is what was observed (``None``
    when the expression vanishes identically). ``residual_terms`` counts
    the monomials below the expected exponent.
    """

    order: int
    degree: int
    factor: int
    valuation: int | None
    residual_terms: int
    per_term: tuple = field(default=(), repr=False)

    @property
    def passed(self) -> bool:
        return self.residual_terms == 0

    @property
    def vanishes(self) -> bool:
        return self.passed and self.factor >= 1

    def to_json(self) -> dict:
        return {
            "check": "transfer",
            "kappa": self.order,
            "d": self.degree,
            "factor": self.factor,
            "valuation": self.valuation,
            "residual_terms": self.residual_terms,
            "vanishes": self.vanishes,
            "pass": self.passed,
        }


def _chart_symbol(r: Poly2, d: int, i: int, j: int, n: int) -> tuple[_Laurent, int]:
    """``R_ij(x2/y2, 1/y2) = y2^(i+j-d) * S_ij(x2, y2)``; returns ``(S_ij, i+j-d)``."""
    rij = partial(r, i, j)
    deg = d - i - j
    t = {}
    for (a, b), c in rij.terms.items():
        # x^a y^b -> x2^a y2^(-a-b) = y2^(i+j-d) * x2^a y2^(deg-a-b)
        key = (deg - a - b, a) + (0,) * (n - 2)
        t[key] = t.get(key, 0) + c
    return _Laurent(t, n), -deg


def symbolic_transfer_check(c: CurveSpec, kappa: int) -> TransferCheck:
    """Transfer ``generate(kappa).left`` into chart ``U2`` and read off the ``y2`` valuation.

    Every ``R_ij`` becomes ``y2^(i+j-d) S_ij(x2, y2)`` and every jet
    ``y^(k)`` becomes the :func:`transfer_jet` quotient. After multiplying
    by a power of ``S_10 = R2_x2`` the result is a Laurent polynomial in
    ``y2`` whose coefficients are polynomials in ``x2`` and the ``y2`` jets;
    it must be divisible by ``y2^(d-kappa-2)``. Per-term valuations are
    recorded for cross-checking the integer bookkeeping.
    """
    if not c.adapted.infinity_transversal:
        raise ValueError("curve is not transversal to the line at infinity")
    if kappa < 1 or kappa > 3:
        raise ValueError("symbolic transfer is limited to 1 <= kappa <= 3")
    d = c.d
    if d < kappa + 2:
        raise ValueError(f"degree {d} too small for order {kappa}: need d >= {kappa + 2}")
    n = 2 + kappa
    g = generate(kappa)
    cache: dict = {}

    def sym(i, j):
        if (i, j) not in cache:
            cache[(i, j)] = _chart_symbol(c.r, d, i, j, n)
        return cache[(i, j)]

    jets = {}
    for k in range(1, kappa + 1):
        tj = transfer_jet(k)
        t = {}
        for mono, cc in tj.numerator.items():
            mono = _pad(mono, k + 1)
            key = (mono[0] - (k + 1), 0) + mono[1:] + (0,) * (kappa - k)
            t[key] = Fraction(cc)
        jets[k] = _Laurent(t, n)

    terms = list(_left_terms(g.left))
    pmax = max(-dict(dm).get((1, 0), 0) for _, dm, _ in terms)
    s10, v10 = sym(1, 0)
    total = _Laurent({}, n)
    per_term = []
    for mu, dm, coeff in terms:
        acc = _Laurent.one(n)
        shift = 0
        for k, e in enumerate(mu, start=1):
            if e:
                acc = acc * jets[k] ** e
        p = 0
        for s, e in dm:
            if s == (1, 0):
                p = -e
                continue
            sp, v = sym(*s)
            acc = acc * sp ** e
            shift += v * e
        # 1/R10^p = y2^(p(d-1)) / S10^p ; clear with S10^pmax
        shift += p * (-v10)
        acc = (acc * s10 ** (pmax - p)).scale(coeff, shift)
        per_term.append((mu, dm, acc.valuation()))
        total = total + acc
    factor = d - kappa - 2
    return TransferCheck(kappa, d, factor, total.valuation(), len(total.below(factor).t), tuple(per_term))
