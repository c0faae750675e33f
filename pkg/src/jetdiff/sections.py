"""Counting global sections generated by the jet differentials."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .polycore import Poly2

__all__ = [
    "WeightedComposition",
    "enumerate_compositions",
    "composition_count",
    "dim_h0",
    "delta_degree",
    "SectionCount",
    "count_sections",
    "brute_force_quotient_dim",
    "harmonic",
    "asymptotic_estimate",
    "enumerated_weight_sum",
]


@dataclass(frozen=True)
class WeightedComposition:
    """``parts[k-1] = m_k`` with ``sum(k * m_k) == m``."""

    order: int
    weight: int
    parts: tuple[int, ...]

    def __post_init__(self):
        if len(self.parts) != self.order:
            raise ValueError("wrong number of parts")
        if any(p < 0 for p in self.parts):
            raise ValueError("parts must be nonnegative")
        if sum(k * p for k, p in enumerate(self.parts, start=1)) != self.weight:
            raise ValueError("parts do not sum to the weight")


def _compositions(kappa: int, m: int) -> Iterator[tuple[int, ...]]:
    # yields (m_1, ..., m_kappa), m_kappa descending first, then m_{kappa-1}, ...
    if kappa == 1:
        yield (m,)
        return
    for top in range(m // kappa, -1, -1):
        for rest in _compositions(kappa - 1, m - kappa * top):
            yield rest + (top,)


def enumerate_compositions(kappa: int, m: int) -> Iterator[WeightedComposition]:
    """Every ``(m_1, ..., m_kappa)`` with ``m_1 + 2 m_2 + ... = m``.

    Order is lexicographic descending on ``(m_kappa, ..., m_1)``.
    """
    if kappa < 1 or m < 0:
        raise ValueError("need kappa >= 1 and m >= 0")
    for parts in _compositions(kappa, m):
        yield WeightedComposition(kappa, m, parts)


def composition_count(kappa: int, m: int) -> int:
    """Number of weighted compositions, by dynamic programming over part sizes."""
    if m < 0:
        return 0
    table = [1] * (m + 1)
    for k in range(2, kappa + 1):
        for w in range(k, m + 1):
            table[w] += table[w - k]
    return table[m]


def _c2(n: int) -> int:
    return n * (n - 1) // 2 if n >= 2 else 0


def dim_h0(t: int, d: int) -> int:
    """``dim H^0(X, O(t))`` for a plane curve of degree ``d``.

    ``C(t+2, 2) - C(t-d+2, 2)``, with ``C(n, 2) = 0`` for ``n < 2``.
    Negative twists have no sections.
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    if t < 0:
        return 0
    return _c2(t + 2) - _c2(t - d + 2)


def delta_degree(c: WeightedComposition, d: int) -> int:
    """Coefficient degree budget ``sum m_k (d - k - 2)``."""
    return sum(p * (d - k - 2) for k, p in enumerate(c.parts, start=1))


@dataclass(frozen=True)
class SectionCount:
    order: int
    weight: int
    degree: int
    total: int
    breakdown: tuple[tuple[WeightedComposition, int, int], ...] | None = None

    def to_json(self) -> dict:
        out = {"kappa": self.order, "m": self.weight, "d": self.degree, "total": self.total}
        if self.breakdown is not None:
            out["compositions"] = [
                {"parts": list(c.parts), "delta": delta, "dim": dim} for c, delta, dim in self.breakdown
            ]
        return out


def count_sections(kappa: int, m: int, d: int, breakdown: bool = False) -> SectionCount:
    """Sum of ``dim_h0(delta(c), d)`` over all weighted compositions ``c``."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    total = 0
    rows = [] if breakdown else None
    for c in enumerate_compositions(kappa, m):
        delta = delta_degree(c, d)
        dim = dim_h0(delta, d)
        total += dim
        if rows is not None:
            rows.append((c, delta, dim))
    return SectionCount(kappa, m, d, total, tuple(rows) if rows is not None else None)


def _rank(rows: list[list[Fraction]]) -> int:
    """Rank over Q by fraction-exact Gaussian elimination."""
    rows = [r[:] for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        for i in range(rank + 1, len(rows)):
            f = rows[i][col]
            if f:
                f = f / pr[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
    return rank


def brute_force_quotient_dim(delta: int, d: int, r: Poly2, max_delta: int = 30) -> int:
    """``dim C_delta[x,y] / r * C_{delta-d}[x,y]`` by exact linear algebra."""
    if delta > max_delta:
        raise ValueError(f"delta {delta} exceeds the desk-scale cap {max_delta}")
    if r.degree != d:
        raise ValueError("declared degree does not match the polynomial")
    if delta < 0:
        return 0
    basis = [(a, t - a) for t in range(delta + 1) for a in range(t + 1)]
    index = {mono: n for n, mono in enumerate(basis)}
    rows = []
    for t in range(delta - d + 1):
        for a in range(t + 1):
            prod = r * Poly2({(a, t - a): 1})
            row = [Fraction(0)] * len(basis)
            for mono, c in prod.terms.items():
                row[index[mono]] = Fraction(c)
            rows.append(row)
    return len(basis) - _rank(rows)


def harmonic(kappa: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, kappa + 1)), Fraction(0))


def asymptotic_estimate(kappa: int, m: int, d: int) -> Fraction:
    """Leading-order model ``d^2 H_kappa m^kappa / (kappa! kappa!)``.

    Only the leading term is modelled; lower-order corrections in ``m``
    and ``d`` are ignored.
    """
    if kappa < 1 or m < 1:
        raise ValueError("need kappa >= 1 and m >= 1")
    f = math.factorial(kappa)
    return Fraction(d * d * m ** kappa, f * f) * harmonic(kappa)


def enumerated_weight_sum(kappa: int, m: int) -> int:
    """``sum (m_1 + ... + m_kappa)`` over all weighted compositions of ``m``."""
    return sum(sum(c.parts) for c in enumerate_compositions(kappa, m))
