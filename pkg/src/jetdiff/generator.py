"""Generating jet differentials, Faa di Bruno expansions and trivialization changes."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .jetalgebra import (
    DPoly,
    DSym,
    JetExpression,
    JetPoly,
    Side,
    dsym,
    jet_var,
    mirror,
    parse_dsym_laurent,
    substitute_foreign_first_order,
    total_derivative,
)

__all__ = [
    "FaaTerm",
    "faa_di_bruno",
    "faa_polynomial",
    "repeated_derivative_oracle",
    "TrivializationMap",
    "trivialization_change",
    "GeneratorPair",
    "generate",
    "cancel_circulation_pairs",
    "golden_elimination_forms",
]


# ---------------------------------------------------------------------------
# Faa di Bruno

@dataclass(frozen=True)
class FaaTerm:
    """One partition block of ``d^k/dzeta^k R``.

    ``multiplicities`` is a tuple of ``(order, count)`` pairs with strictly
    increasing orders; ``coefficient`` is ``k! / prod((order!)^count count!)``.
    """

    multiplicities: tuple[tuple[int, int], ...]
    coefficient: int

    @property
    def order(self) -> int:
        return sum(lam * mu for lam, mu in self.multiplicities)

    @property
    def dsym_order(self) -> int:
        return sum(mu for _, mu in self.multiplicities)

    def expand(self, nvars: int = 2) -> JetPoly:
        """Expand the term as a polynomial in jets and ``D`` symbols.

        With ``nvars == 2`` every slot is assigned to ``x`` or ``y`` in all
        possible ways; with ``nvars == 1`` only ``x`` is used.
        """
        # each block of `count` slots at jet order lam contributes
        # (x^(lam) d_x + y^(lam) d_y)^count, expanded binomially
        partial_terms = [(JetPoly.const(self.coefficient), 0, 0)]
        for lam, mu in self.multiplicities:
            nxt = []
            for poly, a, b in partial_terms:
                for nx in range(mu, -1, -1):
                    ny = mu - nx
                    if nvars == 1 and ny:
                        continue
                    factor = JetPoly.const(math.comb(mu, nx))
                    if nx:
                        factor = factor * jet_var("x", lam) ** nx
                    if ny:
                        factor = factor * jet_var("y", lam) ** ny
                    nxt.append((poly * factor, a + nx, b + ny))
            partial_terms = nxt
        out = JetPoly()
        for poly, a, b in partial_terms:
            out = out + poly * dsym(a, b)
        return out


def _partitions(n: int, max_part: int | None = None):
    """Partitions of n as lists of parts, largest part first."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield []
        return
    for part in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - part, part):
            yield [part] + rest


def faa_di_bruno(kappa: int, vars: int = 1) -> list[FaaTerm]:
    """All terms of the order-``kappa`` chain rule, one per partition of ``kappa``.

    Terms are ordered by the number of slots (``R_x`` block first), then with
    the highest jet order first, matching the usual printed layout. The
    ``vars`` argument only affects :func:`faa_polynomial`; the partition
    structure is shared.
    """
    if kappa < 1:
        raise ValueError("order must be >= 1")
    if vars not in (1, 2):
        raise ValueError("vars must be 1 or 2")
    terms = []
    for parts in _partitions(kappa):
        counts: dict[int, int] = {}
        for p in parts:
            counts[p] = counts.get(p, 0) + 1
        mult = tuple(sorted(counts.items()))
        denom = 1
        for lam, mu in mult:
            denom *= math.factorial(lam) ** mu * math.factorial(mu)
        terms.append(FaaTerm(mult, math.factorial(kappa) // denom))
    terms.sort(key=lambda t: (t.dsym_order, tuple(-lam for lam, mu in reversed(t.multiplicities) for _ in range(mu))))
    return terms


def faa_polynomial(kappa: int, vars: int = 2) -> JetPoly:
    """``d^k/dzeta^k R`` summed over :func:`faa_di_bruno` terms."""
    out = JetPoly()
    for t in faa_di_bruno(kappa, vars):
        out = out + t.expand(vars)
    return out


def repeated_derivative_oracle(kappa: int, vars: int = 2) -> JetPoly:
    """Independent route: apply the total derivative ``kappa`` times to ``R``.

    ``R`` itself is not a symbol of the ring, so the recursion starts from
    its first derivative ``x' R_x + y' R_y``. For one variable the ``y``
    jets are dropped at every step.
    """
    cur = jet_var("x", 1) * dsym(1, 0)
    if vars == 2:
        cur = cur + jet_var("y", 1) * dsym(0, 1)
    for _ in range(kappa - 1):
        cur = cur.total_derivative()
        if vars == 1:
            cur = JetPoly({k: c for k, c in cur.items() if not k[1]})
    return cur


# ---------------------------------------------------------------------------
# trivialization change

@dataclass(frozen=True)
class TrivializationMap:
    """``y^(lam)`` written in the x-jets, for ``1 <= lam <= order``.

    Each component is a y-side :class:`JetExpression` (active letter ``x``,
    denominator ``R_y``).
    """

    order: int
    components: tuple[JetExpression, ...]

    def component(self, lam: int) -> JetExpression:
        return self.components[lam - 1]

    def polynomials(self, lam: int) -> dict[tuple, tuple[DPoly, int]]:
        """The ``P^lam_mu`` coefficients: ``y^(lam) = -x^(lam) R_x/R_y - sum x^mu P_mu``."""
        out = {}
        pure = (0,) * (lam - 1) + (1,)
        for mu, (num, p) in (-self.component(lam)).terms().items():
            if mu != pure:
                out[mu] = (num, p)
        return out

    def inverse(self) -> tuple[JetExpression, ...]:
        """The x-jets in terms of the y-jets: the mirrored components."""
        return tuple(mirror(c) for c in self.components)

    def apply(self, xjets: Mapping[int, object], dvals: Mapping) -> dict[int, object]:
        return {lam: c.evaluate(xjets, dvals) for lam, c in enumerate(self.components, start=1)}

    def apply_inverse(self, yjets: Mapping[int, object], dvals: Mapping) -> dict[int, object]:
        return {lam: c.evaluate(yjets, dvals) for lam, c in enumerate(self.inverse(), start=1)}


_memo_lock = threading.Lock()
_triv_memo: list[JetExpression] = []


def trivialization_change(kappa: int) -> TrivializationMap:
    """Components up to ``kappa`` by repeated differentiation of ``y' = -x' R_x/R_y``.

    Each step differentiates the previous component and substitutes the
    first-order relation for the single ``y'`` that appears.
    """
    if kappa < 1:
        raise ValueError("order must be >= 1")
    with _memo_lock:
        if not _triv_memo:
            _triv_memo.append(JetExpression(Side.Y_SIDE, -(jet_var("x", 1) * dsym(1, 0) * dsym(0, 1, -1))))
        while len(_triv_memo) < kappa:
            _triv_memo.append(substitute_foreign_first_order(total_derivative(_triv_memo[-1])))
        comps = tuple(_triv_memo[:kappa])
    return TrivializationMap(kappa, comps)


# ---------------------------------------------------------------------------
# generators

@dataclass(frozen=True)
class GeneratorPair:
    """Both sides of the order-``order`` identity ``left == right`` on the curve."""

    order: int
    left: JetExpression
    right: JetExpression

    def side(self, which: str) -> JetExpression:
        return self.left if which == "left" else self.right

    def is_antisymmetric(self) -> bool:
        return mirror(self.left) == -self.right

    def to_json(self) -> dict:
        return {"order": self.order, "left": self.left.to_json(), "right": self.right.to_json()}


def _circulation_image(dm: tuple, kappa: int, side: Side) -> tuple | None:
    """Monomial reached by moving ``(v')^kappa * dm`` across the identity and mirroring back.

    Returns None when the move would put a foreign denominator on either side.
    """
    den = tuple(side.denominator)
    other = tuple(side.other.denominator)
    d = dict(dm)
    if d.get(den, 0) + kappa < 0:
        return None
    swapped: dict = {}
    for (i, j), e in d.items():
        swapped[(j, i)] = swapped.get((j, i), 0) + e
    swapped[other] = swapped.get(other, 0) + kappa
    swapped[den] = swapped.get(den, 0) - kappa
    return tuple(sorted((s, e) for s, e in swapped.items() if e))


def cancel_circulation_pairs(e: JetExpression, kappa: int) -> JetExpression:
    """Drop pure ``(v')^kappa`` terms that cancel against their mirror images.

    Using ``y'/R_x = -x'/R_y`` a term ``U`` of the pure first-order block can
    be moved to the other side. If the moved term equals minus the mirror of
    ``U`` it annihilates its own counterpart, and both sides may drop it.
    A term is removed only when its whole orbit cancels exactly.
    """
    a = 1 if e.side is Side.X_SIDE else 0
    pure = (kappa,)
    block = {k[2]: c for k, c in e.poly.items() if k[a] == pure and not k[1 - a]}
    sign = -1 if kappa % 2 == 0 else 1  # required ratio c(image) / c(m)
    drop = set()
    for dm, c in block.items():
        if dm in drop:
            continue
        img = _circulation_image(dm, kappa, e.side)
        if img is None:
            continue
        if img == dm:
            if sign == 1:
                drop.add(dm)
        elif block.get(img) == sign * c:
            drop.update((dm, img))
    if not drop:
        return e
    keep = {k: c for k, c in e.poly.items() if not (k[a] == pure and not k[1 - a] and k[2] in drop)}
    return JetExpression(e.side, JetPoly(keep))


_gen_memo: dict[Side, list[JetExpression]] = {Side.X_SIDE: [], Side.Y_SIDE: []}


def _seed(side: Side) -> JetExpression:
    if side is Side.X_SIDE:
        return JetExpression(side, jet_var("y", 1) * dsym(1, 0, -1))
    return JetExpression(side, -(jet_var("x", 1) * dsym(0, 1, -1)))


def _side_chain(side: Side, order: int) -> JetExpression:
    with _memo_lock:
        chain = _gen_memo[side]
        if not chain:
            chain.append(_seed(side))
        while len(chain) < order:
            k = len(chain) + 1
            step = substitute_foreign_first_order(total_derivative(chain[-1]))
            chain.append(cancel_circulation_pairs(step, k))
        return chain[order - 1]


def generate(order: int) -> GeneratorPair:
    """The order-``order`` generating jet differential, both sides.

    The base is ``y'/R_x = -x'/R_y``. Each further order differentiates a
    side, eliminates the foreign first-order jet and cancels circulation
    pairs in the pure first-order block. Sides are built independently;
    their mirror antisymmetry is a check, not a construction.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    return GeneratorPair(order, _side_chain(Side.X_SIDE, order), _side_chain(Side.Y_SIDE, order))


# ---------------------------------------------------------------------------
# golden data from the elimination procedure (orders 2 and 3, x-side)

_ELIMINATION_ROWS: dict[int, dict[tuple, str]] = {
    2: {
        (0, 1): "1/R[1,0]",
        (2,): "-R[1,1]/R[1,0]^2 + R[0,1]*R[2,0]/R[1,0]^3",
    },
    3: {
        (0, 0, 1): "1/R[1,0]",
        (1, 1): "-3*R[1,1]/R[1,0]^2 + 3*R[0,1]*R[2,0]/R[1,0]^3",
        (3,): (
            "-6*R[0,1]*R[1,1]*R[2,0]/R[1,0]^4 + 3*R[0,1]^2*R[2,0]^2/R[1,0]^5"
            " + 3*R[0,1]*R[2,1]/R[1,0]^3 - R[0,1]^2*R[3,0]/R[1,0]^4"
        ),
    },
}


def _expression_from_rows(side: Side, rows: Mapping[tuple, str]) -> JetExpression:
    poly = JetPoly()
    letter = side.letter
    for mu, text in rows.items():
        jet = JetPoly.const(1)
        for k, e in enumerate(mu, start=1):
            if e:
                jet = jet * jet_var(letter, k) ** e
        poly = poly + jet * parse_dsym_laurent(text)
    return JetExpression(side, poly)


def golden_elimination_forms() -> dict[int, JetExpression]:
    """Left sides obtained by elimination and symmetrization, orders 2 and 3.

    Order 2 coincides with :func:`generate`; order 3 differs from it by a
    circulation move and agrees with it only on the curve.
    """
    return {k: _expression_from_rows(Side.X_SIDE, rows) for k, rows in _ELIMINATION_ROWS.items()}
