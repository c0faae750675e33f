"""Concrete checks at curve points: local graph series, two-sided agreement, round trips, probes."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .algebraic import AlgebraicNumber
from .generator import generate, golden_elimination_forms, trivialization_change
from .infinity import transfer_jet
from .jetalgebra import JetExpression, Side
from .polycore import CurveSpec, Poly2, format_poly, infinity_chart, partial

__all__ = [
    "EvalConfig",
    "SeriesPoint",
    "CheckReport",
    "EvaluationError",
    "local_graph_series",
    "compose_disc",
    "faa_residuals",
    "eval_jet_expression",
    "check_generator_agreement",
    "check_trivialization_roundtrip",
    "probe_infinity_vanishing",
    "finite_difference_jets",
    "rational_points",
]

EXACT = "exact"
FLOAT = "float"


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class EvalConfig:
    mode: str = EXACT
    tol: float = 1e-9
    abs_floor: float = 1e-12

    def __post_init__(self):
        if self.mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == FLOAT and not self.tol > 0:
            raise ValueError("tolerance must be positive in float mode")

    @property
    def exact(self) -> bool:
        return self.mode == EXACT

    def scalar(self, v):
        if self.exact:
            return v if isinstance(v, AlgebraicNumber) else Fraction(v)
        return complex(v)

    def close(self, a, b) -> bool:
        if self.exact:
            return a == b
        return abs(a - b) <= self.tol * max(abs(a), abs(b)) + self.abs_floor

    def residual(self, a, b) -> float:
        if self.exact and a == b:
            return 0.0
        return abs(complex(a - b))


@dataclass(frozen=True)
class SeriesPoint:
    """Jets ``x^(0..order)`` and ``y^(0..order)`` of a disc through ``base``."""

    curve: CurveSpec
    base: tuple
    order: int
    xjets: tuple
    yjets: tuple

    def jets(self, letter: str) -> dict[int, object]:
        seq = self.xjets if letter == "x" else self.yjets
        return {k: seq[k] for k in range(1, self.order + 1)}


class _Symbols(dict):
    """Lazy ``(i, j) -> R_ij(base)`` table."""

    def __init__(self, r: Poly2, base):
        super().__init__()
        self.r = r
        self.base = base

    def __missing__(self, key):
        i, j = key
        v = partial(self.r, i, j)(*self.base)
        self[key] = v
        return v


# ---------------------------------------------------------------------------
# truncated series

def _smul(a: list, b: list, n: int) -> list:
    out = [0] * n
    for i, ai in enumerate(a[:n]):
        if ai:
            for j, bj in enumerate(b[: n - i]):
                out[i + j] += ai * bj
    return out


def _compose(r: Poly2, xs: list, ys: list, n: int) -> list:
    """Series of ``r(x(t), y(t))`` truncated to ``n`` coefficients."""
    maxa = max((a for a, _ in r.terms), default=0)
    maxb = max((b for _, b in r.terms), default=0)
    one = [1] + [0] * (n - 1)
    xp, yp = [one], [one]
    for _ in range(maxa):
        xp.append(_smul(xp[-1], xs, n))
    for _ in range(maxb):
        yp.append(_smul(yp[-1], ys, n))
    out = [0] * n
    for (a, b), c in r.terms.items():
        for k, v in enumerate(_smul(xp[a], yp[b], n)):
            out[k] += c * v
    return out


def _exact_div(v, n: int):
    # keep ints exact; floats, complexes and field elements divide natively
    return Fraction(v, n) if isinstance(v, int) else v / n


def _on_curve(r: Poly2, base, cfg: EvalConfig) -> bool:
    v = r(*base)
    if cfg.exact:
        return v == 0
    scale = max(1.0, sum(abs(complex(c)) * abs(base[0]) ** a * abs(base[1]) ** b for (a, b), c in r.terms.items()))
    return abs(v) <= cfg.tol * scale


def local_graph_series(c: CurveSpec, base, side: Side, kappa: int, cfg: EvalConfig = EvalConfig()) -> SeriesPoint:
    """Taylor jets of the local graph through ``base``.

    For :attr:`Side.Y_SIDE` the graph is ``y = Y(x)`` (needs ``R_y != 0``)
    and the disc is ``t -> (x_p + t, Y(x_p + t))``; for :attr:`Side.X_SIDE`
    the roles swap. Coefficients are solved order by order: adding
    ``a_k t^k`` to the graph changes the ``t^k`` coefficient of
    ``R(disc)`` by ``a_k`` times the denominator partial.
    """
    base = tuple(cfg.scalar(v) for v in base)
    if not _on_curve(c.r, base, cfg):
        raise EvaluationError(f"point ({base[0]}, {base[1]}) is not on the curve")
    i, j = side.denominator
    den = partial(c.r, i, j)(*base)
    if (den == 0) if cfg.exact else abs(den) <= cfg.abs_floor:
        raise EvaluationError(f"R[{i},{j}] vanishes at the base point")
    n = kappa + 1
    line = [base[0] if side is Side.Y_SIDE else base[1], 1] + [0] * (n - 2) if n > 1 else [base[0]]
    graph = [base[1] if side is Side.Y_SIDE else base[0]] + [0] * (n - 1)
    for k in range(1, n):
        xs, ys = (line, graph) if side is Side.Y_SIDE else (graph, line)
        graph[k] = -_compose(c.r, xs, ys, k + 1)[k] / den
    fact = [math.factorial(k) for k in range(n)]
    line_j = tuple(v * f for v, f in zip(line[:n] + [0] * (n - len(line)), fact))
    graph_j = tuple(v * f for v, f in zip(graph, fact))
    xj, yj = (line_j, graph_j) if side is Side.Y_SIDE else (graph_j, line_j)
    return SeriesPoint(c, base, kappa, xj, yj)


def compose_disc(s: SeriesPoint, xjets: Sequence) -> tuple:
    """``y``-jets of ``t -> (x(t), Y(x(t)))`` for a graph series ``s`` (``y = Y(x)``).

    ``xjets[k-1] = x^(k)(0)``; the result lists ``y^(1..order)``. This is a
    plain series composition, independent of the trivialization formulas.
    """
    n = s.order + 1
    ycoef = [_exact_div(v, math.factorial(k)) for k, v in enumerate(s.yjets)]
    u = [0] + [_exact_div(xjets[k - 1], math.factorial(k)) for k in range(1, n)]
    out = [ycoef[0]] + [0] * (n - 1)
    power = [1] + [0] * (n - 1)
    for k in range(1, n):
        power = _smul(power, u, n)
        for t, v in enumerate(power):
            out[t] += ycoef[k] * v
    return tuple(out[k] * math.factorial(k) for k in range(1, n))


def faa_residuals(s: SeriesPoint) -> list:
    """``d^k/dt^k R(disc)`` at ``t = 0`` for ``k = 0..order``; all vanish on a valid point."""
    n = s.order + 1
    xs = [_exact_div(v, math.factorial(k)) for k, v in enumerate(s.xjets)]
    ys = [_exact_div(v, math.factorial(k)) for k, v in enumerate(s.yjets)]
    return [v * math.factorial(k) for k, v in enumerate(_compose(s.curve.r, xs, ys, n))]


def eval_jet_expression(e: JetExpression, s: SeriesPoint, cfg: EvalConfig = EvalConfig()):
    """Value of ``e`` at the jets of ``s`` with ``R_ij`` replaced by their values at ``s.base``."""
    syms = _Symbols(s.curve.r, s.base)
    den = syms[tuple(e.side.denominator)]
    if (den == 0) if cfg.exact else abs(den) <= cfg.abs_floor:
        raise EvaluationError(f"denominator {e.side.denominator} vanishes at {s.base}")
    need = max((len(k[1] if e.side is Side.X_SIDE else k[0]) for k in e.poly.terms), default=0)
    if need > s.order:
        raise EvaluationError(f"expression needs jets up to order {need}, have {s.order}")
    return e.evaluate(s.jets(e.side.letter), syms)


# ---------------------------------------------------------------------------
# reports

def _fmt_point(p) -> list[str]:
    return [str(v) for v in p]


@dataclass
class CheckReport:
    check: str
    kappa: int
    curve: str
    point: list | None
    mode: str
    passed: bool
    max_residual: float | None = None
    slope: float | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "kappa": self.kappa,
            "curve": self.curve,
            "point": self.point,
            "mode": self.mode,
            "pass": self.passed,
        }
        if self.slope is not None:
            out["slope"] = self.slope
        else:
            out["max_residual"] = self.max_residual
        if self.details:
            out["details"] = self.details
        return out

    def render(self) -> str:
        metric = f"slope={self.slope:.4f}" if self.slope is not None else f"max_residual={self.max_residual:.3g}"
        pt = "" if self.point is None else f" at ({', '.join(self.point)})"
        return f"{self.check} kappa={self.kappa} on {self.curve}{pt} [{self.mode}] {metric} -> {'PASS' if self.passed else 'FAIL'}"


def _graph_point(c: CurveSpec, base, kappa: int, cfg: EvalConfig) -> SeriesPoint:
    s = local_graph_series(c, base, Side.Y_SIDE, kappa, cfg)
    rx = partial(c.r, 1, 0)(*s.base)
    if (rx == 0) if cfg.exact else abs(rx) <= cfg.abs_floor:
        raise EvaluationError("both partials must be nonzero at the base point")
    return s


def check_generator_agreement(kappa: int, c: CurveSpec, base, cfg: EvalConfig = EvalConfig()) -> CheckReport:
    """Evaluate both sides of ``generate(kappa)`` on the same disc and compare.

    Orders 2 and 3 also compare the elimination forms with the recursion.
    """
    s = _graph_point(c, base, kappa, cfg)
    g = generate(kappa)
    left = eval_jet_expression(g.left, s, cfg)
    right = eval_jet_expression(g.right, s, cfg)
    residuals = [cfg.residual(left, right)]
    ok = cfg.close(left, right)
    details = {"left": str(left), "right": str(right)}
    golden = golden_elimination_forms()
    if kappa in golden:
        elim = eval_jet_expression(golden[kappa], s, cfg)
        residuals.append(cfg.residual(elim, left))
        ok = ok and cfg.close(elim, left)
        details["elimination"] = str(elim)
    return CheckReport("agreement", kappa, format_poly(c.r), _fmt_point(s.base), cfg.mode, ok, max(residuals),
                       details=details)


def check_trivialization_roundtrip(kappa: int, c: CurveSpec, base, cfg: EvalConfig = EvalConfig(),
                                   xjets: Sequence | None = None, seed: int = 0) -> CheckReport:
    """Map x-jets to y-jets with the trivialization change and back with its mirror.

    The intermediate y-jets are also compared with a direct series
    composition of the local graph, which does not use the formulas.
    """
    s = _graph_point(c, base, kappa, cfg)
    if xjets is None:
        rng = random.Random(seed)
        xjets = [Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5)) for _ in range(kappa)]
    xjets = [cfg.scalar(v) for v in xjets]
    if len(xjets) < kappa:
        raise EvaluationError(f"need {kappa} x-jets")
    t = trivialization_change(kappa)
    syms = _Symbols(c.r, s.base)
    xin = {k: xjets[k - 1] for k in range(1, kappa + 1)}
    ymid = t.apply(xin, syms)
    back = t.apply_inverse(ymid, syms)
    oracle = compose_disc(s, xjets)
    residuals = [cfg.residual(back[k], xin[k]) for k in xin]
    residuals += [cfg.residual(ymid[k], oracle[k - 1]) for k in xin]
    ok = all(cfg.close(back[k], xin[k]) for k in xin) and all(cfg.close(ymid[k], oracle[k - 1]) for k in xin)
    return CheckReport("roundtrip", kappa, format_poly(c.r), _fmt_point(s.base), cfg.mode, ok, max(residuals),
                       details={"x_jets": [str(v) for v in xjets], "y_jets": [str(ymid[k]) for k in xin]})


def _newton(f, df, z, steps: int = 50, tol: float = 1e-15):
    for _ in range(steps):
        dz = f(z) / df(z)
        z -= dz
        if abs(dz) <= tol * max(1.0, abs(z)):
            break
    return z


def probe_infinity_vanishing(kappa: int, c: CurveSpec, cfg: EvalConfig = EvalConfig(mode=FLOAT),
                             y2_range: tuple[float, float] = (1e-2, 1e-3), samples: int = 9,
                             root_index: int = 0) -> CheckReport:
    """Fit the decay rate of ``generate(kappa).left`` approaching the line at infinity.

    In chart ``U2`` the branch ``x2(y2)`` is followed by Newton from a root
    of ``R2(x2, 0)``. Along the disc ``y2(t) = y2 + t`` one has
    ``y^(k) = (-1)^k k! / y2^(k+1)``; the generator is evaluated at the
    affine point ``(x2/y2, 1/y2)`` and ``log|value|`` is fitted against
    ``log y2``. The expected slope is ``d - kappa - 2``.
    """
    if not c.adapted.infinity_transversal:
        raise EvaluationError("curve is not transversal to the line at infinity")
    d = c.d
    if d < kappa + 2:
        raise EvaluationError(f"degree {d} too small for order {kappa}")
    r2 = infinity_chart(c)
    dr2 = partial(r2, 1, 0)
    top = [complex(r2.coeff(a, 0)) for a in range(d, -1, -1)]
    roots = sorted(np.roots(top), key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    x2 = complex(roots[root_index])
    g = generate(kappa).left
    fr = {(a, b): complex(v) for (a, b), v in r2.terms.items()}
    fdr = {(a, b): complex(v) for (a, b), v in dr2.terms.items()}

    def ev(t, x, y):
        return sum(v * x ** a * y ** b for (a, b), v in t.items())

    ys = np.geomspace(y2_range[0], y2_range[1], samples)
    logs_y, logs_v = [], []
    for y2 in ys:
        x2 = _newton(lambda z: ev(fr, z, y2), lambda z: ev(fdr, z, y2), x2)
        point = (x2 / y2, 1 / y2)
        jets = {k: complex(transfer_jet(k).evaluate([y2, 1.0] + [0.0] * (k - 1))) for k in range(1, kappa + 1)}
        value = g.evaluate(jets, _float_partials(c.r, point, g))
        if value == 0:
            raise EvaluationError("generator vanished exactly; probe is degenerate")
        logs_y.append(math.log(y2))
        logs_v.append(math.log(abs(value)))
    slope = float(np.polyfit(logs_y, logs_v, 1)[0])
    expected = d - kappa - 2
    ok = abs(slope - expected) <= 0.2
    return CheckReport("probe", kappa, format_poly(c.r), None, FLOAT, ok, slope=slope,
                       details={"expected": expected, "root": f"{x2:.6g}", "y2_range": list(y2_range)})


def _float_partials(r: Poly2, point, e: JetExpression) -> dict:
    out = {}
    for (_, _, dm) in e.poly.terms:
        for s, _ in dm:
            if s not in out:
                p = partial(r, *s)
                out[s] = sum(complex(cf) * point[0] ** a * point[1] ** b for (a, b), cf in p.terms.items())
    return out


def finite_difference_jets(c: CurveSpec, base, h: float = 1e-4) -> tuple[float, float]:
    """``Y'`` and ``Y''`` of the graph ``y = Y(x)`` by central differences.

    ``Y(x_p +- h)`` is found by Newton in ``y`` seeded at ``y_p``.
    """
    r = c.r
    ry = partial(r, 0, 1)
    xp, yp = float(base[0]), float(base[1])
    fr = {k: float(v) for k, v in r.terms.items()}
    fry = {k: float(v) for k, v in ry.terms.items()}

    def Y(x):
        return _newton(lambda y: sum(v * x ** a * y ** b for (a, b), v in fr.items()),
                       lambda y: sum(v * x ** a * y ** b for (a, b), v in fry.items()), yp).real

    lo, hi = Y(xp - h), Y(xp + h)
    return (hi - lo) / (2 * h), (hi - 2 * yp + lo) / (h * h)


def rational_points(c: CurveSpec, bound: int = 6, limit: int = 4) -> list[tuple[Fraction, Fraction]]:
    """A few rational points found by solving for ``y`` over small rational ``x`` values.

    Only degree-one-in-``y`` cases or exact rational roots are returned;
    candidates are checked exactly.
    """
    found = []
    cands = sorted({Fraction(p, q) for q in range(1, bound + 1) for p in range(-bound * q, bound * q + 1)},
                   key=lambda f: (abs(f.numerator) + f.denominator, f))
    for x in cands:
        for y in cands:
            if c.r(x, y) == 0:
                found.append((x, y))
                if len(found) >= limit:
                    return found
    return found
