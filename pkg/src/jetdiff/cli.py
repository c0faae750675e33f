"""Command-line front end: ``jetdiff <command> [flags]``.

Exit codes: 0 when the command succeeds or a check passes, 1 when a check
fails, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .generator import faa_di_bruno, generate, trivialization_change
from .infinity import symbolic_transfer_check, verify_uniform_order
from .jetalgebra import Side, format_jet_monomial, render_expression
from .numeric_eval import (
    EvalConfig,
    EvaluationError,
    check_generator_agreement,
    check_trivialization_roundtrip,
    local_graph_series,
    probe_infinity_vanishing,
)
from .polycore import CurveSpec, PolySyntaxError, format_poly
from .sections import asymptotic_estimate, count_sections, enumerated_weight_sum

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _point(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("point must look like 'x,y'")
    try:
        return Fraction(parts[0].strip()), Fraction(parts[1].strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad rational point {text!r}") from None


def _curve(text: str) -> CurveSpec:
    try:
        return CurveSpec.from_text(text)
    except (PolySyntaxError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _tol(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jetdiff", description="Jet differentials on plane curves.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, order=True):
        if order:
            sp.add_argument("--order", "-k", type=_positive, required=True)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        return sp

    g = common(sub.add_parser("gen", help="generating jet differential"))
    g.add_argument("--side", choices=("left", "right", "both"), default="both")

    f = common(sub.add_parser("faa", help="chain-rule expansion of d^k R"))
    f.add_argument("--vars", type=int, choices=(1, 2), default=1)

    common(sub.add_parser("triv", help="y-jets in terms of x-jets"))

    i = common(sub.add_parser("infinity", help="order at infinity of every monomial"))
    i.add_argument("--degree", "-d", type=_positive, required=True)
    i.add_argument("--curve", type=_curve, help="also run the symbolic chart transfer on this curve")

    c = common(sub.add_parser("count", help="count sections"))
    c.add_argument("--weight", "-m", type=_nonneg, required=True)
    c.add_argument("--degree", "-d", type=_positive, required=True)
    c.add_argument("--breakdown", action="store_true")
    c.add_argument("--asymptotic", action="store_true")

    for name, helptext in (("eval", "two-sided agreement at a point"), ("roundtrip", "trivialization round trip")):
        e = common(sub.add_parser(name, help=helptext))
        e.add_argument("--curve", type=_curve, required=True)
        e.add_argument("--point", type=_point, required=True)
        e.add_argument("--mode", choices=("exact", "float"), default="exact")
        e.add_argument("--tol", type=_tol, default=1e-9)

    pr = common(sub.add_parser("probe", help="decay rate near the line at infinity"))
    pr.add_argument("--curve", type=_curve, required=True)
    pr.add_argument("--tol", type=_tol, default=1e-9)

    s = common(sub.add_parser("series", help="jets of the local graph"))
    s.add_argument("--curve", type=_curve, required=True)
    s.add_argument("--point", type=_point, required=True)
    s.add_argument("--side", choices=("left", "right"), default="right",
                   help="right: graph y = Y(x); left: graph x = X(y)")
    s.add_argument("--mode", choices=("exact", "float"), default="exact")
    return p


# ---------------------------------------------------------------------------
# commands

def _emit(args, payload, lines: Sequence[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)


def cmd_gen(args) -> int:
    g = generate(args.order)
    sides = ("left", "right") if args.side == "both" else (args.side,)
    payload = {"order": g.order, "sides": [g.side(s).to_json() for s in sides]}
    lines = []
    for n, s in enumerate(sides):
        if n:
            lines.append("=")
        lines.extend(render_expression(g.side(s)))
    _emit(args, payload, lines)
    return EXIT_OK


def _faa_lines(order: int, nvars: int) -> tuple[list, list]:
    rows, lines = [], []
    if nvars == 1:
        for t in faa_di_bruno(order, 1):
            mu = [0] * order
            for lam, m in t.multiplicities:
                mu[lam - 1] = m
            jet = format_jet_monomial(tuple(mu), "x")
            rows.append({"multiplicities": [list(p) for p in t.multiplicities], "coefficient": t.coefficient,
                         "dsym": [t.dsym_order, 0]})
            c = "" if t.coefficient == 1 else f"{t.coefficient}*"
            lines.append(f"+ {c}{jet}*R[{t.dsym_order},0]")
        return rows, lines
    for t in faa_di_bruno(order, 2):
        expanded = t.expand(2)
        terms = []
        for (xj, yj, dm), c in sorted(expanded.items(), key=lambda kv: (kv[0][2], kv[0][0], kv[0][1])):
            (i, j), _ = dm[0]
            jets = "*".join(s for s in (format_jet_monomial(xj, "x") if xj else "",
                                        format_jet_monomial(yj, "y") if yj else "") if s)
            terms.append({"x": list(xj), "y": list(yj), "dsym": [i, j], "c": int(c)})
            lines.append(f"+ {'' if c == 1 else f'{c}*'}{jets}*R[{i},{j}]")
        rows.append({"multiplicities": [list(p) for p in t.multiplicities], "coefficient": t.coefficient,
                     "terms": terms})
    return rows, lines


def cmd_faa(args) -> int:
    rows, lines = _faa_lines(args.order, args.vars)
    _emit(args, {"order": args.order, "vars": args.vars, "terms": rows}, lines)
    return EXIT_OK


def cmd_triv(args) -> int:
    t = trivialization_change(args.order)
    lines, comps = [], []
    for lam in range(1, t.order + 1):
        comp = t.component(lam)
        lines.append(f"{format_jet_monomial((0,) * (lam - 1) + (1,), 'y')} =")
        lines.extend("  " + line for line in render_expression(comp))
        comps.append({"lambda": lam, "expression": comp.to_json()})
    _emit(args, {"order": t.order, "components": comps}, lines)
    return EXIT_OK


def cmd_infinity(args) -> int:
    rep = verify_uniform_order(generate(args.order), args.degree)
    payload = rep.to_json()
    lines = [f"uniform order {rep.uniform_value}" if rep.uniform else "non-uniform orders"] + rep.render()
    ok = rep.uniform
    if args.curve is not None:
        if args.curve.d != args.degree:
            raise UsageError(f"--degree {args.degree} does not match the curve degree {args.curve.d}")
        chk = symbolic_transfer_check(args.curve, args.order)
        payload["transfer"] = chk.to_json()
        lines.append(f"transfer on {format_poly(args.curve.r)}: factor y2^{chk.factor}, "
                     f"valuation {chk.valuation} -> {'PASS' if chk.passed else 'FAIL'}")
        ok = ok and chk.passed
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_count(args) -> int:
    sc = count_sections(args.order, args.weight, args.degree, breakdown=args.breakdown)
    payload = sc.to_json()
    lines = [str(sc.total)]
    if sc.breakdown is not None:
        for comp, delta, dim in sc.breakdown:
            lines.append(f"  {comp.parts}  delta={delta}  dim={dim}")
    if args.asymptotic:
        if args.weight < 1:
            raise UsageError("--asymptotic needs --weight >= 1")
        model = asymptotic_estimate(args.order, args.weight, args.degree)
        exact = enumerated_weight_sum(args.order, args.weight) * args.degree ** 2
        gap = abs(exact - model) / exact
        payload["asymptotic"] = {"model": float(model), "enumerated": exact, "relative_gap": float(gap)}
        lines.append(f"model {float(model):.6g}  enumerated {exact}  relative gap {float(gap):.4%}")
    _emit(args, payload, lines)
    return EXIT_OK


def _report(args, rep) -> int:
    _emit(args, rep.to_json(), [rep.render()])
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_eval(args) -> int:
    cfg = EvalConfig(mode=args.mode, tol=args.tol)
    return _report(args, check_generator_agreement(args.order, args.curve, args.point, cfg))


def cmd_roundtrip(args) -> int:
    cfg = EvalConfig(mode=args.mode, tol=args.tol)
    return _report(args, check_trivialization_roundtrip(args.order, args.curve, args.point, cfg))


def cmd_probe(args) -> int:
    return _report(args, probe_infinity_vanishing(args.order, args.curve, EvalConfig(mode="float", tol=args.tol)))


def cmd_series(args) -> int:
    side = Side.X_SIDE if args.side == "left" else Side.Y_SIDE
    s = local_graph_series(args.curve, args.point, side, args.order, EvalConfig(mode=args.mode))
    payload = {"curve": format_poly(args.curve.r), "point": [str(v) for v in s.base], "side": args.side,
               "x": [str(v) for v in s.xjets], "y": [str(v) for v in s.yjets]}
    lines = [f"{'x' if k == 0 else format_jet_monomial((0,) * (k - 1) + (1,), 'x')} = {s.xjets[k]}    "
             f"{'y' if k == 0 else format_jet_monomial((0,) * (k - 1) + (1,), 'y')} = {s.yjets[k]}"
             for k in range(s.order + 1)]
    _emit(args, payload, lines)
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "faa": cmd_faa,
    "triv": cmd_triv,
    "infinity": cmd_infinity,
    "count": cmd_count,
    "eval": cmd_eval,
    "roundtrip": cmd_roundtrip,
    "probe": cmd_probe,
    "series": cmd_series,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (UsageError, EvaluationError, ValueError) as exc:
        print(f"jetdiff {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
