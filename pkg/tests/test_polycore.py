from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import frac_pairs, polys
from jetdiff.polycore import (
    NEG_INF,
    CurveSpec,
    Poly2,
    PolySyntaxError,
    chart_partial_transfer,
    format_poly,
    infinity_chart,
    parse_poly,
    partial,
    upoly_gcd,
    validate_curve,
)


def test_parse_simple():
    p = parse_poly("x^4 + y^4 - 2")
    assert len(p) == 3
    assert p.degree == 4
    assert p.coeff(4, 0) == 1 and p.coeff(0, 0) == -2


def test_parse_zero_has_sentinel_degree():
    p = parse_poly("0")
    assert p.is_zero()
    assert p.degree is NEG_INF
    assert NEG_INF < 0 and not (NEG_INF > -10**9)


def test_parse_rational_coefficients():
    p = parse_poly("x^2*y - 1/2*y^3")
    assert len(p) == 2
    assert p.degree == 3
    assert p.coeff(0, 3) == Fraction(-1, 2)


def test_parse_leading_sign_and_bare_monomials():
    assert parse_poly("-x + y") == Poly2({(1, 0): -1, (0, 1): 1})
    assert parse_poly("3*x*y^2") == Poly2({(1, 2): 3})


@pytest.mark.parametrize("text,offset", [("x^^2", 2), ("x + + y", 4), ("1/0*x", 2), ("", 0), ("x $ y", 2)])
def test_syntax_errors_carry_offset(text, offset):
    with pytest.raises(PolySyntaxError) as err:
        parse_poly(text)
    assert err.value.offset == offset


def test_zero_denominator_message():
    with pytest.raises(PolySyntaxError, match="zero denominator"):
        parse_poly("1/0")


def test_format_is_graded_lex():
    p = parse_poly("1 + y^2 + x*y + x^2 - 3*x")
    assert format_poly(p) == "x^2 + x*y + y^2 - 3*x + 1"


@given(polys())
def test_parse_print_round_trip(p):
    assert parse_poly(format_poly(p)) == p
    text = format_poly(p)
    assert format_poly(parse_poly(text)) == text


@given(polys())
def test_json_round_trip(p):
    assert Poly2.from_json(p.to_json()) == p


def test_partial_examples():
    r = parse_poly("x^4 + y^4 - 2")
    assert partial(r, 1, 0) == parse_poly("4*x^3")
    assert partial(r, 1, 1).is_zero()
    assert partial(parse_poly("x^2*y"), 1, 1) == parse_poly("2*x")


@given(polys(), polys())
def test_product_rule(p, q):
    assert partial(p * q, 1, 0) == partial(p, 1, 0) * q + p * partial(q, 1, 0)
    assert partial(p * q, 0, 1) == partial(p, 0, 1) * q + p * partial(q, 0, 1)


@given(polys())
def test_mixed_partials_commute(p):
    assert partial(partial(p, 1, 0), 0, 1) == partial(partial(p, 0, 1), 1, 0)
    assert partial(p, 2, 1) == partial(partial(partial(p, 0, 1), 1, 0), 1, 0)


@given(polys(), st.integers(0, 3), st.integers(0, 3))
def test_partial_drops_degree(p, i, j):
    q = partial(p, i, j)
    if not q.is_zero():
        assert q.degree == p.degree - i - j or q.degree < p.degree - i - j


@given(polys(), polys(), frac_pairs())
def test_ring_operations_evaluate_pointwise(p, q, pt):
    x, y = pt
    assert (p + q)(x, y) == p(x, y) + q(x, y)
    assert (p * q)(x, y) == p(x, y) * q(x, y)
    assert (p - q)(x, y) == p(x, y) - q(x, y)
    assert (p ** 2)(x, y) == p(x, y) ** 2


def test_validate_fermat_quartic():
    c = validate_curve(parse_poly("x^4 + y^4 - 2"))
    assert c.d == 4
    assert c.adapted.monomial_xd_present and c.adapted.monomial_yd_present
    assert c.adapted.infinity_transversal
    assert c.adapted.ok


def test_validate_missing_y_power():
    c = validate_curve(parse_poly("x^2*y - 1"))
    assert c.d == 3
    assert not c.adapted.monomial_yd_present


def test_validate_homogeneous_quintic_is_transversal():
    assert validate_curve(parse_poly("x^5 + y^5")).adapted.infinity_transversal


def test_validate_detects_tangency_at_infinity():
    # top form (x + y)^2 has a double root
    c = validate_curve(parse_poly("x^2 + 2*x*y + y^2 + x - 1"))
    assert not c.adapted.infinity_transversal


def test_gcd_oracle():
    # (t - 1)(t + 2) and (t - 1)(t - 3)
    g = upoly_gcd([Fraction(-2), Fraction(1), Fraction(1)], [Fraction(3), Fraction(-4), Fraction(1)])
    assert g == [Fraction(-1), Fraction(1)]


@pytest.mark.parametrize("text,expected", [
    ("x^4 + y^4 - 2", "x^4 - 2*y^4 + 1"),
    ("x^5 + y^5", "x^5 + 1"),
    ("x^3 + y^3 + x", "x^3 + x*y^2 + 1"),
])
def test_infinity_chart(text, expected):
    # the chart polynomial prints in (x2, y2) as (x, y)
    assert infinity_chart(CurveSpec.from_text(text)) == parse_poly(expected)


def test_infinity_chart_degree_mismatch():
    c = CurveSpec.from_text("x^3 + y^3 - 1")
    bad = CurveSpec(c.r, 4, c.adapted)
    with pytest.raises(ValueError):
        infinity_chart(bad)


@given(st.sampled_from(["x^4 + y^4 - 2", "x^3 + y^3 + x", "x^5 + x*y^3 + y^5 - 7", "x^2 + y^2 - 1"]),
       frac_pairs())
def test_infinity_chart_reproduces_curve(text, pt):
    c = CurveSpec.from_text(text)
    r2 = infinity_chart(c)
    x2, y2 = pt
    if y2 == 0:
        return
    assert r2(x2, y2) * y2 ** (-c.d) == c.r(x2 / y2, 1 / y2)


@pytest.mark.parametrize("text", ["x^4 + y^4 - 2", "x^3 + y^3 + x", "x + y - 1", "x^6 + 3*x^2*y^3 + y^6 - x"])
def test_chart_partial_transfer(text):
    rep = chart_partial_transfer(CurveSpec.from_text(text))
    assert rep.passed
    assert rep.residual.is_zero()
