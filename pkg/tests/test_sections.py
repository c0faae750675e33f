import itertools
import math

import pytest
from hypothesis import given, strategies as st

from jetdiff.polycore import parse_poly
from jetdiff.sections import (
    WeightedComposition,
    asymptotic_estimate,
    brute_force_quotient_dim,
    composition_count,
    count_sections,
    delta_degree,
    dim_h0,
    enumerate_compositions,
    enumerated_weight_sum,
    harmonic,
)

SMOOTH = {
    1: "x + 2*y - 1",
    2: "x^2 + y^2 - 1",
    3: "x^3 + y^3 - 1",
    4: "x^4 + y^4 - 2",
    5: "x^5 + y^5 - 2",
    6: "x^6 + y^6 - 2",
}


def test_compositions_small():
    assert [c.parts for c in enumerate_compositions(2, 4)] == [(0, 2), (2, 1), (4, 0)]
    assert [c.parts for c in enumerate_compositions(1, 7)] == [(7,)]
    assert [c.parts for c in enumerate_compositions(3, 0)] == [(0, 0, 0)]


@given(st.integers(1, 5), st.integers(0, 25))
def test_compositions_exhaustive(kappa, m):
    got = [c.parts for c in enumerate_compositions(kappa, m)]
    brute = [p for p in itertools.product(*(range(m // k + 1) for k in range(1, kappa + 1)))
             if sum(k * v for k, v in enumerate(p, start=1)) == m]
    assert sorted(got) == sorted(brute)
    assert len(set(got)) == len(got)
    # descending lexicographic on (m_kappa, ..., m_1)
    keys = [tuple(reversed(p)) for p in got]
    assert keys == sorted(keys, reverse=True)


@given(st.integers(2, 6), st.integers(0, 60))
def test_composition_recurrence(kappa, m):
    n = composition_count(kappa, m)
    assert n == sum(1 for _ in enumerate_compositions(kappa, m))
    assert n == composition_count(kappa - 1, m) + (composition_count(kappa, m - kappa) if m >= kappa else 0)
    assert composition_count(kappa, m + 1) >= n


def test_composition_validation():
    with pytest.raises(ValueError):
        WeightedComposition(2, 3, (1, 0))
    with pytest.raises(ValueError):
        WeightedComposition(2, 3, (1,))


@pytest.mark.parametrize("d", range(1, 8))
def test_dim_h0_at_degree(d):
    assert dim_h0(d, d) == math.comb(d + 2, 2) - 1


def test_dim_h0_small():
    assert dim_h0(0, 3) == 1
    assert dim_h0(1, 4) == 3
    assert dim_h0(-2, 4) == 0


def test_delta_degree():
    assert delta_degree(WeightedComposition(1, 1, (1,)), 4) == 1
    assert delta_degree(WeightedComposition(3, 3, (0, 0, 1)), 6) == 1
    assert delta_degree(WeightedComposition(2, 4, (2, 1)), 5) == 5
    assert delta_degree(WeightedComposition(3, 3, (0, 0, 1)), 2) == -3


def test_count_sections_examples():
    assert count_sections(1, 1, 4).total == 3
    assert count_sections(1, 0, 9).total == 1
    sc = count_sections(2, 2, 5, breakdown=True)
    assert sc.total == 18
    assert sorted((c.parts, delta, dim) for c, delta, dim in sc.breakdown) == [((0, 1), 1, 3), ((2, 0), 4, 15)]
    assert sc.total == sum(dim for _, _, dim in sc.breakdown)


def test_negative_delta_contributes_nothing():
    sc = count_sections(3, 3, 3, breakdown=True)
    assert any(delta < 0 for _, delta, _ in sc.breakdown)
    assert all(dim == 0 for _, delta, dim in sc.breakdown if delta < 0)


def test_big_counts_do_not_overflow():
    assert count_sections(2, 1000, 10 ** 7).total > 2 ** 64


def test_brute_force_examples():
    r = parse_poly("x^4 + y^4 - 2")
    assert brute_force_quotient_dim(4, 4, r) == 14
    assert brute_force_quotient_dim(2, 4, r) == 6
    assert brute_force_quotient_dim(5, 4, r) == 18
    with pytest.raises(ValueError):
        brute_force_quotient_dim(40, 4, r)


@pytest.mark.parametrize("d", range(1, 7))
def test_dim_formula_matches_quotient_rank(d):
    r = parse_poly(SMOOTH[d])
    for delta in range(0, 9):
        assert dim_h0(delta, d) == brute_force_quotient_dim(delta, d, r), (delta, d)


def test_harmonic():
    assert harmonic(1) == 1
    assert harmonic(3) == pytest.approx(11 / 6)


def test_asymptotic_base_case():
    assert asymptotic_estimate(1, 10, 3) == 9 * 10


@pytest.mark.parametrize("kappa,m,bound", [(2, 300, 0.05), (3, 300, 0.05)])
def test_asymptotic_gap(kappa, m, bound):
    exact = enumerated_weight_sum(kappa, m)
    model = asymptotic_estimate(kappa, m, 1)
    assert abs(exact - model) / exact <= bound


@pytest.mark.parametrize("kappa", [2, 3])
def test_asymptotic_gap_shrinks_like_one_over_m(kappa):
    gaps = []
    for m in (60, 120, 240, 480):
        exact = enumerated_weight_sum(kappa, m)
        gaps.append(float(abs(exact - asymptotic_estimate(kappa, m, 1)) / exact))
    assert gaps == sorted(gaps, reverse=True)
    # doubling m roughly halves the gap
    for a, b in zip(gaps, gaps[1:]):
        assert 0.35 < b / a < 0.65


def test_section_count_json():
    js = count_sections(2, 2, 5, breakdown=True).to_json()
    assert js["total"] == 18 and js["kappa"] == 2 and len(js["compositions"]) == 2
