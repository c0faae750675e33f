from fractions import Fraction

from hypothesis import settings, strategies as st

from jetdiff.polycore import Poly2

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polys(draw, max_degree: int = 4, max_terms: int = 5) -> Poly2:
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        a = draw(st.integers(0, max_degree))
        b = draw(st.integers(0, max_degree - a))
        terms[(a, b)] = draw(small_fractions)
    return Poly2(terms)


def frac_pairs():
    return st.tuples(small_fractions, small_fractions)


__all__ = ["polys", "small_fractions", "frac_pairs", "Fraction"]
