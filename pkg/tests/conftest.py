from __future__ import annotations

from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from l2a.exactpoly import Poly

settings.register_profile("l2a", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("l2a")

coeffs = st.one_of(st.integers(-4, 4), st.fractions(min_value=-3, max_value=3, max_denominator=4))


def polys(nvars: int, max_deg: int = 2, max_terms: int = 4):
    exps = st.tuples(*[st.integers(0, max_deg) for _ in range(nvars)])
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda t: Poly(nvars, t))


def vecs(nvars: int, rank: int, max_deg: int = 2):
    return st.tuples(*[polys(nvars, max_deg, 3) for _ in range(rank)])


def as_fraction(c) -> Fraction:
    return Fraction(c)
