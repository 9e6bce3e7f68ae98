import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from quadspec import CoefficientMeasure, Problem

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


finite = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)
masses = st.floats(min_value=-2, max_value=2, allow_nan=False, allow_infinity=False)
nonneg = st.floats(min_value=0, max_value=2, allow_nan=False, allow_infinity=False)
# an atom of mass m puts eigenvalues near 1/m, so comb masses stay off tiny nonzero values
comb_masses = st.one_of(st.just(0.0), st.floats(0.05, 2), st.floats(-2, -0.05))
comb_nonneg = st.one_of(st.just(0.0), st.floats(0.05, 2))


@st.composite
def dirac_combs(draw, max_atoms=4, min_gap=0.2):
    n = draw(st.integers(1, max_atoms))
    gaps = draw(st.lists(st.floats(min_gap, 1.5), min_size=n, max_size=n))
    start = draw(st.floats(-3, 0))
    xs = np.round(start + np.cumsum(gaps), 10)
    w = draw(st.lists(comb_masses, min_size=n, max_size=n))
    v = draw(st.lists(comb_nonneg, min_size=n, max_size=n))
    return Problem.dirac(xs, w, v)


@st.composite
def mixed_measures(draw, signed=True):
    n = draw(st.integers(0, 3))
    xs = sorted(set(round(x, 6) for x in draw(st.lists(finite, min_size=n, max_size=n))))
    ms = draw(st.lists(masses if signed else nonneg, min_size=len(xs), max_size=len(xs)))
    k = draw(st.integers(0, 2))
    cuts = sorted(set(round(x, 6) for x in draw(st.lists(finite, min_size=2 * k, max_size=2 * k))))
    pieces = []
    for lo, hi in zip(cuts[0::2], cuts[1::2]):
        if lo < hi:
            pieces.append((lo, hi, draw(masses if signed else nonneg)))
    return CoefficientMeasure(tuple(zip(xs, ms)), tuple(pieces), signed=signed)


@st.composite
def mixed_problems(draw):
    return Problem(draw(mixed_measures(True)), draw(mixed_measures(False)))
