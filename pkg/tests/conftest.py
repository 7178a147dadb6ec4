import os
import random
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from knotreform.ring import LaurentQL, RatFn

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exponents = st.tuples(st.integers(-5, 5), st.integers(-5, 5))


@st.composite
def laurent(draw, max_terms=4, exps=exponents):
    terms = draw(st.dictionaries(exps, small_fracs, max_size=max_terms))
    return LaurentQL(terms)


@st.composite
def nonzero_laurent(draw, max_terms=3):
    p = draw(laurent(max_terms=max_terms))
    if not p:
        p = LaurentQL({draw(exponents): draw(st.integers(1, 4))})
    return p


@st.composite
def ratfn(draw):
    return RatFn(draw(laurent()), draw(nonzero_laurent()))


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_point(rng):
    """Random positive rational values for q^(1/2) and l^(1/2)."""
    return Fraction(rng.randint(2, 9), rng.randint(1, 7)), Fraction(rng.randint(2, 9), rng.randint(1, 7))


def random_laurent(rng, terms=3):
    return LaurentQL({(rng.randint(-2, 2), rng.randint(-2, 2)): rng.randint(-3, 3) for _ in range(terms)})


def random_value(rng, p_denominator=0.2):
    """A random invariant-like value; occasionally a genuine fraction."""
    num = random_laurent(rng)
    if rng.random() < p_denominator:
        return RatFn(num, LaurentQL({(0, 0): 1, (rng.choice([1, 2]), 0): rng.choice([-1, 1])}))
    return RatFn(num)


def random_table(rng, L, lmax):
    """Symbolic stand-in for a colored invariant table: independent random values."""
    from knotreform.links import InvariantTable
    from knotreform.reformulate import all_reptuples

    return InvariantTable(L, {reps: random_value(rng) for reps in all_reptuples(L, lmax)})


def random_table_specs(count=20, seed=7):
    """(seed, L, lmax) triples covering L <= 2, lmax <= 3."""
    shapes = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]
    rng = random.Random(seed)
    out = [(seed * 1000 + i, *shapes[i % len(shapes)]) for i in range(len(shapes))]
    while len(out) < count:
        L, lmax = rng.choice(shapes[:5])
        out.append((seed * 1000 + len(out), L, lmax))
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        status, label = results[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {label}")
