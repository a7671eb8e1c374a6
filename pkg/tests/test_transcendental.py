from fractions import Fraction as F
from math import factorial

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import encloses, mpf
from planarconst.errors import DomainError
from planarconst.exact import GRID, RatInterval
from planarconst.transcendental import (
    exp_enclosure,
    exp_partial_sum,
    exp_remainder_bracket,
    log_enclosure,
    log_interval,
    sqrt_enclosure,
    sqrt_interval,
)

# rationals strictly inside (-1, 1)
unit_open = st.builds(lambda k: F(k, 10**7), st.integers(-(10**7) + 1, 10**7 - 1))
# the log series has no argument reduction, so stay where u = (x-1)/(x+1) is moderate
positive = st.builds(lambda k: F(k, 10**6), st.integers(5 * 10**4, 20 * 10**6))
budgets = st.sampled_from([F(1, 10**6), F(1, 10**9), F(1, 10**13), F(1, 10**20)])


@st.composite
def unit_intervals(draw):
    a, b = draw(unit_open), draw(unit_open)
    return RatInterval(min(a, b), max(a, b))


# -- exp ----------------------------------------------------------------------------


def test_partial_sum_is_exact():
    x = F(-460123253, 10**10)
    assert exp_partial_sum(x, 6) == sum(x**i / factorial(i) for i in range(6))
    assert exp_partial_sum(x, 1) == 1


@settings(max_examples=300, deadline=None)
@given(unit_intervals(), st.integers(1, 14))
def test_exp_contains_true_values(x, k):
    enc, ev = exp_enclosure(x, k)
    assert encloses(enc, mpmath.exp(mpf(x.lo))) and encloses(enc, mpmath.exp(mpf(x.hi)))
    assert ev.function == "exp" and ev.degree == k and ev.domain == x and ev.result == enc


@settings(max_examples=300, deadline=None)
@given(st.one_of(unit_open.map(RatInterval.point), unit_intervals()), st.integers(1, 12))
def test_taylor_nesting_under_degree_increase(x, k):
    assert exp_enclosure(x, k + 8)[0].subset_of(exp_enclosure(x, k)[0])


@settings(max_examples=200, deadline=None)
@given(unit_open, st.integers(4, 14))
def test_exp_times_exp_of_negation_contains_one(x, k):
    assert 1 in exp_enclosure(x, k)[0] * exp_enclosure(-x, k)[0]


def test_exp_window_is_enforced():
    for bad in (F(1), F(-1), RatInterval(F(1, 2), F(3, 2))):
        with pytest.raises(DomainError):
            exp_enclosure(bad, 10)
    with pytest.raises(ValueError):
        exp_enclosure(F(1, 2), 0)


def test_remainder_bracket_for_negative_arguments():
    # exp(c) x^6/6! with c in (x, 0): the bracket is [(1 + x) x^6/6!, x^6/6!]
    x = F(-1, 20)
    rem = exp_remainder_bracket(RatInterval.point(x), 6)
    assert rem == RatInterval((1 + x) * x**6 / 720, x**6 / 720)


def test_published_negative_window_constants():
    bound = F(1, 20) ** 6 / factorial(6)
    assert bound < F("2.1701388889e-11")
    assert F("1.0850694444e-11") < bound / 2
    # six terms reach 1e-10 on (-0.05, 0), five do not
    assert F(1, 20) ** 6 / factorial(6) < F(1, 10**10) < F(1, 20) ** 5 / factorial(5)


def test_published_positive_window_constants():
    x = F(49, 100)
    assert 3 * x**12 / factorial(12) < F("0.11998784433e-11")
    assert F("0.39995948109e-12") < x**12 / factorial(12)
    assert 3 * x**11 / factorial(11) > F(1, 10**11) > 3 * x**12 / factorial(12)


def test_published_positive_lower_constant_fails_near_048():
    # The lower remainder constant is x^12/12! evaluated at 0.49, but the
    # remainder is smaller for x just above 0.48.
    x = mpmath.mpf("0.4801")
    remainder = mpmath.exp(x) - sum(x**i / mpmath.factorial(i) for i in range(12))
    assert remainder < mpf(F("0.39995948109e-12"))
    # at the argument that matters (A near 0.4897) the constant is still valid
    x = mpmath.mpf("0.4896")
    assert mpmath.exp(x) - sum(x**i / mpmath.factorial(i) for i in range(12)) > mpf(F("0.39995948109e-12"))


# -- log ----------------------------------------------------------------------------


@settings(max_examples=300, deadline=None)
@given(positive, budgets)
def test_log_contains_true_value_within_budget(x, budget):
    enc, ev = log_enclosure(x, budget)
    assert encloses(enc, mpmath.log(mpf(x)))
    assert enc.width <= budget + 2 * GRID
    assert ev.function == "log" and ev.degree % 2 == 1 and ev.expansion_point == (x - 1) / (x + 1)


@settings(max_examples=200, deadline=None)
@given(positive)
def test_log_nests_when_budget_shrinks(x):
    a = log_enclosure(x, F(1, 10**6))[0]
    b = log_enclosure(x, F(1, 10**12))[0]
    c = log_enclosure(x, F(1, 10**18))[0]
    assert c.subset_of(b) and b.subset_of(a)


@settings(max_examples=200, deadline=None)
@given(st.builds(lambda k: F(k, 10**6), st.integers(400000, 2700000)))
def test_exp_log_consistency(x):
    lg = log_enclosure(x, F(1, 10**15))[0]
    assert x in exp_enclosure(lg, 16)[0]


def test_log_examples_from_the_bounds():
    t_minus = F(6263716632, 10**10)
    assert log_enclosure(1 + t_minus)[0].subset_of(RatInterval(F("0.48635156016"), F("0.48635156029")))
    assert (F(3, 8) * log_enclosure(16)[0]).subset_of(RatInterval(F("1.03972077083"), F("1.03972077084")))


def test_log_interval_and_domain():
    iv, evs = log_interval(RatInterval(F(1, 2), F(3, 2)))
    assert len(evs) == 2 and iv.lo < 0 < iv.hi
    assert len(log_interval(RatInterval.point(F(2)))[1]) == 1
    for bad in (0, -1):
        with pytest.raises(DomainError):
            log_enclosure(bad)
    with pytest.raises(ValueError):
        log_enclosure(2, 0)
    assert log_enclosure(1)[0] == RatInterval(0, 0)


# -- sqrt ---------------------------------------------------------------------------


@settings(max_examples=300, deadline=None)
@given(st.one_of(positive, st.just(F(0)), st.just(F(4))), budgets)
def test_sqrt_self_check(x, budget):
    root, ev = sqrt_enclosure(x, budget)
    assert ev.check()
    assert root.lo**2 <= x <= root.hi**2
    assert root.width <= budget
    assert encloses(root, mpmath.sqrt(mpf(x)))


@settings(max_examples=100, deadline=None)
@given(positive)
def test_sqrt_nests_when_budget_shrinks(x):
    a = sqrt_enclosure(x, F(1, 10**6))[0]
    b = sqrt_enclosure(x, F(1, 10**12))[0]
    assert b.subset_of(a)


def test_sqrt_exact_squares_and_domain():
    assert sqrt_enclosure(F(9, 4))[0] == RatInterval.point(F(3, 2))
    iv, evs = sqrt_interval(RatInterval(F(2), F(3)))
    assert len(evs) == 2 and iv.lo**2 <= 2 and iv.hi**2 >= 3
    with pytest.raises(DomainError):
        sqrt_enclosure(-1)
    with pytest.raises(ValueError):
        sqrt_enclosure(2, 0)
