import dataclasses
import random
from math import factorial
from fractions import Fraction as F

import mpmath
import pytest

import published as PV
from oracles import T_MINUS, T_PLUS, derivative, encloses, value
from planarconst import bounds, formulas, functions
from planarconst import expr as E
from planarconst import polynomial as P
from planarconst.errors import (
    CertificateError,
    IndeterminateSignError,
    NoSignChangeError,
    PrecisionError,
)
from planarconst.exact import RatInterval

I = RatInterval(T_MINUS, T_PLUS)
WIDE = RatInterval(F(60, 100), F(65, 100))
MONOTONE_IDS = [fn for fn in formulas.all_ids() if fn not in ("r", "exp_neg")]


# -- poly_sign -----------------------------------------------------------------


@pytest.mark.parametrize("fn", sorted(formulas.PIECES) + ["dY_num_poly", "3t^2-1"])
def test_poly_sign_agrees_with_exact_values(fn):
    coeffs = E.as_polynomial(formulas.lookup(fn).body)
    ev = bounds.poly_sign(coeffs, WIDE)
    bounds.check_poly_sign(ev)
    rng = random.Random(fn)
    for _ in range(100):
        x = WIDE.lo + WIDE.width * F(rng.randrange(10**9 + 1), 10**9)
        assert (P.evaluate(coeffs, x) > 0) == (ev.sign == "positive")


def test_poly_sign_tiles_the_interval():
    ev = bounds.poly_sign(E.as_polynomial(formulas.dY_num), RatInterval(F(0), F(1)))
    assert ev.sign == "positive"
    assert ev.subdivision[0][0].lo == 0 and ev.subdivision[-1][0].hi == 1


def test_poly_sign_refuses_a_sign_change():
    with pytest.raises(IndeterminateSignError):
        bounds.poly_sign(P.poly([-1, 2]), RatInterval(F(0), F(1)))
    with pytest.raises(IndeterminateSignError):
        bounds.poly_sign(P.poly([F(1, 4), -1, 1]), RatInterval(F(0), F(1)), max_depth=20)
    with pytest.raises(ValueError):
        bounds.poly_sign(P.poly([1]), RatInterval.point(F(1)))


def test_poly_sign_tampering_is_caught():
    ev = bounds.poly_sign(P.poly([-1, 0, 3]), RatInterval(F(6, 10), F(7, 10)))
    with pytest.raises(CertificateError):
        bounds.check_poly_sign(dataclasses.replace(ev, sign="negative"))
    with pytest.raises(CertificateError):
        bounds.check_poly_sign(dataclasses.replace(ev, interval=RatInterval(F(5, 10), F(7, 10))))
    piece, enc = ev.subdivision[0]
    bad = ((piece, RatInterval(enc.lo, enc.hi + 1)),) + ev.subdivision[1:]
    with pytest.raises(CertificateError):
        bounds.check_poly_sign(dataclasses.replace(ev, subdivision=bad))


# -- monotonicity --------------------------------------------------------------


@pytest.mark.parametrize("fn", MONOTONE_IDS)
def test_direction_matches_numerical_derivative(fn):
    ev = bounds.certify_monotone(fn, I)
    bounds.check_monotone(ev)
    if ev.method == "constant":
        assert derivative(fn, T_MINUS) == 0
        return
    for t in (T_MINUS, (T_MINUS + T_PLUS) / 2, T_PLUS):
        d = derivative(fn, t)
        assert (d > 0) == (ev.direction == bounds.INCREASING), (fn, t, d)


@pytest.mark.parametrize("fn", sorted(formulas.FACTORED_DERIVATIVES))
def test_factorizations_expand_to_the_derivative(fn):
    bounds.expansion_guard(fn, formulas.FACTORED_DERIVATIVES[fn])


def test_expansion_guard_rejects_a_typo():
    fd = formulas.FACTORED_DERIVATIVES["B0_summand_3_numerator_factor"]
    with pytest.raises(CertificateError):
        bounds.expansion_guard("B0_summand_3_numerator_factor", dataclasses.replace(fd, constant=F(25)))
    fd = formulas.FACTORED_DERIVATIVES["Y"]
    with pytest.raises(CertificateError):
        bounds.expansion_guard("Y", dataclasses.replace(fd, exp_argument=None))


def test_quartic_derivative_factorization():
    # 12t(t - (2 + sqrt 3))(t - (2 - sqrt 3)) = 12t(t^2 - 4t + 1) is the first
    # derivative of the quartic, not the derivative of 12t^3 - 48t^2 + 12t.
    q = E.as_polynomial(formulas.lookup("B0_summand_2_quartic").body)
    factored = P.mul(P.poly([0, 12]), P.poly([1, -4, 1]))
    assert P.deriv(q) == factored
    assert P.deriv(P.deriv(q)) == P.poly([12, -96, 36]) != factored
    ev = bounds.certify_monotone("B0_summand_2_quartic", I)
    assert ev.direction == bounds.DECREASING


def test_Y_is_increasing_on_the_unit_interval():
    ev = bounds.poly_sign(E.as_polynomial(formulas.dY_num), RatInterval(F(0), F(1)))
    assert ev.sign == "positive"
    ev = bounds.certify_monotone("Y", RatInterval(F(1, 100), F(99, 100)))
    assert ev.method == "factored" and ev.direction == bounds.INCREASING


def test_monotone_replay_rejects_a_wrong_direction():
    for fn in ("xi", "B0"):
        ev = bounds.certify_monotone(fn, I)
        flipped = bounds.INCREASING if ev.direction == bounds.DECREASING else bounds.DECREASING
        with pytest.raises(CertificateError):
            bounds.check_monotone(dataclasses.replace(ev, direction=flipped))


def test_monotone_errors():
    with pytest.raises(ValueError):
        bounds.certify_monotone("r", I)
    with pytest.raises(ValueError):
        bounds.certify_monotone("xi", RatInterval.point(T_MINUS))
    with pytest.raises(IndeterminateSignError):
        # 3t^2 - 1 has a critical point at 0
        bounds.certify_monotone("3t^2-1", RatInterval(F(-1, 2), F(1, 2)), max_depth=12)


# -- uniform bounds ------------------------------------------------------------


@pytest.mark.parametrize("fn", MONOTONE_IDS)
def test_uniform_bound_contains_interior_values(fn):
    ev = bounds.certify_monotone(fn, I)
    ub = bounds.uniform_bound(fn, I, ev)
    naive, _ = functions.eval(fn, I)
    rng = random.Random(fn)
    for _ in range(50):
        x = T_MINUS + I.width * F(rng.randrange(10**6 + 1), 10**6)
        v = value(fn, x)
        assert encloses(ub.result, v) and encloses(naive, v)


def test_uniform_bound_requires_covering_evidence():
    ev = bounds.certify_monotone("xi", I)
    with pytest.raises(CertificateError):
        bounds.uniform_bound("xi", WIDE, ev)
    with pytest.raises(CertificateError):
        bounds.uniform_bound("A", I, ev)


@pytest.mark.parametrize(
    "fn, published",
    [(f"B0_summand_{i}", PV.B0_SUMMANDS[i - 1]) for i in (1, 2, 3, 5, 6)]
    + [(f"B2_summand_{i}", PV.B2_SUMMANDS[i - 1]) for i in range(1, 5)]
    + [(f"A_summand_{i}", PV.A_SUMMANDS[i - 1]) for i in range(1, 4)],
)
def test_summand_bounds_inside_published_intervals(fn, published):
    ev = bounds.certify_monotone(fn, I)
    ub = bounds.uniform_bound(fn, I, ev)
    assert PV.inside(ub.result, published)


@pytest.mark.parametrize("i", [4, 7])
def test_two_published_summand_intervals_are_too_tight(i):
    # the true value at one end of the bracket lies just outside the published interval
    lo, hi = PV.B0_SUMMANDS[i - 1]
    fn = f"B0_summand_{i}"
    extreme = max(abs(value(fn, T_MINUS)), abs(value(fn, T_PLUS)))
    assert extreme > mpmath.mpf(hi.numerator) / hi.denominator


def test_aggregate_signed_sum():
    a, b = RatInterval(F(1), F(2)), RatInterval(F(10), F(20))
    assert bounds.aggregate_signed_sum([(a, 1), (b, -1)]) == RatInterval(F(-19), F(-8))
    with pytest.raises(ValueError):
        bounds.aggregate_signed_sum([])
    with pytest.raises(ValueError):
        bounds.aggregate_signed_sum([(a, 2)])


# -- root bracketing -----------------------------------------------------------


def test_bracket_root_shrinks_to_the_goal():
    seed = RatInterval(F(62, 100), F(63, 100))
    ev = bounds.certify_monotone("Y", seed)
    rb = bounds.bracket_root("Y", 1, seed, ev, F(1, 10**12))
    assert rb.bracket.width <= F(1, 10**12)
    assert rb.left_eval.hi < 1 < rb.right_eval.lo
    assert rb.bracket.subset_of(RatInterval(*PV.T0_BRACKET))


def test_bracket_root_errors():
    seed = RatInterval(F(3, 10), F(4, 10))
    ev = bounds.certify_monotone("Y", RatInterval(F(3, 10), F(7, 10)))
    with pytest.raises(NoSignChangeError):
        bounds.bracket_root("Y", 1, seed, ev, F(1, 10**6))
    with pytest.raises(CertificateError):
        bounds.bracket_root("Y", 1, RatInterval(F(1, 10), F(7, 10)), ev, F(1, 10**6))
    with pytest.raises(ValueError):
        bounds.bracket_root("Y", 1, seed, ev, 0)
    coarse = functions.EvalSettings(exp_degree_negative=1)
    with pytest.raises(PrecisionError):
        bounds.bracket_root("Y", 1, I, bounds.certify_monotone("Y", I), F(1, 10**12), coarse)


def test_exp_degree_for_goal():
    assert bounds.exp_degree_for_goal(F(2, 10**10) / 8, 6) == 6
    assert bounds.exp_degree_for_goal(F(1, 10**9), 6) == 6
    assert bounds.exp_degree_for_goal(F(1, 10**12), 6) == 7
    assert bounds.exp_degree_for_goal(F(1, 10**12), 9) == 9
    k = bounds.exp_degree_for_goal(F(1, 10**30), 6)
    assert F(1, 20) ** k / factorial(k) <= F(1, 10**30) < F(1, 20) ** (k - 1) / factorial(k - 1)
