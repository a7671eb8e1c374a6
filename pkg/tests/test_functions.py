from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import published as PV
from oracles import T_MINUS, T_PLUS, encloses, value
from planarconst import formulas, functions
from planarconst.errors import DomainError, PoleError
from planarconst.exact import RatInterval, exact_decimal
from planarconst.transcendental import exp_partial_sum

DEN = 10**7


@st.composite
def small_intervals(draw):
    """Subinterval of [0.4, 0.9] of width at most 1e-3, plus a point inside it."""
    lo = draw(st.integers(4 * DEN // 10, 9 * DEN // 10 - DEN // 1000))
    hi = lo + draw(st.integers(0, DEN // 1000))
    k = draw(st.integers(0, 1000))
    x = RatInterval(F(lo, DEN), F(hi, DEN))
    return x, x.lo + x.width * F(k, 1000)


def check_soundness(fn, x, p):
    truth = value(fn, p)
    enc, trace = functions.eval(fn, x)
    assert encloses(enc, truth), (fn, x, p)
    assert trace.result == enc and trace.argument == x
    point, _ = functions.eval(fn, p)
    assert encloses(point, truth), (fn, p)


# One drawn sample is checked against every id, so each id sees 500 points.
@settings(max_examples=500, deadline=None)
@given(sample=small_intervals())
def test_interval_extension_is_sound(sample):
    x, p = sample
    for fn in formulas.all_ids():
        check_soundness(fn, x, p)


def test_every_id_is_reachable():
    ids = formulas.all_ids()
    assert len(ids) == len(set(ids)) == 39
    for fn in ids:
        assert formulas.lookup(fn).name == fn
    with pytest.raises(KeyError):
        formulas.lookup("gamma")


def test_pole_is_reported():
    with pytest.raises(PoleError) as info:
        functions.eval("Y", 1)
    assert "t" in info.value.factor
    with pytest.raises(PoleError):
        functions.eval("xi", RatInterval(F(-1, 10), F(1, 10)))
    with pytest.raises(DomainError):
        functions.eval("B0_summand_5", F(-1, 2))


def test_bindings_replace_named_subtrees():
    a = RatInterval(F("0.4896896729"), F("0.4896896732"))
    enc, trace = functions.eval("r", formulas.T_CENTER, bindings={"A": a})
    assert trace.bindings == {"A": a}
    assert any(step.op == "bound:A" for step in trace.children)
    assert encloses(enc, value("r", formulas.T_CENTER))


@pytest.mark.parametrize("fn, side", sorted(PV.H_WINDOWS))
def test_h_pointwise_windows(fn, side):
    t = T_MINUS if side == "minus" else T_PLUS
    enc, _ = functions.eval(fn, t)
    assert PV.inside(enc, PV.H_WINDOWS[fn, side])


def test_Y_at_the_bracket_ends():
    left, right = functions.eval_Y_certificate_points()
    assert left.hi < PV.Y_LEFT_MAX and right.lo > PV.Y_RIGHT_MIN
    assert encloses(left, value("Y", T_MINUS)) and encloses(right, value("Y", T_PLUS))


def test_Y_chains_are_exact():
    # -1 + h1_bound * (remainder_bound + P6(h2_bound)), with P6 the degree-5 Taylor polynomial
    left = -1 + F("2.0941746326") * (F("2.1701388889e-11") + exp_partial_sum(F("-0.0460123253"), 6))
    right = -1 + F("2.0941746334") * (F("1.0850694444e-11") + exp_partial_sum(F("-0.0460123254"), 6))
    assert left == PV.Y_CHAIN_LEFT
    assert right == PV.Y_CHAIN_RIGHT
    assert left < PV.Y_LEFT_MAX and right > PV.Y_RIGHT_MIN


@pytest.mark.parametrize("fn, side, text", PV.POLY_40_DIGITS)
def test_exact_polynomial_values(fn, side, text):
    t = T_MINUS if side == "minus" else T_PLUS
    places = len(text.split(".")[1])
    assert exact_decimal(functions.exact_poly_at(fn, t), places) == text


def test_exact_poly_rejects_non_polynomials():
    with pytest.raises(ValueError):
        functions.exact_poly_at("h1", T_MINUS)
    assert functions.exact_poly_at("868t^6+2569t^5+616t^4+1646t^3+92", T_PLUS) < F("891.450148292474")
