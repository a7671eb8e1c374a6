"""Proof steps that produce certificates.

* ``poly_sign``: sign of a polynomial on a closed interval, by interval Horner
  with bisection of the undecided pieces.
* ``certify_monotone``: direction of a function on an interval, either from a
  transcribed factorization of its derivative (each factor's sign certified by
  ``poly_sign``) or from an enclosure of its exact derivative.
* ``uniform_bound``: bound over an interval from the two endpoint values of a
  monotone function.
* ``bracket_root``: bisection for f(t) = target that keeps a certified sign
  change between the bracket ends.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import expr as E
from . import formulas
from . import polynomial as P
from .errors import (
    CertificateError,
    IndeterminateSignError,
    NoSignChangeError,
    PrecisionError,
)
from .exact import RatInterval
from .functions import EvalSettings, EvalTrace, eval as eval_fn, evaluate_expr

DEFAULT_MAX_DEPTH = 60

INCREASING = "increasing"
DECREASING = "decreasing"


# -- polynomial sign ---------------------------------------------------------


@dataclass(frozen=True)
class PolySignEvidence:
    polynomial: tuple
    interval: RatInterval
    sign: str  # "positive" or "negative"
    subdivision: tuple  # ((piece, horner enclosure), ...) tiling ``interval``

    @property
    def sign_value(self) -> int:
        return 1 if self.sign == "positive" else -1


def poly_sign(coeffs: Sequence, interval: RatInterval, max_depth: int = DEFAULT_MAX_DEPTH) -> PolySignEvidence:
    """Certify that the polynomial has one strict sign on ``interval``."""
    p = P.poly(coeffs)
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    if interval.lo >= interval.hi:
        raise ValueError("poly_sign needs a proper interval")
    pieces: list[tuple[RatInterval, RatInterval]] = []
    stack = [(interval, 0)]
    while stack:
        piece, depth = stack.pop()
        enc = P.horner_interval(p, piece)
        if enc.excludes_zero():
            pieces.append((piece, enc))
            continue
        if depth >= max_depth:
            raise IndeterminateSignError(
                f"sign of {P.to_text(p)} undecided on {piece} after {max_depth} bisections"
            )
        m = piece.mid
        # push the right half first so pieces come out left to right
        stack.append((RatInterval(m, piece.hi), depth + 1))
        stack.append((RatInterval(piece.lo, m), depth + 1))
    signs = {enc.lo > 0 for _, enc in pieces}
    if len(signs) != 1:
        raise IndeterminateSignError(f"{P.to_text(p)} takes both signs on {interval}")
    sign = "positive" if signs.pop() else "negative"
    return PolySignEvidence(p, interval, sign, tuple(pieces))


def check_poly_sign(ev: PolySignEvidence) -> None:
    at = ev.interval.lo
    for piece, enc in ev.subdivision:
        if piece.lo != at:
            raise CertificateError("poly_sign", f"pieces do not tile {ev.interval}")
        if P.horner_interval(ev.polynomial, piece) != enc:
            raise CertificateError("poly_sign", f"enclosure on {piece} does not replay")
        if (enc.lo > 0) != (ev.sign == "positive") or not enc.excludes_zero():
            raise CertificateError("poly_sign", f"enclosure on {piece} has the wrong sign")
        at = piece.hi
    if at != ev.interval.hi:
        raise CertificateError("poly_sign", f"pieces do not reach {ev.interval.hi}")


# -- monotonicity ------------------------------------------------------------


@dataclass(frozen=True)
class FactorSign:
    polynomial: tuple
    exponent: int
    sign: PolySignEvidence


@dataclass(frozen=True)
class MonotoneEvidence:
    """Direction of ``function`` on ``interval``.

    ``method`` is one of

    * ``factored``: ``derivative_sign`` is ``(constant, factors, exp_factor)``
      with one ``FactorSign`` per factor; ``exp_factor`` marks an extra
      positive factor exp(g).
    * ``derivative_enclosure``: ``derivative_sign`` lists ``(piece, trace)``
      where each trace encloses the exact derivative on its piece and
      excludes 0.
    * ``constant``: the function does not depend on t.
    """

    function: str
    interval: RatInterval
    direction: str
    method: str
    derivative_sign: object = None


def _factored_rational(fd: formulas.FactoredDerivative):
    num, den = P.poly([fd.constant]), P.ONE
    for f, e in fd.factors:
        coeffs = E.as_polynomial(f)
        if e >= 0:
            num = P.mul(num, P.power(coeffs, e))
        else:
            den = P.mul(den, P.power(coeffs, -e))
    return num, den


def expansion_guard(fn: str, fd: formulas.FactoredDerivative) -> None:
    """Reject a transcribed factorization that differs from the true derivative."""
    body = formulas.lookup(fn).body
    rf, g = E.derivative_up_to_positive_factor(body)
    if (g is None) != (fd.exp_argument is None):
        raise CertificateError(fn, "exponential factor does not match the derivative")
    if g is not None and not E.same_rational_function(E.to_rational(g), E.to_rational(fd.exp_argument)):
        raise CertificateError(fn, "exponential factor does not match the derivative")
    if not E.same_rational_function(rf, _factored_rational(fd)):
        raise CertificateError(fn, "transcribed derivative does not expand to the derivative")


def _direction(sign: int) -> str:
    return INCREASING if sign > 0 else DECREASING


def _certify_factored(fn, interval, max_depth) -> MonotoneEvidence:
    fd = formulas.FACTORED_DERIVATIVES[fn]
    expansion_guard(fn, fd)
    sign = 1 if fd.constant > 0 else -1
    factors = []
    for f, e in fd.factors:
        coeffs = E.as_polynomial(f)
        ev = poly_sign(coeffs, interval, max_depth)
        if e % 2:
            sign *= ev.sign_value
        factors.append(FactorSign(coeffs, e, ev))
    payload = (fd.constant, tuple(factors), fd.exp_argument is not None)
    return MonotoneEvidence(fn, interval, _direction(sign), "factored", payload)


def derivative_id(fn: str) -> str:
    return f"d/dt {fn}"


def derivative_body(fn: str) -> E.Expr:
    return E.derivative_expr(formulas.lookup(fn).body)


def _certify_enclosure(fn, interval, max_depth, settings) -> MonotoneEvidence:
    d = derivative_body(fn)
    pieces: list = []
    stack = [(interval, 0)]
    while stack:
        piece, depth = stack.pop()
        val, trace = evaluate_expr(d, piece, settings, name=derivative_id(fn))
        if val.excludes_zero():
            pieces.append((piece, trace))
            continue
        if depth >= max_depth or piece.is_point():
            raise IndeterminateSignError(f"sign of d/dt {fn} undecided on {piece}")
        m = piece.mid
        stack.append((RatInterval(m, piece.hi), depth + 1))
        stack.append((RatInterval(piece.lo, m), depth + 1))
    signs = {tr.result.lo > 0 for _, tr in pieces}
    if len(signs) != 1:
        raise IndeterminateSignError(f"d/dt {fn} changes sign on {interval}")
    return MonotoneEvidence(
        fn, interval, _direction(1 if signs.pop() else -1), "derivative_enclosure", tuple(pieces)
    )


def certify_monotone(
    fn: str,
    interval: RatInterval,
    max_depth: int = DEFAULT_MAX_DEPTH,
    settings: EvalSettings | None = None,
) -> MonotoneEvidence:
    """Build a monotonicity certificate for ``fn`` on ``interval``."""
    body = formulas.lookup(fn).body
    if not E.has_var(body):
        return MonotoneEvidence(fn, interval, INCREASING, "constant")
    if interval.is_point():
        raise ValueError("monotonicity needs a proper interval")
    if fn in formulas.FACTORED_DERIVATIVES:
        return _certify_factored(fn, interval, max_depth)
    if E.is_log_linear(body):
        return _certify_enclosure(fn, interval, max_depth, settings or EvalSettings())
    raise ValueError(f"no monotonicity method for {fn}")


def check_monotone(ev: MonotoneEvidence, settings: EvalSettings | None = None) -> None:
    """Replay a monotonicity certificate; raises CertificateError on failure."""
    fn = ev.function
    body = formulas.lookup(fn).body
    if ev.method == "constant":
        if E.has_var(body):
            raise CertificateError(fn, "function depends on t")
        return
    if ev.method == "factored":
        constant, factors, exp_factor = ev.derivative_sign
        fd = formulas.FactoredDerivative(
            constant,
            tuple((E.PolyNode(tuple(f.polynomial)), f.exponent) for f in factors),
            formulas.FACTORED_DERIVATIVES.get(fn, formulas.FactoredDerivative(0, ())).exp_argument
            if exp_factor
            else None,
        )
        expansion_guard(fn, fd)
        sign = 1 if constant > 0 else -1
        for f in factors:
            if f.sign.interval != ev.interval or tuple(f.sign.polynomial) != tuple(f.polynomial):
                raise CertificateError(fn, "factor sign certificate does not cover the interval")
            check_poly_sign(f.sign)
            if f.exponent % 2:
                sign *= f.sign.sign_value
        if _direction(sign) != ev.direction:
            raise CertificateError(fn, "factor signs do not give the claimed direction")
        return
    if ev.method == "derivative_enclosure":
        d = derivative_body(fn)
        at = ev.interval.lo
        want = ev.direction == INCREASING
        for piece, trace in ev.derivative_sign:
            if piece.lo != at:
                raise CertificateError(fn, "derivative pieces do not tile the interval")
            val, _ = evaluate_expr(d, piece, settings or EvalSettings())
            if val != trace.result or not val.excludes_zero() or (val.lo > 0) != want:
                raise CertificateError(fn, f"derivative enclosure on {piece} does not replay")
            at = piece.hi
        if at != ev.interval.hi:
            raise CertificateError(fn, "derivative pieces do not reach the interval end")
        return
    raise CertificateError(fn, f"unknown monotonicity method {ev.method!r}")


# -- uniform bounds ----------------------------------------------------------


@dataclass(frozen=True)
class UniformBound:
    function: str
    interval: RatInterval
    result: RatInterval
    monotonicity: MonotoneEvidence
    left: EvalTrace
    right: EvalTrace


def uniform_bound(
    fn: str,
    interval: RatInterval,
    evidence: MonotoneEvidence,
    settings: EvalSettings | None = None,
    check: bool = True,
) -> UniformBound:
    """Bound ``fn`` on ``interval`` by its values at the two ends."""
    if evidence.function != fn or not interval.subset_of(evidence.interval):
        raise CertificateError(fn, "monotonicity evidence does not cover the interval")
    if check:
        check_monotone(evidence, settings)
    left, ltr = eval_fn(fn, interval.lo, settings)
    right, rtr = eval_fn(fn, interval.hi, settings)
    if evidence.direction == INCREASING:
        result = RatInterval(left.lo, right.hi)
    else:
        result = RatInterval(right.lo, left.hi)
    return UniformBound(fn, interval, result, evidence, ltr, rtr)


def monotone_uniform_bound(
    fn: str,
    interval: RatInterval,
    direction_evidence: MonotoneEvidence,
    settings: EvalSettings | None = None,
) -> RatInterval:
    return uniform_bound(fn, interval, direction_evidence, settings).result


def aggregate_signed_sum(summand_bounds: Sequence[tuple[RatInterval, int]]) -> RatInterval:
    """Exact interval sum with the sign of each summand applied."""
    if not summand_bounds:
        raise ValueError("nothing to aggregate")
    total = RatInterval.point(0)
    for bound, sign in summand_bounds:
        if sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign!r}")
        total = total + (bound if sign > 0 else -bound)
    return total


# -- root bracketing ---------------------------------------------------------


@dataclass(frozen=True)
class RootBracket:
    function: str
    target: Fraction
    bracket: RatInterval
    left_eval: RatInterval
    right_eval: RatInterval
    monotonicity: MonotoneEvidence
    left_trace: EvalTrace
    right_trace: EvalTrace


def _side(value: RatInterval, target: Fraction, increasing: bool) -> int:
    """-1 if the point is certainly left of the root, +1 if right, 0 if unknown."""
    if value.hi < target:
        return -1 if increasing else 1
    if value.lo > target:
        return 1 if increasing else -1
    return 0


def bracket_root(
    fn: str,
    target,
    seed_bracket: RatInterval,
    monotonicity: MonotoneEvidence,
    width_goal,
    settings: EvalSettings | None = None,
) -> RootBracket:
    """Shrink ``seed_bracket`` around the unique solution of fn(t) = target."""
    target = Fraction(target)
    width_goal = Fraction(width_goal)
    if width_goal <= 0:
        raise ValueError("width_goal must be positive")
    if monotonicity.function != fn or not seed_bracket.subset_of(monotonicity.interval):
        raise CertificateError(fn, "monotonicity evidence does not cover the seed bracket")
    if monotonicity.method == "constant":
        raise CertificateError(fn, "a constant function has no isolated root")
    increasing = monotonicity.direction == INCREASING

    def probe(x):
        val, tr = eval_fn(fn, x, settings)
        return _side(val, target, increasing), val, tr

    lo, hi = seed_bracket.lo, seed_bracket.hi
    s_lo, v_lo, t_lo = probe(lo)
    s_hi, v_hi, t_hi = probe(hi)
    if s_lo == s_hi and s_lo != 0:
        raise NoSignChangeError(
            f"{fn} - {target} has the same sign at both ends of {seed_bracket}: {v_lo} and {v_hi}"
        )
    if s_lo != -1 or s_hi != 1:
        raise PrecisionError(
            f"enclosures of {fn} at the seed ends straddle {target}; raise the transcendental degree"
        )
    while hi - lo > width_goal:
        w = hi - lo
        for x in (lo + w / 2, lo + w / 3, lo + 2 * w / 3):
            s, v, tr = probe(x)
            if s < 0:
                lo, v_lo, t_lo = x, v, tr
                break
            if s > 0:
                hi, v_hi, t_hi = x, v, tr
                break
        else:
            raise PrecisionError(
                f"cannot locate the root of {fn} = {target} inside [{lo}, {hi}]; "
                "raise the transcendental degree"
            )
    return RootBracket(fn, target, RatInterval(lo, hi), v_lo, v_hi, monotonicity, t_lo, t_hi)


def exp_degree_for_goal(width_goal: Fraction, base: int) -> int:
    """Smallest degree >= base whose remainder on (-0.05, 0) is below the goal."""
    k = base
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    while Fraction(1, 20) ** k / fact > width_goal:
        k += 1
        fact *= k
    return k
