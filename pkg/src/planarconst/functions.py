"""Interval evaluation of the named functions, with a replayable trace.

The evaluator walks an expression tree bottom-up.  Every visited node leaves
one ``Step`` in post-order, holding the node's enclosure and, for exp, log and
sqrt, the series or square evidence behind it.  A checker that walks the same
tree can recompute each step from its children with exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import expr as E
from . import formulas
from . import polynomial as P
from .errors import DomainError, PoleError
from .exact import RatInterval, as_interval
from .transcendental import DEFAULT_BUDGET, exp_enclosure, log_interval, sqrt_interval


@dataclass(frozen=True)
class EvalSettings:
    budget: Fraction = DEFAULT_BUDGET
    exp_degree_positive: int = 12
    exp_degree_negative: int = 6

    def exp_degree(self, x: RatInterval) -> int:
        return self.exp_degree_negative if x.hi <= 0 else self.exp_degree_positive


@dataclass(frozen=True)
class Step:
    op: str
    value: RatInterval
    evidence: tuple = ()


@dataclass
class EvalTrace:
    function: str
    argument: RatInterval
    result: RatInterval
    children: list = field(default_factory=list)
    bindings: dict = field(default_factory=dict)


def _pole_factor(divisor: E.Expr, x: RatInterval, settings: EvalSettings) -> E.Expr:
    """Innermost multiplicative factor of ``divisor`` whose enclosure meets 0."""
    node = E.strip(divisor)
    while True:
        if isinstance(node, E.Mul):
            for part in (node.a, node.b):
                val, _ = _eval(part, x, settings, {}, [])
                if not val.excludes_zero():
                    node = E.strip(part)
                    break
            else:
                return node
        elif isinstance(node, E.Pow):
            node = E.strip(node.a)
        else:
            return node


def _eval(e: E.Expr, x: RatInterval, s: EvalSettings, bindings: Mapping, steps: list):
    if isinstance(e, E.Named):
        if e.name in bindings:
            value = bindings[e.name]
            steps.append(Step("bound:" + e.name, value))
            return value, steps
        return _eval(e.body, x, s, bindings, steps)
    if isinstance(e, E.Var):
        value = x
        ev = ()
    elif isinstance(e, E.Const):
        value = RatInterval.point(e.value)
        ev = ()
    elif isinstance(e, E.PolyNode):
        value = P.horner_interval(e.coeffs, x)
        ev = ()
    elif isinstance(e, E.BINARY):
        a, _ = _eval(e.a, x, s, bindings, steps)
        b, _ = _eval(e.b, x, s, bindings, steps)
        ev = ()
        if isinstance(e, E.Add):
            value = a + b
        elif isinstance(e, E.Sub):
            value = a - b
        elif isinstance(e, E.Mul):
            value = a * b
        else:
            if not b.excludes_zero():
                raise PoleError(str(_pole_factor(e.b, x, s)), f"t = {x}")
            value = a / b
    elif isinstance(e, E.Neg):
        a, _ = _eval(e.a, x, s, bindings, steps)
        value, ev = -a, ()
    elif isinstance(e, E.Pow):
        a, _ = _eval(e.a, x, s, bindings, steps)
        if e.n < 0 and not a.excludes_zero():
            raise PoleError(str(_pole_factor(e.a, x, s)), f"t = {x}")
        value, ev = a**e.n, ()
    elif isinstance(e, E.Log):
        a, _ = _eval(e.a, x, s, bindings, steps)
        if a.lo <= 0:
            raise DomainError(f"log argument {e.a} is not positive on t = {x}")
        value, evs = log_interval(a, s.budget)
        ev = tuple(evs)
    elif isinstance(e, E.Exp):
        a, _ = _eval(e.a, x, s, bindings, steps)
        value, one = exp_enclosure(a, s.exp_degree(a))
        ev = (one,)
    elif isinstance(e, E.Sqrt):
        a, _ = _eval(e.a, x, s, bindings, steps)
        if a.lo < 0:
            raise DomainError(f"sqrt argument {e.a} is negative on t = {x}")
        value, evs = sqrt_interval(a, s.budget)
        ev = tuple(evs)
    else:
        raise TypeError(f"cannot evaluate {type(e).__name__}")
    steps.append(Step(E.op_name(e), value, ev))
    return value, steps


def evaluate_expr(
    e: E.Expr,
    x,
    settings: EvalSettings | None = None,
    bindings: Mapping[str, RatInterval] | None = None,
    name: str = "",
):
    """Enclose ``e`` over ``x``; returns ``(interval, EvalTrace)``."""
    x = as_interval(x)
    settings = settings or EvalSettings()
    bindings = dict(bindings or {})
    value, steps = _eval(e, x, settings, bindings, [])
    return value, EvalTrace(name or str(e), x, value, steps, bindings)


def eval(fn: str, t, settings: EvalSettings | None = None, bindings=None):  # noqa: A001
    """Enclosure of the registered function ``fn`` over ``t``."""
    node = formulas.lookup(fn)
    return evaluate_expr(node.body, t, settings, bindings, name=fn)


def exact_poly_at(fn: str, t) -> Fraction:
    """Exact value of a polynomial id at a rational point."""
    node = formulas.lookup(fn)
    try:
        coeffs = E.as_polynomial(node.body)
    except ValueError:
        raise ValueError(f"{fn} is not a polynomial") from None
    return P.evaluate(coeffs, Fraction(t))


def eval_Y_certificate_points(settings: EvalSettings | None = None):
    """Enclosures of Y at both ends of the bracket for t0.

    Also asserts the strengthened inequalities that make the bracket usable
    for every level y in (0.9999999996, 1.00000000009).
    """
    s = settings or EvalSettings()
    left, _ = eval("Y", formulas.T_MINUS, s)
    right, _ = eval("Y", formulas.T_PLUS, s)
    assert left.hi < Fraction(9999999996, 10**10), f"Y(t-) upper bound {left.hi} too large"
    assert right.lo > Fraction(100000000009, 10**11), f"Y(t+) lower bound {right.lo} too small"
    return left, right
