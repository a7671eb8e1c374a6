"""Expression trees in one variable ``t``.

Trees are plain immutable data.  They are shared between the evaluators
that build enclosures and the certificate checker that replays them, so this
module must stay free of any enclosure-construction logic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import polynomial as P


class Expr:
    __slots__ = ()

    def __add__(self, other):
        return Add(self, lift(other))

    def __radd__(self, other):
        return Add(lift(other), self)

    def __sub__(self, other):
        return Sub(self, lift(other))

    def __rsub__(self, other):
        return Sub(lift(other), self)

    def __mul__(self, other):
        return Mul(self, lift(other))

    def __rmul__(self, other):
        return Mul(lift(other), self)

    def __truediv__(self, other):
        return Div(self, lift(other))

    def __rtruediv__(self, other):
        return Div(lift(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, n: int):
        return Pow(self, n)


@dataclass(frozen=True, eq=True)
class Var(Expr):
    def __str__(self):
        return "t"


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: Fraction

    def __str__(self):
        v = self.value
        return str(v) if v >= 0 and v.denominator == 1 else f"({v})"


@dataclass(frozen=True, eq=True)
class Add(Expr):
    a: Expr
    b: Expr

    def __str__(self):
        return f"({self.a} + {self.b})"


@dataclass(frozen=True, eq=True)
class Sub(Expr):
    a: Expr
    b: Expr

    def __str__(self):
        return f"({self.a} - {self.b})"


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    a: Expr
    b: Expr

    def __str__(self):
        return f"{self.a}*{self.b}"


@dataclass(frozen=True, eq=True)
class Div(Expr):
    a: Expr
    b: Expr

    def __str__(self):
        return f"{self.a}/({self.b})"


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    a: Expr

    def __str__(self):
        if isinstance(self.a, (Var, Const)):
            return f"-{self.a}"
        return f"(-{self.a})"


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    a: Expr
    n: int

    def __str__(self):
        base = str(self.a)
        if isinstance(self.a, (Mul, Div, Pow)) or base.startswith("-"):
            base = f"({base})"
        return f"{base}^{self.n}"


@dataclass(frozen=True, eq=True)
class Log(Expr):
    a: Expr

    def __str__(self):
        return f"log{_paren(self.a)}"


@dataclass(frozen=True, eq=True)
class Exp(Expr):
    a: Expr

    def __str__(self):
        return f"exp{_paren(self.a)}"


@dataclass(frozen=True, eq=True)
class Sqrt(Expr):
    a: Expr

    def __str__(self):
        return f"sqrt{_paren(self.a)}"


@dataclass(frozen=True, eq=True)
class Named(Expr):
    """Transparent label for a named sub-function (h1 inside Y, A inside r)."""

    name: str
    body: Expr

    def __str__(self):
        return self.name


@dataclass(frozen=True, eq=True)
class PolyNode(Expr):
    """Expanded polynomial, evaluated by the Horner scheme."""

    coeffs: tuple

    def __str__(self):
        return f"({P.to_text(self.coeffs)})"


def _paren(e: Expr) -> str:
    s = str(e)
    return s if s.startswith("(") and s.endswith(")") else f"({s})"


def lift(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Const(Fraction(x))
    raise TypeError(f"cannot use {type(x).__name__} in an expression")


t = Var()

BINARY = (Add, Sub, Mul, Div)
TRANSPARENT = (Named,)


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, BINARY):
        return (e.a, e.b)
    if isinstance(e, (Neg, Pow, Log, Exp, Sqrt)):
        return (e.a,)
    if isinstance(e, TRANSPARENT):
        return (e.body,)
    return ()


def op_name(e: Expr) -> str:
    return type(e).__name__.lower()


def strip(e: Expr) -> Expr:
    while isinstance(e, TRANSPARENT):
        e = e.body
    return e


def has_transcendental(e: Expr) -> bool:
    if isinstance(e, (Log, Exp, Sqrt)):
        return True
    return any(has_transcendental(c) for c in children(e))


# -- exact algebra -----------------------------------------------------------

RationalFunction = tuple  # (numerator Poly, denominator Poly)


def to_rational(e: Expr) -> RationalFunction:
    """Exact rational-function form ``(num, den)`` of a transcendental-free tree."""
    e = strip(e)
    if isinstance(e, Var):
        return P.X, P.ONE
    if isinstance(e, Const):
        return P.poly([e.value]), P.ONE
    if isinstance(e, PolyNode):
        return P.poly(e.coeffs), P.ONE
    if isinstance(e, Neg):
        n, d = to_rational(e.a)
        return P.neg(n), d
    if isinstance(e, (Add, Sub)):
        n1, d1 = to_rational(e.a)
        n2, d2 = to_rational(e.b)
        combine = P.add if isinstance(e, Add) else P.sub
        if d1 == d2:
            return combine(n1, n2), d1
        return combine(P.mul(n1, d2), P.mul(n2, d1)), P.mul(d1, d2)
    if isinstance(e, Mul):
        n1, d1 = to_rational(e.a)
        n2, d2 = to_rational(e.b)
        return P.mul(n1, n2), P.mul(d1, d2)
    if isinstance(e, Div):
        n1, d1 = to_rational(e.a)
        n2, d2 = to_rational(e.b)
        if not n2:
            raise ZeroDivisionError("division by the zero polynomial")
        return P.mul(n1, d2), P.mul(d1, n2)
    if isinstance(e, Pow):
        n, d = to_rational(e.a)
        if e.n >= 0:
            return P.power(n, e.n), P.power(d, e.n)
        return P.power(d, -e.n), P.power(n, -e.n)
    raise ValueError(f"{op_name(e)} is not a rational operation")


def as_polynomial(e: Expr) -> P.Poly:
    """Coefficients of ``e`` if it is a polynomial in t, else ValueError."""
    n, d = to_rational(e)
    if len(d) != 1:
        raise ValueError(f"{e} is not a polynomial")
    return P.scale(n, 1 / d[0])


def rational_derivative(rf: RationalFunction) -> RationalFunction:
    n, d = rf
    return P.sub(P.mul(P.deriv(n), d), P.mul(n, P.deriv(d))), P.mul(d, d)


def derivative_up_to_positive_factor(e: Expr) -> tuple[RationalFunction, Expr | None]:
    """Return ``(rf, g)`` with d/dt e = rf, or d/dt e = exp(g) * rf.

    Supported shapes: rational expressions, and ``c + f*exp(g)`` with f, g
    rational (the shape of Y).  Anything else raises ValueError.
    """
    core = strip(e)
    if not has_transcendental(core):
        return rational_derivative(to_rational(core)), None
    if isinstance(core, Add) and isinstance(strip(core.a), Const):
        prod = strip(core.b)
        if isinstance(prod, Mul) and isinstance(strip(prod.b), Exp):
            f = prod.a
            g = strip(prod.b).a
            if has_transcendental(f) or has_transcendental(g):
                raise ValueError("f and g must be rational in c + f*exp(g)")
            fn, fd = to_rational(f)
            dfn, dfd = rational_derivative((fn, fd))
            dgn, dgd = rational_derivative(to_rational(g))
            # f' + f g'
            num = P.add(P.mul(dfn, P.mul(fd, dgd)), P.mul(P.mul(fn, dgn), dfd))
            den = P.mul(dfd, P.mul(fd, dgd))
            return (num, den), g
    raise ValueError(f"no derivative rule for {e}")


def same_rational_function(a: RationalFunction, b: RationalFunction) -> bool:
    return P.mul(a[0], b[1]) == P.mul(b[0], a[1])


def has_var(e: Expr) -> bool:
    if isinstance(e, Var):
        return True
    return any(has_var(c) for c in children(e))


# -- log-linear forms ----------------------------------------------------------
#
# A log-linear expression is a finite sum of terms M * log(g) and M, with M and
# g rational.  Its derivative is again built from rational functions and the
# same logarithms: (M log g)' = M' log g + M g'/g.  Only these two rules are
# applied; M' and g'/g come from exact polynomial algebra.

LogTerm = tuple  # (M: Expr, g: Expr | None)


def _log_factor(e: Expr):
    """Split a product/quotient into (rational cofactor, log argument or None)."""
    e = strip(e)
    if not has_transcendental(e):
        return e, None
    if isinstance(e, Log):
        if has_transcendental(e.a):
            raise ValueError(f"log argument {e.a} is not rational")
        return Const(Fraction(1)), e.a
    if isinstance(e, Mul):
        ma, ga = _log_factor(e.a)
        mb, gb = _log_factor(e.b)
        if ga is not None and gb is not None:
            raise ValueError("product of two logarithms")
        return Mul(ma, mb), ga if ga is not None else gb
    if isinstance(e, Div):
        if has_transcendental(e.b):
            raise ValueError("logarithm in a denominator")
        m, g = _log_factor(e.a)
        return Div(m, e.b), g
    if isinstance(e, Neg):
        m, g = _log_factor(e.a)
        return Neg(m), g
    raise ValueError(f"{op_name(e)} is not allowed in a log-linear term")


def log_linear_terms(e: Expr) -> list[LogTerm]:
    """Decompose ``e`` into terms ``(M, g)`` meaning M*log(g), or M when g is None."""
    e = strip(e)
    if isinstance(e, Add):
        return log_linear_terms(e.a) + log_linear_terms(e.b)
    if isinstance(e, Sub):
        return log_linear_terms(e.a) + [(Neg(m), g) for m, g in log_linear_terms(e.b)]
    if isinstance(e, Neg):
        return [(Neg(m), g) for m, g in log_linear_terms(e.a)]
    return [_log_factor(e)]


def is_log_linear(e: Expr) -> bool:
    try:
        log_linear_terms(e)
    except ValueError:
        return False
    return True


def rational_expr(rf: RationalFunction) -> Expr:
    num, den = rf
    if den == P.ONE:
        return PolyNode(tuple(num))
    return Div(PolyNode(tuple(num)), PolyNode(tuple(den)))


def derivative_expr(e: Expr) -> Expr:
    """d/dt of a log-linear expression, as an expression tree."""
    parts: list[Expr] = []
    for m, g in log_linear_terms(e):
        dm = rational_derivative(to_rational(m))
        if g is None:
            parts.append(rational_expr(dm))
            continue
        if dm[0]:
            parts.append(Mul(rational_expr(dm), Log(g)))
        gn, gd = to_rational(g)
        dgn, _ = rational_derivative((gn, gd))
        if dgn:
            # g'/g = (gn' gd - gn gd') / (gn gd)
            parts.append(Mul(m, rational_expr((dgn, P.mul(gn, gd)))))
    if not parts:
        return Const(Fraction(0))
    out = parts[0]
    for p in parts[1:]:
        out = Add(out, p)
    return out
