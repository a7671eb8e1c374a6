"""Dense univariate polynomials over the rationals.

A polynomial is a tuple of Fractions, lowest degree first, with no trailing
zeros (the zero polynomial is the empty tuple).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .exact import RatInterval

Poly = tuple


def poly(coeffs: Iterable) -> Poly:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


ZERO: Poly = ()
ONE: Poly = (Fraction(1),)
X: Poly = (Fraction(0), Fraction(1))


def degree(p: Poly) -> int:
    return len(p) - 1


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ZERO
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly(out)


def scale(p: Poly, c) -> Poly:
    return poly(c * a for a in p)


def power(p: Poly, n: int) -> Poly:
    if n < 0:
        raise ValueError("negative polynomial power")
    result, base = ONE, p
    while n:
        if n & 1:
            result = mul(result, base)
        base = mul(base, base)
        n >>= 1
    return result


def deriv(p: Poly) -> Poly:
    return poly(i * p[i] for i in range(1, len(p)))


def evaluate(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def horner_interval(p: Sequence[Fraction], x: RatInterval) -> RatInterval:
    """Interval Horner scheme; the result encloses ``p`` over ``x``."""
    acc = RatInterval.point(Fraction(0))
    for c in reversed(p):
        acc = acc * x + c
    return acc


def to_text(p: Poly, var: str = "t") -> str:
    if not p:
        return "0"
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and abs(c) == 1:
            coef = ""
        else:
            coef = str(abs(c)) + ("*" if mono else "")
        sign = "-" if c < 0 else "+"
        terms.append((sign, coef + mono))
    first_sign, first = terms[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text
