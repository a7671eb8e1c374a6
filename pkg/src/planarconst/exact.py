"""Exact rationals, decimal literals and closed rational intervals.

Nothing in here ever rounds except the explicit outward-rounding helpers,
which always move a bound away from the enclosed set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError, ParseError

Rational = Fraction
Number = Union[int, Fraction]

# Transcendental enclosures are rounded outward to this grid so that
# certificate numbers stay a manageable size.
GRID_DIGITS = 40
GRID = Fraction(1, 10**GRID_DIGITS)


def _digits_at(text: str, i: int) -> int:
    j = i
    while j < len(text) and text[j].isdigit() and text[j].isascii():
        j += 1
    return j


def parse_decimal(text: str) -> Fraction:
    """Parse a signed decimal literal such as ``-2.1701388889e-11`` exactly."""
    s = text
    i = 0
    n = len(s)
    sign = 1
    if i < n and s[i] in "+-":
        sign = -1 if s[i] == "-" else 1
        i += 1
    j = _digits_at(s, i)
    int_part = s[i:j]
    i = j
    frac_part = ""
    if i < n and s[i] == ".":
        j = _digits_at(s, i + 1)
        frac_part = s[i + 1 : j]
        i = j
    if not int_part and not frac_part:
        raise ParseError(text, i, "expected a digit")
    exponent = 0
    if i < n and s[i] in "eE":
        k = i + 1
        esign = 1
        if k < n and s[k] in "+-":
            esign = -1 if s[k] == "-" else 1
            k += 1
        j = _digits_at(s, k)
        if j == k:
            raise ParseError(text, k, "expected exponent digits")
        exponent = esign * int(s[k:j])
        i = j
    if i != n:
        raise ParseError(text, i)
    mantissa = int(int_part + frac_part or "0")
    scale = exponent - len(frac_part)
    if scale >= 0:
        return Fraction(sign * mantissa * 10**scale)
    return Fraction(sign * mantissa, 10**-scale)


def parse_rational(text: str) -> Fraction:
    """Parse either ``p/q`` or a decimal literal."""
    if "/" in text:
        num, _, den = text.partition("/")
        try:
            p = int(num)
        except ValueError:
            raise ParseError(text, 0, "bad numerator") from None
        if not den or not den.isdigit():
            raise ParseError(text, len(num) + 1, "bad denominator")
        if int(den) == 0:
            raise ParseError(text, len(num) + 1, "zero denominator")
        return Fraction(p, int(den))
    return parse_decimal(text)


def floor_to(q: Fraction, unit: Fraction) -> Fraction:
    return (q // unit) * unit


def ceil_to(q: Fraction, unit: Fraction) -> Fraction:
    return -((-q) // unit) * unit


def format_decimal(q: Fraction, digits: int, mode: str = "floor") -> str:
    """Render ``q`` with exactly ``digits`` fractional digits.

    ``mode`` is ``floor`` or ``ceil``; the rendered value is then a lower or
    upper bound for ``q``.
    """
    scale = 10**digits
    if mode == "floor":
        k = (q.numerator * scale) // q.denominator
    elif mode == "ceil":
        k = -((-q.numerator * scale) // q.denominator)
    else:
        raise ValueError(f"unknown rounding mode {mode!r}")
    sign = "-" if k < 0 else ""
    k = abs(k)
    whole, frac = divmod(k, scale)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def exact_decimal(q: Fraction, places: int | None = None) -> str:
    """Terminating decimal expansion of ``q``.

    Without ``places`` the shortest exact expansion is returned; with it the
    expansion is padded to that many fractional digits.  Raises DomainError
    if the expansion does not terminate or needs more than ``places`` digits.
    """
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise DomainError(f"{q} has no terminating decimal expansion")
    digits = max(twos, fives)
    if places is None:
        return format_decimal(q, digits, "floor")
    if places < digits:
        raise DomainError(f"{q} needs {digits} decimal places, not {places}")
    return format_decimal(q, places, "floor")


def render_rational(q: Fraction) -> str:
    """Canonical ``numerator/denominator`` text used in certificates."""
    return f"{q.numerator}/{q.denominator}"


def _as_fraction(x: Number) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True, slots=True)
class RatInterval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo = _as_fraction(self.lo)
        hi = _as_fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: Number) -> "RatInterval":
        return cls(x, x)

    @classmethod
    def hull(cls, *xs: "RatInterval | Number") -> "RatInterval":
        ivs = [as_interval(x) for x in xs]
        return cls(min(v.lo for v in ivs), max(v.hi for v in ivs))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: "RatInterval | Number") -> bool:
        if isinstance(x, RatInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    __contains__ = contains

    def subset_of(self, other: "RatInterval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def strictly_inside(self, lo: Number, hi: Number) -> bool:
        """True iff the interval lies in the open interval (lo, hi)."""
        return lo < self.lo and self.hi < hi

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    # arithmetic

    def __neg__(self) -> "RatInterval":
        return RatInterval(-self.hi, -self.lo)

    def __add__(self, other) -> "RatInterval":
        o = as_interval(other)
        return RatInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other) -> "RatInterval":
        o = as_interval(other)
        return RatInterval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other) -> "RatInterval":
        return as_interval(other) - self

    def __mul__(self, other) -> "RatInterval":
        o = as_interval(other)
        if self.lo >= 0 and o.lo >= 0:
            return RatInterval(self.lo * o.lo, self.hi * o.hi)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RatInterval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "RatInterval":
        if not self.excludes_zero():
            raise DomainError(f"division by interval {self} containing 0")
        return RatInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "RatInterval":
        o = as_interval(other)
        if not o.excludes_zero():
            raise DomainError(f"division by interval {o} containing 0")
        return self * o.reciprocal()

    def __rtruediv__(self, other) -> "RatInterval":
        return as_interval(other) / self

    def __pow__(self, n: int) -> "RatInterval":
        if not isinstance(n, int):
            raise TypeError("only integer exponents are supported")
        if n < 0:
            if not self.excludes_zero():
                raise DomainError(f"negative power of interval {self} containing 0")
            return self.reciprocal() ** (-n)
        if n == 0:
            return RatInterval(1, 1)
        a, b = self.lo**n, self.hi**n
        if n % 2 == 1 or self.lo >= 0:
            return RatInterval(a, b)
        if self.hi <= 0:
            return RatInterval(b, a)
        return RatInterval(Fraction(0), max(a, b))

    def round_out(self, unit: Fraction = GRID) -> "RatInterval":
        """Smallest enclosing interval with endpoints on the ``unit`` grid."""
        return RatInterval(floor_to(self.lo, unit), ceil_to(self.hi, unit))

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def as_interval(x: "RatInterval | Number") -> RatInterval:
    if isinstance(x, RatInterval):
        return x
    return RatInterval.point(_as_fraction(x))


_BINARY = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
}


def interval_arith(op: str, x: RatInterval, y: "RatInterval | int | None" = None) -> RatInterval:
    """Dispatch one of ``add sub mul div neg pow_int`` on exact intervals."""
    if op == "neg":
        return -x
    if op == "pow_int":
        if not isinstance(y, int):
            raise TypeError("pow_int needs an integer exponent")
        return x**y
    if op not in _BINARY:
        raise ValueError(f"unknown interval operation {op!r}")
    return _BINARY[op](x, as_interval(y))


def outward_round(x: RatInterval, digits: int) -> str:
    """Decimal rendering ``"lo .. hi"`` that encloses ``x``."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    return f"{format_decimal(x.lo, digits, 'floor')} .. {format_decimal(x.hi, digits, 'ceil')}"
