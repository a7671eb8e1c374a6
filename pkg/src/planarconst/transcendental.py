"""Rigorous enclosures of exp, log and sqrt using rational arithmetic only.

exp: Taylor polynomial about 0 plus a Lagrange remainder exp(xi) x^k / k!,
where exp(xi) is bracketed by [1, 3] for xi in (0, 1) and by [1 + lo, 1] for
xi in (lo, 0).

log: log x = 2 * atanh(u) with u = (x - 1)/(x + 1), summed over odd powers;
the tail is bounded by a geometric series.

sqrt: dyadic integer square root; the evidence is the squared endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, isqrt

from .errors import DomainError
from .exact import RatInterval, as_interval

DEFAULT_BUDGET = Fraction(1, 10**13)

_U_BUCKETS = 256


@dataclass(frozen=True)
class TaylorEvidence:
    """Series enclosure record.

    For ``exp`` the domain is the argument interval, the expansion point is 0
    and the remainder bracket holds uniformly over the domain.  For ``log`` the
    domain is a single point x, ``expansion_point`` is u = (x-1)/(x+1) and
    ``degree`` is the highest odd power summed.
    """

    function: str
    expansion_point: Fraction
    degree: int
    remainder_lo: Fraction
    remainder_hi: Fraction
    domain: RatInterval
    result: RatInterval


@dataclass(frozen=True)
class SqrtEvidence:
    radicand: Fraction
    root_interval: RatInterval

    @property
    def squares(self) -> tuple[Fraction, Fraction]:
        return self.root_interval.lo**2, self.root_interval.hi**2

    def check(self) -> bool:
        lo_sq, hi_sq = self.squares
        return self.root_interval.lo >= 0 and lo_sq <= self.radicand <= hi_sq


def exp_partial_sum(x: Fraction, k: int) -> Fraction:
    """sum_{0 <= i < k} x^i / i!"""
    acc = Fraction(1)
    for i in range(k - 1, 0, -1):
        acc = 1 + x * acc / i
    return acc


def exp_remainder_bracket(domain: RatInterval, k: int) -> RatInterval:
    """Bracket of exp(x) - sum_{i<k} x^i/i! valid for every x in ``domain``."""
    kf = factorial(k)
    parts = []
    if domain.lo < 0:
        neg_part = RatInterval(domain.lo, min(domain.hi, Fraction(0)))
        parts.append(RatInterval(1 + domain.lo, 1) * neg_part**k / kf)
    if domain.hi > 0:
        pos_part = RatInterval(max(domain.lo, Fraction(0)), domain.hi)
        parts.append(RatInterval(1, 3) * pos_part**k / kf)
    if not parts:
        return RatInterval.point(Fraction(0))
    return RatInterval.hull(*parts)


def exp_enclosure(x, degree: int) -> tuple[RatInterval, TaylorEvidence]:
    """Enclose exp over ``x`` (a point or interval inside (-1, 1))."""
    x = as_interval(x)
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if not x.strictly_inside(-1, 1):
        raise DomainError(
            f"exp argument {x} lies outside the validity window (-1, 1); reduce the argument first"
        )
    rem = exp_remainder_bracket(x, degree)
    lo = exp_partial_sum(x.lo, degree) + rem.lo
    hi = exp_partial_sum(x.hi, degree) + rem.hi
    result = RatInterval(lo, hi).round_out()
    ev = TaylorEvidence("exp", Fraction(0), degree, rem.lo, rem.hi, x, result)
    return result, ev


def _log_terms(u: Fraction, budget: Fraction) -> int:
    # |u| is bucketed so nearby arguments share a term count; this keeps
    # enclosures nested when an argument interval shrinks.
    au = abs(u)
    ub = Fraction(-((-au.numerator * _U_BUCKETS) // au.denominator), _U_BUCKETS)
    if ub >= 1:
        ub = au
    denom = 1 - ub * ub
    n = 1
    p = ub**3
    while 2 * p / ((n + 2) * denom) > budget:
        n += 2
        p *= ub * ub
    return n


def log_series_sum(u: Fraction, n: int) -> Fraction:
    """2 * sum_{odd i <= n} u^i / i"""
    total = Fraction(0)
    u2 = u * u
    p = u
    for i in range(1, n + 1, 2):
        total += p / i
        p *= u2
    return 2 * total


def log_tail_bound(u: Fraction, n: int) -> Fraction:
    au = abs(u)
    return 2 * au ** (n + 2) / ((n + 2) * (1 - u * u))


@lru_cache(maxsize=4096)
def _log_point(x: Fraction, budget: Fraction) -> tuple[RatInterval, TaylorEvidence]:
    u = (x - 1) / (x + 1)
    n = _log_terms(u, budget)
    s = log_series_sum(u, n)
    tail = log_tail_bound(u, n)
    if u >= 0:
        rem_lo, rem_hi = Fraction(0), tail
    else:
        rem_lo, rem_hi = -tail, Fraction(0)
    result = RatInterval(s + rem_lo, s + rem_hi).round_out()
    ev = TaylorEvidence("log", u, n, rem_lo, rem_hi, RatInterval.point(x), result)
    return result, ev


def log_enclosure(x, budget: Fraction = DEFAULT_BUDGET) -> tuple[RatInterval, TaylorEvidence]:
    x = Fraction(x)
    if x <= 0:
        raise DomainError(f"log of non-positive number {x}")
    if budget <= 0:
        raise ValueError("budget must be positive")
    return _log_point(x, Fraction(budget))


def log_interval(x: RatInterval, budget: Fraction = DEFAULT_BUDGET):
    """Enclose log over an interval via its endpoints (log is increasing)."""
    if x.lo <= 0:
        raise DomainError(f"log argument {x} is not positive")
    lo, ev_lo = log_enclosure(x.lo, budget)
    if x.is_point():
        return lo, [ev_lo]
    hi, ev_hi = log_enclosure(x.hi, budget)
    return RatInterval(lo.lo, hi.hi), [ev_lo, ev_hi]


def _dyadic_scale(budget: Fraction) -> int:
    m = 0
    while Fraction(1, 2**m) > budget:
        m += 1
    return 2**m


def sqrt_enclosure(x, width_budget: Fraction = DEFAULT_BUDGET) -> tuple[RatInterval, SqrtEvidence]:
    """Enclose sqrt(x) between consecutive multiples of 2^-m, 2^-m <= budget."""
    x = Fraction(x)
    if x < 0:
        raise DomainError(f"sqrt of negative number {x}")
    if width_budget <= 0:
        raise ValueError("width_budget must be positive")
    n = _dyadic_scale(Fraction(width_budget))
    scaled = x * n * n
    a = isqrt(scaled.numerator // scaled.denominator)
    if a * a == scaled:
        root = RatInterval.point(Fraction(a, n))
    else:
        root = RatInterval(Fraction(a, n), Fraction(a + 1, n))
    return root, SqrtEvidence(x, root)


def sqrt_interval(x: RatInterval, width_budget: Fraction = DEFAULT_BUDGET):
    if x.lo < 0:
        raise DomainError(f"sqrt argument {x} is negative")
    lo, ev_lo = sqrt_enclosure(x.lo, width_budget)
    if x.is_point():
        return lo, [ev_lo]
    hi, ev_hi = sqrt_enclosure(x.hi, width_budget)
    return RatInterval(lo.lo, hi.hi), [ev_lo, ev_hi]
