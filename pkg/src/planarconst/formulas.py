"""Closed-form definitions of every named function, as expression trees.

Factorizations are kept as printed (for example ``(3t-1)^2 (t+1)^6`` is not
expanded), so each sub-bound can be traced back to a concrete factor.

Summands are stored without their sign; ``SUMMANDS`` records the sign with
which each one enters its sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .expr import Const, Exp, Expr, Log, Named, Neg, Sqrt, t

F = Fraction

T_MINUS = F(6263716632, 10**10)
T_PLUS = F(6263716634, 10**10)
T_CENTER = F(6263716633, 10**10)


def c(x) -> Const:
    return Const(F(x))


one_minus_t = -t + 1

h1_body = (2 * t + 1) / ((3 * t + 1) * one_minus_t)
h2_body = Neg(
    (t**2 * one_minus_t * (5 * t**2 + 36 * t + 18))
    / (2 * (t + 3) * (2 * t + 1) * (3 * t + 1) ** 2)
)
h1 = Named("h1", h1_body)
h2 = Named("h2", h2_body)

Y_body = c(-1) + h1 * Exp(h2)

dY_num = 144 + 736 * t + 1256 * t**2 + 799 * t**3 + 141 * t**4 + t**5 - 5 * t**6

xi_body = ((3 * t + 1) * one_minus_t**3) / (16 * t**3)

_q_b0s2 = 3 * t**4 - 16 * t**3 + 6 * t**2 - 1
_q_b0s7 = 217 * t**6 + 920 * t**5 + 972 * t**4 + 1436 * t**3 + 205 * t**2 - 172 * t + 6
_q_quartic = 185 * t**4 + 698 * t**3 - 217 * t**2 - 160 * t + 6

B0_BODIES = [
    ((3 * t - 1) ** 2 * (t + 1) ** 6 * Log(t + 1)) / (512 * t**6),
    (_q_b0s2 * Log(3 * t + 1)) / (32 * t**3),
    ((3 * t + 1) ** 2 * one_minus_t**6 * Log(2 * t + 1)) / (1024 * t**6),
    c(F(1, 4)) * Log(t + 3),
    c(F(1, 2)) * Log(t),
    c(F(3, 8)) * Log(c(16)),
    (_q_b0s7 * one_minus_t**2) / (2048 * t**4 * (3 * t + 1) * (t + 3)),
]
B0_SIGNS = [1, -1, -1, 1, -1, -1, -1]

B2_BODIES = [
    (one_minus_t**3 * (3 * t - 1) * (3 * t + 1) * (t + 1) ** 3 * Log(t + 1)) / (256 * t**6),
    (one_minus_t**3 * (3 * t + 1) * Log(3 * t + 1)) / (32 * t**3),
    ((3 * t + 1) ** 2 * one_minus_t**6 * Log(2 * t + 1)) / (512 * t**6),
    ((t - 1) ** 4 * _q_quartic) / (1024 * t**4 * (3 * t + 1) * (t + 3)),
]
B2_SIGNS = [1, -1, 1, 1]

A_BODIES = [
    ((3 * t - 1) * (t + 1) ** 3 * Log(t + 1)) / (16 * t**3),
    ((3 * t + 1) * one_minus_t**3 * Log(2 * t + 1)) / (32 * t**3),
    (one_minus_t * _q_quartic) / (64 * t * (3 * t + 1) ** 2 * (t + 3)),
]
A_SIGNS = [1, 1, 1]


def _signed_sum(parts: list[Expr], signs: list[int]) -> Expr:
    out = parts[0] if signs[0] > 0 else Neg(parts[0])
    for p, s in zip(parts[1:], signs[1:]):
        out = out + p if s > 0 else out - p
    return out


FUNCTIONS: dict[str, Named] = {}
SUMMANDS: dict[str, list[tuple[str, int]]] = {}


def _register(name: str, body: Expr) -> Named:
    node = Named(name, body)
    FUNCTIONS[name] = node
    return node


_register("h1", h1_body)
_register("h2", h2_body)
_register("Y", Y_body)
_register("dY_num_poly", dY_num)
_register("xi", xi_body)

for _sum, _bodies, _signs in (("B0", B0_BODIES, B0_SIGNS), ("B2", B2_BODIES, B2_SIGNS), ("A", A_BODIES, A_SIGNS)):
    _named = []
    SUMMANDS[_sum] = []
    for _i, (_b, _s) in enumerate(zip(_bodies, _signs), start=1):
        _id = f"{_sum}_summand_{_i}"
        _named.append(_register(_id, _b))
        SUMMANDS[_sum].append((_id, _s))
    _register(_sum, _signed_sum(_named, _signs))

A = FUNCTIONS["A"]
_register("r", c(F(1, 16)) * Sqrt(3 * t + 1) * (1 / t - 1) ** 3 * Exp(A))

# Exponential of the negated argument, used for exp(-nu).
_register("exp_neg", Exp(-t))

# Sums of already bounded quantities: nu = R(1) + B0(t0) + B2(t0), where
# R(1) equals xi at t0.
COMPOSITES: dict[str, tuple[tuple[str, int], ...]] = {"nu": (("xi", 1), ("B0", 1), ("B2", 1))}


# -- monotone pieces and display polynomials ---------------------------------
#
# Factors that the hand proofs bound one at a time, each with its derivative
# in the factored form printed next to it.  The bound engine re-checks every
# factorization against the exact derivative before trusting it.

@dataclass(frozen=True)
class FactoredDerivative:
    """d/dt f = constant * prod(factor_i ^ exponent_i) [* exp(exp_argument)]."""

    constant: Fraction
    factors: tuple  # ((Expr polynomial, int exponent), ...)
    exp_argument: Expr | None = None


PIECES: dict[str, Named] = {}


def _piece(name: str, body: Expr) -> None:
    PIECES[name] = Named(name, body)


_piece("B0_summand_2_quartic", _q_b0s2)
_piece("B0_summand_3_numerator_factor", (3 * t + 1) ** 2 * one_minus_t**6)
_piece("B0_summand_7_numerator", _q_b0s7 * one_minus_t**2)
_piece("B2_summand_1_factor", one_minus_t**3 * (3 * t - 1) * (3 * t + 1) * (t + 1) ** 3)
_piece("B2_summand_2_factor", one_minus_t**3 * (3 * t + 1))
_piece("B2_summand_4_numerator", (t - 1) ** 4 * _q_quartic)
_piece("A_summand_1_factor", (3 * t - 1) * (t + 1) ** 3)
_piece("A_summand_2_factor", (3 * t + 1) * one_minus_t**3)
_piece("A_summand_3_numerator", one_minus_t * _q_quartic)

FACTORED_DERIVATIVES: dict[str, FactoredDerivative] = {
    "Y": FactoredDerivative(
        F(3),
        ((t, 2), (dY_num, 1), (2 * t + 1, -1), (3 * t + 1, -4), (t**2 + 2 * t - 3, -2)),
        h2_body,
    ),
    # derived here: ((3t+1)(1-t)^3 / (16 t^3))' = -3 (1-t)^2 (t+1)^2 / (16 t^4)
    "xi": FactoredDerivative(F(-3, 16), ((one_minus_t, 2), (t + 1, 2), (t, -4))),
    # 12 t (t^2 - 4t + 1); the hand proof displays the next derivative instead
    "B0_summand_2_quartic": FactoredDerivative(F(12), ((t, 1), (t**2 - 4 * t + 1, 1))),
    "B0_summand_3_numerator_factor": FactoredDerivative(F(24), ((t - 1, 5), (t, 1), (3 * t + 1, 1))),
    "B0_summand_7_numerator": FactoredDerivative(
        F(2),
        ((t - 1, 1), (868 * t**6 + 2569 * t**5 + 616 * t**4 + 1646 * t**3 - 1744 * t**2 - 463 * t + 92, 1)),
    ),
    "B2_summand_1_factor": FactoredDerivative(F(-24), ((t - 1, 2), (t, 1), (t + 1, 2), (3 * t**2 - 1, 1))),
    "B2_summand_2_factor": FactoredDerivative(F(-12), ((t - 1, 2), (t, 1))),
    "B2_summand_4_numerator": FactoredDerivative(
        F(2), ((t - 1, 3), (740 * t**4 + 2073 * t**3 - 1698 * t**2 - 183 * t + 92, 1))
    ),
    "A_summand_1_factor": FactoredDerivative(F(12), ((t, 1), (t + 1, 2))),
    "A_summand_2_factor": FactoredDerivative(F(-12), ((t, 1), (t - 1, 2))),
    "A_summand_3_numerator": FactoredDerivative(
        F(1), ((-925 * t**4 - 2052 * t**3 + 2745 * t**2 - 114 * t - 166, 1),)
    ),
}

# Polynomials whose exact values at the bracket ends are displayed to 40 digits.
POLYNOMIALS: dict[str, Expr] = {
    "dY_num_poly": dY_num,
    "B0_summand_2_quartic": _q_b0s2,
    "32t^3": 32 * t**3,
    "1744t^2+463t": 1744 * t**2 + 463 * t,
    "868t^6+2569t^5+616t^4+1646t^3+92": 868 * t**6 + 2569 * t**5 + 616 * t**4 + 1646 * t**3 + 92,
    "740t^4+2073t^3+92": 740 * t**4 + 2073 * t**3 + 92,
    "1698t^2+183t": 1698 * t**2 + 183 * t,
    "3t^2-1": 3 * t**2 - 1,
}


def lookup(name: str) -> Named:
    """Expression for any registered id (function, piece or polynomial)."""
    if name in FUNCTIONS:
        return FUNCTIONS[name]
    if name in PIECES:
        return PIECES[name]
    if name in POLYNOMIALS:
        return Named(name, POLYNOMIALS[name])
    raise KeyError(f"unknown function id {name!r}")


def all_ids() -> list[str]:
    return list(FUNCTIONS) + [p for p in PIECES if p not in FUNCTIONS] + [
        p for p in POLYNOMIALS if p not in FUNCTIONS and p not in PIECES
    ]
