"""Published bounds, as exact rationals parsed by the standard library."""

from fractions import Fraction

F = Fraction
E10 = F(1, 10**10)


def open_iv(lo: str, hi: str) -> tuple[Fraction, Fraction]:
    return F(lo), F(hi)


T0_BRACKET = (F("0.6263716632"), F("0.6263716634"))
Y_LEFT_MAX = F("0.9999999996")
Y_RIGHT_MIN = F("1.00000000009")

H_WINDOWS = {
    ("h1", "minus"): (F("2.0941746325") - E10, F("2.0941746325") + E10),
    ("h1", "plus"): (F("2.0941746335") - E10, F("2.0941746335") + E10),
    ("h2", "minus"): (F("-0.0460123254") - E10, F("-0.0460123254") + E10),
    ("h2", "plus"): (F("-0.0460123253") - E10, F("-0.0460123253") + E10),
}

XI_MINUS = open_iv("0.03819109771", "0.03819109772")
XI_PLUS = open_iv("0.03819109762", "0.03819109763")
R1 = open_iv("0.0381910976", "0.0381910977")

B0_SUMMANDS = [
    open_iv("0.22495616614", "0.22495616711"),
    open_iv("-0.28456395530", "-0.28456395528"),
    open_iv("0.00029614190", "0.00029614191"),
    open_iv("0.32205815164", "0.32205815165"),
    open_iv("-0.23390568644", "-0.23390568627"),
    open_iv("1.03972077083", "1.03972077084"),
    open_iv("0.02472734758", "0.02472734762"),
]
B0_UNIFORM = open_iv("0.00073969896", "0.00073970019")
B0_POINT_MINUS = open_iv("0.00073969957", "0.00073969958")
B0_POINT_PLUS = open_iv("0.00073969956", "0.00073969957")

B2_SUMMANDS = [
    open_iv("0.01786492701", "0.01786492706"),
    open_iv("0.02019321732", "0.02019321738"),
    open_iv("0.00059228380", "0.00059228381"),
    open_iv("0.000244575293", "0.000244575295"),
]
B2_UNIFORM = open_iv("-0.001491431277", "-0.001491431155")
B2_POINT = (F("-0.0014914312") - E10, F("-0.0014914312") + E10)

A_SUMMANDS = [
    open_iv("0.46777725975", "0.46777726082"),
    open_iv("0.01550842571", "0.01550842575"),
    open_iv("0.00640398702", "0.00640398706"),
]
A_UNIFORM = open_iv("0.48968967248", "0.48968967363")
EXP_A = open_iv("1.63180974590", "1.63180974778")
R_UNIFORM = open_iv("0.03672841251", "0.03672841266")
NU = open_iv("0.037439365283", "0.037439366735")
EXP_NEG_NU = open_iv("0.96325282112", "0.96325282254")

# exact values of polynomials at the bracket ends, as printed
POLY_40_DIGITS = [
    ("B0_summand_2_quartic", "plus", "-2.1161809442159711262496568523624448554192"),
    ("B0_summand_2_quartic", "minus", "-2.1161809425425888723475949656101944348672"),
    ("32t^3", "minus", "7.864050340179393384432870014976"),
    ("32t^3", "plus", "7.864050347712349427668874499328"),
    ("1744t^2+463t", "minus", "974.25358710372530451456"),
    ("740t^4+2073t^3+92", "plus", "715.3525597141428299499534408273089356632640"),
    ("1698t^2+183t", "minus", "780.82181422656832973952"),
    ("3t^2-1", "minus", "0.17702438137980270272"),
]

# the two long certificate chains for Y at the bracket ends
Y_CHAIN_LEFT = (
    F("0.99999999955444082633107383245182705870208185832244853853496068") + F(1, 3) * F(1, 10**62)
)
Y_CHAIN_RIGHT = F("1.0000000000957417297668951405800480697033915364640304336242832")


def inside(iv, bounds) -> bool:
    """Closed enclosure strictly inside the open interval ``bounds``."""
    lo, hi = bounds
    return lo < iv.lo and iv.hi < hi
