"""End-to-end computation of t0, nu, rho and exp(-nu) with a certificate.

The steps run in a fixed order and every one of them leaves a node in the
certificate:

1. Y is certified increasing on the seed bracket and bisected down to the
   requested width around the solution of Y(t) = 1; the result is T.
2. xi, which gives R(1), and every summand of B0, B2 and A are certified
   monotone on T and bounded there by their endpoint values.
3. The sums B0, B2 and A are exact signed sums of those bounds.
4. nu = R(1) + B0 + B2; exp(-nu) is enclosed directly; rho = r(T) with the
   bound for A substituted into r.

Evaluation is sequential.  Results are memoised per configuration.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

from . import bounds as B
from . import formulas
from .certificate import BoundCertificate, enc_iv, enc_q
from .errors import DomainError
from .exact import RatInterval
from .functions import EvalSettings, EvalTrace, eval as eval_fn
from .transcendental import DEFAULT_BUDGET, SqrtEvidence, TaylorEvidence

SEED_BRACKET = RatInterval(formulas.T_MINUS, formulas.T_PLUS)
DEFAULT_T0_WIDTH = Fraction(2, 10**10)
T0_WIDTH_FLOOR = Fraction(1, 10**30)
BUDGET_FLOOR = Fraction(1, 10**35)
BUDGET_CEILING = Fraction(1, 10**6)


@dataclass(frozen=True)
class Config:
    budget: Fraction = DEFAULT_BUDGET
    exp_degree_positive: int = 12
    exp_degree_negative: int = 6
    poly_max_depth: int = B.DEFAULT_MAX_DEPTH
    t0_width: Fraction = DEFAULT_T0_WIDTH

    def __post_init__(self):
        object.__setattr__(self, "budget", Fraction(self.budget))
        object.__setattr__(self, "t0_width", Fraction(self.t0_width))

    def validate(self) -> None:
        if not BUDGET_FLOOR <= self.budget <= BUDGET_CEILING:
            raise DomainError(f"budget {self.budget} outside [{BUDGET_FLOOR}, {BUDGET_CEILING}]")
        if self.t0_width < T0_WIDTH_FLOOR:
            raise DomainError(f"t0 width {self.t0_width} is below the floor {T0_WIDTH_FLOOR}")
        if self.exp_degree_positive < 1 or self.exp_degree_negative < 1:
            raise DomainError("exp degrees must be at least 1")
        if self.poly_max_depth < 0:
            raise DomainError("poly_max_depth must be non-negative")

    def settings(self) -> EvalSettings:
        return EvalSettings(self.budget, self.exp_degree_positive, self.exp_degree_negative)

    def to_json(self) -> dict:
        out = asdict(self)
        out["budget"] = enc_q(self.budget)
        out["t0_width"] = enc_q(self.t0_width)
        return out


@dataclass
class ConstantReport:
    t0: RatInterval
    R1: RatInterval
    B0_at_t0: RatInterval
    B2_at_t0: RatInterval
    nu: RatInterval
    A_at_t0: RatInterval
    rho: RatInterval
    exp_neg_nu: RatInterval
    certificate: BoundCertificate
    summands: dict = field(default_factory=dict)
    exp_A: RatInterval | None = None

    def constants(self) -> dict[str, RatInterval]:
        return {"t0": self.t0, "nu": self.nu, "rho": self.rho, "exp-neg-nu": self.exp_neg_nu}


# -- certificate nodes -------------------------------------------------------


def _enc_evidence(ev) -> dict:
    if isinstance(ev, TaylorEvidence):
        return {
            "type": "taylor",
            "function": ev.function,
            "expansion_point": enc_q(ev.expansion_point),
            "degree": ev.degree,
            "remainder": [enc_q(ev.remainder_lo), enc_q(ev.remainder_hi)],
            "domain": enc_iv(ev.domain),
            "result": enc_iv(ev.result),
        }
    if isinstance(ev, SqrtEvidence):
        lo_sq, hi_sq = ev.squares
        return {
            "type": "sqrt",
            "radicand": enc_q(ev.radicand),
            "root": enc_iv(ev.root_interval),
            "squares": [enc_q(lo_sq), enc_q(hi_sq)],
        }
    raise TypeError(f"cannot encode evidence {type(ev).__name__}")


class _Builder:
    def __init__(self):
        self.nodes: list[dict] = []
        self._poly_signs: dict = {}

    def _add(self, node: dict) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def eval(self, trace: EvalTrace, argument_from: int | None = None, bindings: dict | None = None) -> int:
        node = {
            "kind": "eval",
            "function": trace.function,
            "argument": enc_iv(trace.argument),
            "result": enc_iv(trace.result),
            "steps": [
                {"op": s.op, "value": enc_iv(s.value), "evidence": [_enc_evidence(e) for e in s.evidence]}
                for s in trace.children
            ],
            "bindings": dict(sorted((bindings or {}).items())),
        }
        if argument_from is not None:
            node["argument_from"] = argument_from
        return self._add(node)

    def poly_sign(self, ev: B.PolySignEvidence) -> int:
        key = (ev.polynomial, ev.interval)
        if key not in self._poly_signs:
            self._poly_signs[key] = self._add(
                {
                    "kind": "poly_sign",
                    "polynomial": [enc_q(c) for c in ev.polynomial],
                    "interval": enc_iv(ev.interval),
                    "sign": ev.sign,
                    "pieces": [{"interval": enc_iv(p), "enclosure": enc_iv(e)} for p, e in ev.subdivision],
                }
            )
        return self._poly_signs[key]

    def monotone(self, ev: B.MonotoneEvidence) -> int:
        node = {
            "kind": "monotone",
            "function": ev.function,
            "interval": enc_iv(ev.interval),
            "direction": ev.direction,
            "method": ev.method,
        }
        if ev.method == "factored":
            constant, factors, exp_factor = ev.derivative_sign
            node["constant"] = enc_q(constant)
            node["exp_factor"] = exp_factor
            node["factors"] = [
                {"polynomial": [enc_q(c) for c in f.polynomial], "exponent": f.exponent, "sign": self.poly_sign(f.sign)}
                for f in factors
            ]
        elif ev.method == "derivative_enclosure":
            node["pieces"] = [{"interval": enc_iv(p), "eval": self.eval(tr)} for p, tr in ev.derivative_sign]
        return self._add(node)

    def uniform(self, ub: B.UniformBound, mono: int) -> int:
        return self._add(
            {
                "kind": "uniform",
                "function": ub.function,
                "interval": enc_iv(ub.interval),
                "monotone": mono,
                "left": self.eval(ub.left),
                "right": self.eval(ub.right),
                "result": enc_iv(ub.result),
            }
        )

    def aggregate(self, fn: str, interval: RatInterval, terms: list[tuple[int, int]], result: RatInterval) -> int:
        return self._add(
            {
                "kind": "aggregate",
                "function": fn,
                "interval": enc_iv(interval),
                "terms": [{"node": n, "sign": s} for n, s in terms],
                "result": enc_iv(result),
            }
        )

    def root(self, rb: B.RootBracket, mono: int) -> int:
        return self._add(
            {
                "kind": "root_bracket",
                "function": rb.function,
                "target": enc_q(rb.target),
                "bracket": enc_iv(rb.bracket),
                "monotone": mono,
                "left": self.eval(rb.left_trace),
                "right": self.eval(rb.right_trace),
            }
        )


# -- pipeline ----------------------------------------------------------------


def _bound_on(builder: _Builder, fn: str, T: RatInterval, cfg: Config, s: EvalSettings):
    ev = B.certify_monotone(fn, T, cfg.poly_max_depth, s)
    ub = B.uniform_bound(fn, T, ev, s, check=False)
    return ub.result, builder.uniform(ub, builder.monotone(ev))


def _signed_sum(builder, fn, T, cfg, s, summands):
    parts, terms, bounds = [], [], {}
    for sid, sign in summands:
        val, node = _bound_on(builder, sid, T, cfg, s)
        bounds[sid] = val
        parts.append((val, sign))
        terms.append((node, sign))
    total = B.aggregate_signed_sum(parts)
    return total, builder.aggregate(fn, T, terms, total), bounds


def _locate_t0(builder: _Builder, cfg: Config, s: EvalSettings):
    # Y has no log or sqrt; only its exp degree limits how far the
    # bisection can go, so raise it with the requested width.
    degree = B.exp_degree_for_goal(cfg.t0_width / 8, cfg.exp_degree_negative)
    ys = replace(s, exp_degree_negative=degree)
    mono = B.certify_monotone("Y", SEED_BRACKET, cfg.poly_max_depth, ys)
    rb = B.bracket_root("Y", 1, SEED_BRACKET, mono, cfg.t0_width, ys)
    assert rb.bracket.subset_of(SEED_BRACKET)
    return rb.bracket, builder.root(rb, builder.monotone(mono))


@lru_cache(maxsize=16)
def _compute(cfg: Config) -> ConstantReport:
    cfg.validate()
    s = cfg.settings()
    b = _Builder()
    claims: dict = {}

    def claim(name, value, node):
        claims[name] = {"node": node, "value": enc_iv(value)}

    T, t_node = _locate_t0(b, cfg, s)
    claim("t0", T, t_node)

    R1, r1_node = _bound_on(b, "xi", T, cfg, s)
    claim("R1", R1, r1_node)

    summands: dict = {}
    sums = {}
    for name, key in (("B0", "B0_at_t0"), ("B2", "B2_at_t0"), ("A", "A_at_t0")):
        total, node, parts = _signed_sum(b, name, T, cfg, s, formulas.SUMMANDS[name])
        summands.update(parts)
        sums[name] = (total, node)
        claim(key, total, node)

    bounded = {"xi": (R1, r1_node), **sums}
    recipe = formulas.COMPOSITES["nu"]
    nu = B.aggregate_signed_sum([(bounded[fn][0], sign) for fn, sign in recipe])
    nu_node = b.aggregate("nu", T, [(bounded[fn][1], sign) for fn, sign in recipe], nu)
    claim("nu", nu, nu_node)

    exp_neg, tr = eval_fn("exp_neg", nu, s)
    claim("exp_neg_nu", exp_neg, b.eval(tr, argument_from=nu_node))

    A_val, A_node = sums["A"]
    rho, tr = eval_fn("r", T, s, bindings={"A": A_val})
    claim("rho", rho, b.eval(tr, bindings={"A": A_node}))
    exp_A = next(st.value for st in tr.children if st.op == "exp")

    cert = BoundCertificate(
        config={**cfg.to_json(), "seed_bracket": enc_iv(SEED_BRACKET)},
        claims=claims,
        nodes=b.nodes,
    )
    return ConstantReport(
        t0=T,
        R1=R1,
        B0_at_t0=sums["B0"][0],
        B2_at_t0=sums["B2"][0],
        nu=nu,
        A_at_t0=A_val,
        rho=rho,
        exp_neg_nu=exp_neg,
        certificate=cert,
        summands=summands,
        exp_A=exp_A,
    )


def compute_all(config: Config | None = None) -> ConstantReport:
    return _compute(config or Config())


def compute_t0(width_goal=None, config: Config | None = None) -> RatInterval:
    cfg = config or Config()
    if width_goal is not None:
        cfg = replace(cfg, t0_width=Fraction(width_goal))
    cfg.validate()
    s = cfg.settings()
    T, _ = _locate_t0(_Builder(), cfg, s)
    return T


def compute_nu(config: Config | None = None) -> RatInterval:
    return compute_all(config).nu


def compute_rho(config: Config | None = None) -> RatInterval:
    return compute_all(config).rho


def compute_exp_neg_nu(config: Config | None = None) -> RatInterval:
    return compute_all(config).exp_neg_nu
