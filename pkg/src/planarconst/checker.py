"""Independent replay of a serialized certificate.

The checker shares only the exact arithmetic, the polynomial helpers and the
expression definitions with the code that built the certificate.  It carries
its own copies of the series and remainder formulas, recomputes every stored
number with exact rational arithmetic, and demands exact equality.  Any
malformed input is a reject, never a crash.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from . import expr as E
from . import formulas
from . import polynomial as P
from .certificate import dec_iv, dec_q, deserialize
from .errors import CertificateError
from .exact import RatInterval

CLAIMS = ("t0", "R1", "B0_at_t0", "B2_at_t0", "nu", "A_at_t0", "rho", "exp_neg_nu")
DERIVATIVE_PREFIX = "d/dt "


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    path: str = ""
    reason: str = ""

    def __bool__(self) -> bool:
        return self.accepted

    def __str__(self) -> str:
        return "accept" if self.accepted else f"reject at {self.path}: {self.reason}"


# -- series, re-derived ---------------------------------------------------------


@lru_cache(maxsize=4096)
def _atanh_sum(u: Fraction, n: int) -> Fraction:
    # 2 (u + u^3/3 + ... + u^n/n)
    return 2 * sum(u**i / i for i in range(1, n + 1, 2))


def _atanh_tail(u: Fraction, n: int) -> Fraction:
    return 2 * abs(u) ** (n + 2) / ((n + 2) * (1 - u * u))


def _taylor_exp(x: Fraction, k: int) -> Fraction:
    term, total = Fraction(1), Fraction(0)
    for i in range(k):
        total += term
        term = term * x / (i + 1)
    return total


def _corners(a: RatInterval, b: RatInterval) -> RatInterval:
    prods = [p * q for p in (a.lo, a.hi) for q in (b.lo, b.hi)]
    return RatInterval(min(prods), max(prods))


def _power_range(lo: Fraction, hi: Fraction, k: int) -> RatInterval:
    vals = [lo**k, hi**k]
    if lo < 0 < hi and k % 2 == 0:
        vals.append(Fraction(0))
    return RatInterval(min(vals), max(vals))


def _exp_remainder(dom: RatInterval, k: int) -> RatInterval:
    # exp(c) x^k / k!  with exp(c) in [1 + lo, 1] left of 0 and in [1, 3] right of 0
    kf = factorial(k)
    ranges = []
    if dom.lo < 0:
        xk = _power_range(dom.lo, min(dom.hi, Fraction(0)), k)
        ranges.append(_corners(RatInterval(1 + dom.lo, 1), xk))
    if dom.hi > 0:
        xk = _power_range(max(dom.lo, Fraction(0)), dom.hi, k)
        ranges.append(_corners(RatInterval(1, 3), xk))
    if not ranges:
        return RatInterval(0, 0)
    return RatInterval(min(r.lo for r in ranges) / kf, max(r.hi for r in ranges) / kf)


# -- checker ----------------------------------------------------------------------


def _fail(path: str, reason: str):
    raise CertificateError(path, reason)


def _field(obj, key, path, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        _fail(path, f"missing field {key!r}")
    value = obj[key]
    if kind is not None and (not isinstance(value, kind) or isinstance(value, bool) and kind is int):
        _fail(f"{path}.{key}", f"expected {kind.__name__}")
    return value


@dataclass
class _Record:
    kind: str
    function: str
    cover: RatInterval  # interval the node speaks about
    result: RatInterval | None = None
    direction: str = ""  # for poly_sign nodes: the sign
    method: str = ""
    polynomial: tuple = ()
    node: dict | None = None


class _Checker:
    def __init__(self, cert):
        self.cert = cert
        self.records: list[_Record] = []

    # references

    def ref(self, idx, path, here: int, kind: str | tuple) -> _Record:
        if not isinstance(idx, int) or isinstance(idx, bool) or not 0 <= idx < here:
            _fail(path, f"reference {idx!r} does not point to an earlier node")
        rec = self.records[idx]
        kinds = (kind,) if isinstance(kind, str) else kind
        if rec.kind not in kinds:
            _fail(path, f"node {idx} is a {rec.kind}, expected {' or '.join(kinds)}")
        return rec

    def body(self, fn, path) -> E.Expr:
        if not isinstance(fn, str):
            _fail(path, "function id must be a string")
        try:
            if fn.startswith(DERIVATIVE_PREFIX):
                return E.derivative_expr(formulas.lookup(fn[len(DERIVATIVE_PREFIX):]).body)
            return formulas.lookup(fn).body
        except (KeyError, ValueError) as exc:
            _fail(path, f"unknown or unsupported function {fn!r}: {exc}")

    # node kinds

    def run(self) -> None:
        for i, node in enumerate(self.cert.nodes):
            path = f"$.nodes[{i}]"
            kind = _field(node, "kind", path, str)
            check = getattr(self, "check_" + kind, None)
            if check is None:
                _fail(path, f"unknown node kind {kind!r}")
            self.records.append(check(node, path, i))
        self.check_claims()

    def check_eval(self, node, path, here) -> _Record:
        fn = _field(node, "function", path, str)
        arg = dec_iv(_field(node, "argument", path), path + ".argument")
        body = self.body(fn, path + ".function")
        if "argument_from" in node:
            src = self.ref(node["argument_from"], path + ".argument_from", here, ("aggregate", "uniform", "eval"))
            if src.result != arg:
                _fail(path + ".argument", "argument differs from the referenced result")
        bindings = {}
        for name, idx in sorted(_field(node, "bindings", path, dict).items()):
            src = self.ref(idx, f"{path}.bindings.{name}", here, ("aggregate", "uniform"))
            if src.function != name or not arg.subset_of(src.cover):
                _fail(f"{path}.bindings.{name}", "binding does not bound this name over the argument")
            bindings[name] = src.result
        steps = _field(node, "steps", path, list)
        replay = _Replay(steps, path + ".steps", bindings)
        value = replay.walk(body, arg)
        if replay.pos != len(steps):
            _fail(f"{path}.steps[{replay.pos}]", "extra steps")
        if dec_iv(_field(node, "result", path), path + ".result") != value:
            _fail(path + ".result", "result differs from the replayed value")
        return _Record("eval", fn, arg, value, node=node)

    def check_poly_sign(self, node, path, here) -> _Record:
        coeffs = [dec_q(c, f"{path}.polynomial") for c in _field(node, "polynomial", path, list)]
        iv = dec_iv(_field(node, "interval", path), path + ".interval")
        sign = _field(node, "sign", path, str)
        if sign not in ("positive", "negative"):
            _fail(path + ".sign", f"unknown sign {sign!r}")
        at = iv.lo
        for j, piece in enumerate(_field(node, "pieces", path, list)):
            pp = f"{path}.pieces[{j}]"
            sub = dec_iv(_field(piece, "interval", pp), pp + ".interval")
            enc = dec_iv(_field(piece, "enclosure", pp), pp + ".enclosure")
            if sub.lo != at:
                _fail(pp, "pieces do not tile the interval")
            if P.horner_interval(coeffs, sub) != enc:
                _fail(pp + ".enclosure", "Horner enclosure does not replay")
            if not (enc.lo > 0 if sign == "positive" else enc.hi < 0):
                _fail(pp + ".enclosure", f"enclosure is not {sign}")
            at = sub.hi
        if at != iv.hi or iv.is_point():
            _fail(path + ".pieces", "pieces do not cover the interval")
        return _Record("poly_sign", "", iv, direction=sign, polynomial=P.poly(coeffs), node=node)

    def check_monotone(self, node, path, here) -> _Record:
        fn = _field(node, "function", path, str)
        iv = dec_iv(_field(node, "interval", path), path + ".interval")
        direction = _field(node, "direction", path, str)
        method = _field(node, "method", path, str)
        if direction not in ("increasing", "decreasing"):
            _fail(path + ".direction", f"unknown direction {direction!r}")
        body = self.body(fn, path + ".function")
        if method == "constant":
            if E.has_var(body):
                _fail(path + ".method", f"{fn} depends on t")
        elif method == "factored":
            self._check_factored(node, path, here, body, iv, direction)
        elif method == "derivative_enclosure":
            at = iv.lo
            want = DERIVATIVE_PREFIX + fn
            for j, piece in enumerate(_field(node, "pieces", path, list)):
                pp = f"{path}.pieces[{j}]"
                sub = dec_iv(_field(piece, "interval", pp), pp + ".interval")
                ev = self.ref(_field(piece, "eval", pp), pp + ".eval", here, "eval")
                if ev.function != want or ev.cover != sub:
                    _fail(pp + ".eval", f"expected an enclosure of {want} on this piece")
                if not (ev.result.lo > 0 if direction == "increasing" else ev.result.hi < 0):
                    _fail(pp + ".eval", "derivative enclosure does not have the claimed sign")
                if sub.lo != at:
                    _fail(pp, "pieces do not tile the interval")
                at = sub.hi
            if at != iv.hi or iv.is_point():
                _fail(path + ".pieces", "pieces do not cover the interval")
        else:
            _fail(path + ".method", f"unknown method {method!r}")
        return _Record("monotone", fn, iv, direction=direction, method=method, node=node)

    def _check_factored(self, node, path, here, body, iv, direction):
        constant = dec_q(_field(node, "constant", path), path + ".constant")
        exp_factor = _field(node, "exp_factor", path, bool)
        if constant == 0:
            _fail(path + ".constant", "constant must be non-zero")
        num, den = P.poly([constant]), P.ONE
        sign = 1 if constant > 0 else -1
        for j, f in enumerate(_field(node, "factors", path, list)):
            fp = f"{path}.factors[{j}]"
            coeffs = P.poly(dec_q(c, fp + ".polynomial") for c in _field(f, "polynomial", fp, list))
            e = _field(f, "exponent", fp, int)
            ps = self.ref(_field(f, "sign", fp), fp + ".sign", here, "poly_sign")
            if ps.polynomial != coeffs or not iv.subset_of(ps.cover):
                _fail(fp + ".sign", "sign certificate is for another polynomial or interval")
            if e % 2:
                sign *= 1 if ps.direction == "positive" else -1
            if e >= 0:
                num = P.mul(num, P.power(coeffs, e))
            else:
                den = P.mul(den, P.power(coeffs, -e))
        try:
            rf, g = E.derivative_up_to_positive_factor(body)
        except ValueError as exc:
            _fail(path + ".function", str(exc))
        if (g is not None) != exp_factor:
            _fail(path + ".exp_factor", "exponential factor does not match the derivative")
        if not E.same_rational_function(rf, (num, den)):
            _fail(path + ".factors", "factorization does not expand to the derivative")
        if (sign > 0) != (direction == "increasing"):
            _fail(path + ".direction", "factor signs give the other direction")

    def check_uniform(self, node, path, here) -> _Record:
        fn = _field(node, "function", path, str)
        iv = dec_iv(_field(node, "interval", path), path + ".interval")
        mono = self.ref(_field(node, "monotone", path), path + ".monotone", here, "monotone")
        if mono.function != fn or not iv.subset_of(mono.cover):
            _fail(path + ".monotone", "monotonicity certificate does not cover this bound")
        ends = {}
        for side, x in (("left", iv.lo), ("right", iv.hi)):
            ev = self.ref(_field(node, side, path), f"{path}.{side}", here, "eval")
            if ev.function != fn or ev.cover != RatInterval(x, x):
                _fail(f"{path}.{side}", f"expected {fn} evaluated at {x}")
            ends[side] = ev.result
        if mono.direction == "increasing":
            expect = RatInterval(ends["left"].lo, ends["right"].hi)
        else:
            expect = RatInterval(ends["right"].lo, ends["left"].hi)
        if dec_iv(_field(node, "result", path), path + ".result") != expect:
            _fail(path + ".result", "result differs from the endpoint values")
        return _Record("uniform", fn, iv, expect, node=node)

    def check_aggregate(self, node, path, here) -> _Record:
        fn = _field(node, "function", path, str)
        iv = dec_iv(_field(node, "interval", path), path + ".interval")
        recipe = formulas.SUMMANDS.get(fn) or formulas.COMPOSITES.get(fn)
        if recipe is None:
            _fail(path + ".function", f"{fn!r} is not a known sum")
        terms = _field(node, "terms", path, list)
        if len(terms) != len(recipe):
            _fail(path + ".terms", f"{fn} has {len(recipe)} terms")
        total = RatInterval(0, 0)
        for j, (term, (want, want_sign)) in enumerate(zip(terms, recipe)):
            tp = f"{path}.terms[{j}]"
            rec = self.ref(_field(term, "node", tp), tp + ".node", here, ("uniform", "aggregate"))
            sign = _field(term, "sign", tp, int)
            if rec.function != want or sign != want_sign:
                _fail(tp, f"expected {'+' if want_sign > 0 else '-'}{want}")
            if not iv.subset_of(rec.cover):
                _fail(tp, "term bound does not cover the interval")
            total = total + (rec.result if sign > 0 else -rec.result)
        if dec_iv(_field(node, "result", path), path + ".result") != total:
            _fail(path + ".result", "result differs from the signed sum")
        return _Record("aggregate", fn, iv, total, node=node)

    def check_root_bracket(self, node, path, here) -> _Record:
        fn = _field(node, "function", path, str)
        target = dec_q(_field(node, "target", path), path + ".target")
        br = dec_iv(_field(node, "bracket", path), path + ".bracket")
        mono = self.ref(_field(node, "monotone", path), path + ".monotone", here, "monotone")
        if mono.function != fn or mono.method == "constant" or not br.subset_of(mono.cover):
            _fail(path + ".monotone", "monotonicity certificate does not cover the bracket")
        vals = {}
        for side, x in (("left", br.lo), ("right", br.hi)):
            ev = self.ref(_field(node, side, path), f"{path}.{side}", here, "eval")
            if ev.function != fn or ev.cover != RatInterval(x, x):
                _fail(f"{path}.{side}", f"expected {fn} evaluated at {x}")
            vals[side] = ev.result
        low, high = (vals["left"], vals["right"]) if mono.direction == "increasing" else (vals["right"], vals["left"])
        if not (low.hi < target < high.lo):
            _fail(path, f"no certified sign change of {fn} - {target} across the bracket")
        return _Record("root_bracket", fn, br, br, node=node)

    # claims

    def check_claims(self) -> None:
        claims = self.cert.claims
        if sorted(claims) != sorted(CLAIMS):
            _fail("$.claims", f"expected exactly the claims {list(CLAIMS)}")
        recs, ids = {}, {}
        for name in CLAIMS:
            cp = f"$.claims.{name}"
            idx = _field(claims[name], "node", cp)
            rec = self.ref(idx, cp + ".node", len(self.records), ("root_bracket", "uniform", "aggregate", "eval"))
            if dec_iv(_field(claims[name], "value", cp), cp + ".value") != rec.result:
                _fail(cp + ".value", "value differs from the node result")
            recs[name], ids[name] = rec, idx

        def expect(name, kind, fn):
            if recs[name].kind != kind or recs[name].function != fn:
                _fail(f"$.claims.{name}", f"must be a {kind} node for {fn}")

        expect("t0", "root_bracket", "Y")
        t0 = recs["t0"].result
        node = recs["t0"].node
        if dec_q(node["target"]) != 1:
            _fail("$.claims.t0", "t0 must solve Y(t) = 1")
        width = dec_q(_field(self.cert.config, "t0_width", "$.config"), "$.config.t0_width")
        if t0.width > width:
            _fail("$.claims.t0", "bracket is wider than the configured width")
        if not t0.subset_of(dec_iv(_field(self.cert.config, "seed_bracket", "$.config"), "$.config.seed_bracket")):
            _fail("$.claims.t0", "bracket leaves the seed bracket")
        for name, kind, fn in (
            ("R1", "uniform", "xi"),
            ("B0_at_t0", "aggregate", "B0"),
            ("B2_at_t0", "aggregate", "B2"),
            ("A_at_t0", "aggregate", "A"),
            ("nu", "aggregate", "nu"),
        ):
            expect(name, kind, fn)
            if not t0.subset_of(recs[name].cover):
                _fail(f"$.claims.{name}", "bound does not cover t0")
        nu_terms = [term["node"] for term in recs["nu"].node["terms"]]
        if nu_terms != [ids["R1"], ids["B0_at_t0"], ids["B2_at_t0"]]:
            _fail("$.claims.nu", "nu must combine the claimed R1, B0 and B2")
        expect("exp_neg_nu", "eval", "exp_neg")
        if recs["exp_neg_nu"].node.get("argument_from") != ids["nu"]:
            _fail("$.claims.exp_neg_nu", "argument must be the claimed nu")
        expect("rho", "eval", "r")
        if not t0.subset_of(recs["rho"].cover):
            _fail("$.claims.rho", "argument does not cover t0")
        if recs["rho"].node.get("bindings") != {"A": ids["A_at_t0"]}:
            _fail("$.claims.rho", "A must be bound to the claimed A")


class _Replay:
    """Walks an expression in post-order, consuming one stored step per node."""

    def __init__(self, steps: list, path: str, bindings: dict):
        self.steps = steps
        self.path = path
        self.bindings = bindings
        self.pos = 0

    def take(self, op: str):
        p = f"{self.path}[{self.pos}]"
        if self.pos >= len(self.steps):
            _fail(p, f"missing step for {op}")
        step = self.steps[self.pos]
        self.pos += 1
        if _field(step, "op", p, str) != op:
            _fail(p + ".op", f"expected {op}, found {step['op']!r}")
        return step, p

    def finish(self, op: str, value: RatInterval, evidence_check=None) -> RatInterval:
        step, p = self.take(op)
        evidence = _field(step, "evidence", p, list)
        if evidence_check is None:
            if evidence:
                _fail(p + ".evidence", f"{op} carries no evidence")
        else:
            value = evidence_check(evidence, p + ".evidence")
        if dec_iv(_field(step, "value", p), p + ".value") != value:
            _fail(p + ".value", f"{op} value does not replay")
        return value

    def walk(self, e: E.Expr, x: RatInterval) -> RatInterval:
        if isinstance(e, E.Named):
            if e.name in self.bindings:
                step, p = self.take("bound:" + e.name)
                if dec_iv(_field(step, "value", p), p + ".value") != self.bindings[e.name]:
                    _fail(p + ".value", f"bound value of {e.name} differs from the referenced node")
                return self.bindings[e.name]
            return self.walk(e.body, x)
        op = E.op_name(e)
        if isinstance(e, E.Var):
            return self.finish(op, x)
        if isinstance(e, E.Const):
            return self.finish(op, RatInterval(e.value, e.value))
        if isinstance(e, E.PolyNode):
            return self.finish(op, P.horner_interval(e.coeffs, x))
        if isinstance(e, E.BINARY):
            a = self.walk(e.a, x)
            b = self.walk(e.b, x)
            if isinstance(e, E.Add):
                v = a + b
            elif isinstance(e, E.Sub):
                v = a - b
            elif isinstance(e, E.Mul):
                v = a * b
            else:
                if not (b.lo > 0 or b.hi < 0):
                    _fail(f"{self.path}[{self.pos}]", f"divisor {e.b} may vanish")
                v = a / b
            return self.finish(op, v)
        if isinstance(e, E.Neg):
            return self.finish(op, -self.walk(e.a, x))
        if isinstance(e, E.Pow):
            a = self.walk(e.a, x)
            if e.n < 0 and not (a.lo > 0 or a.hi < 0):
                _fail(f"{self.path}[{self.pos}]", f"{e.a} may vanish under a negative power")
            return self.finish(op, a**e.n)
        if isinstance(e, E.Log):
            a = self.walk(e.a, x)
            return self.finish(op, None, lambda ev, p: _check_log(ev, p, a))
        if isinstance(e, E.Exp):
            a = self.walk(e.a, x)
            return self.finish(op, None, lambda ev, p: _check_exp(ev, p, a))
        if isinstance(e, E.Sqrt):
            a = self.walk(e.a, x)
            return self.finish(op, None, lambda ev, p: _check_sqrt(ev, p, a))
        _fail(self.path, f"cannot replay {type(e).__name__}")


def _endpoints(a: RatInterval) -> list[Fraction]:
    return [a.lo] if a.lo == a.hi else [a.lo, a.hi]


def _evidence_list(ev: list, path: str, a: RatInterval) -> list[Fraction]:
    points = _endpoints(a)
    if len(ev) != len(points):
        _fail(path, f"expected {len(points)} evidence records")
    return points


def _taylor(rec, path, fn):
    if _field(rec, "type", path, str) != "taylor" or _field(rec, "function", path, str) != fn:
        _fail(path, f"expected {fn} series evidence")
    degree = _field(rec, "degree", path, int)
    rem = dec_iv(_field(rec, "remainder", path), path + ".remainder")
    dom = dec_iv(_field(rec, "domain", path), path + ".domain")
    res = dec_iv(_field(rec, "result", path), path + ".result")
    point = dec_q(_field(rec, "expansion_point", path), path + ".expansion_point")
    return degree, rem, dom, res, point


def _check_log(ev: list, path: str, a: RatInterval) -> RatInterval:
    if a.lo <= 0:
        _fail(path, "log argument is not positive")
    out = []
    for j, x in enumerate(_evidence_list(ev, path, a)):
        p = f"{path}[{j}]"
        n, rem, dom, res, u = _taylor(ev[j], p, "log")
        if dom != RatInterval(x, x):
            _fail(p + ".domain", f"expected the point {x}")
        if u != (x - 1) / (x + 1):
            _fail(p + ".expansion_point", "u is not (x - 1)/(x + 1)")
        if n < 1 or n % 2 == 0:
            _fail(p + ".degree", "log series degree must be odd and positive")
        tail = _atanh_tail(u, n)
        want = RatInterval(0, tail) if u >= 0 else RatInterval(-tail, 0)
        if rem != want:
            _fail(p + ".remainder", "tail bound does not replay")
        s = _atanh_sum(u, n)
        if res != RatInterval(s + want.lo, s + want.hi).round_out():
            _fail(p + ".result", "log enclosure does not replay")
        out.append(res)
    return RatInterval(out[0].lo, out[-1].hi)


def _check_exp(ev: list, path: str, a: RatInterval) -> RatInterval:
    if len(ev) != 1:
        _fail(path, "expected one exp evidence record")
    p = path + "[0]"
    k, rem, dom, res, c = _taylor(ev[0], p, "exp")
    if c != 0:
        _fail(p + ".expansion_point", "exp is expanded about 0")
    if dom != a:
        _fail(p + ".domain", "domain differs from the argument enclosure")
    if not (-1 < dom.lo and dom.hi < 1):
        _fail(p + ".domain", "argument outside (-1, 1)")
    if k < 1:
        _fail(p + ".degree", "degree must be positive")
    want = _exp_remainder(dom, k)
    if rem != want:
        _fail(p + ".remainder", "remainder bracket does not replay")
    lo = _taylor_exp(dom.lo, k) + want.lo
    hi = _taylor_exp(dom.hi, k) + want.hi
    if lo > hi or res != RatInterval(lo, hi).round_out():
        _fail(p + ".result", "exp enclosure does not replay")
    return res


def _check_sqrt(ev: list, path: str, a: RatInterval) -> RatInterval:
    if a.lo < 0:
        _fail(path, "sqrt argument is negative")
    out = []
    for j, x in enumerate(_evidence_list(ev, path, a)):
        p = f"{path}[{j}]"
        if _field(ev[j], "type", p, str) != "sqrt":
            _fail(p, "expected sqrt evidence")
        if dec_q(_field(ev[j], "radicand", p), p + ".radicand") != x:
            _fail(p + ".radicand", f"expected {x}")
        root = dec_iv(_field(ev[j], "root", p), p + ".root")
        squares = _field(ev[j], "squares", p, list)
        if len(squares) != 2 or [dec_q(q, p + ".squares") for q in squares] != [root.lo**2, root.hi**2]:
            _fail(p + ".squares", "squares do not replay")
        if root.lo < 0 or not root.lo**2 <= x <= root.hi**2:
            _fail(p + ".root", "root interval does not bracket the square root")
        out.append(root)
    return RatInterval(out[0].lo, out[-1].hi)


def verify(data: bytes | str) -> Verdict:
    """Replay a serialized certificate; returns accept or the first failing path."""
    try:
        cert = deserialize(data)
        checker = _Checker(cert)
        checker.run()
    except CertificateError as exc:
        return Verdict(False, exc.path, exc.reason)
    except Exception as exc:  # malformed input must never crash the checker
        where = f"$.nodes[{len(checker.records)}]" if "checker" in locals() else "$"
        return Verdict(False, where, f"{type(exc).__name__}: {exc}")
    return Verdict(True)
