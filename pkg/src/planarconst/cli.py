"""Command line interface: ``planarconst compute | verify | show``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import checker
from .certificate import dec_iv, deserialize, serialize
from .errors import DomainError, ParseError, PlanarConstError
from .exact import outward_round, parse_rational
from .pipeline import Config, DEFAULT_T0_WIDTH, compute_all
from .transcendental import DEFAULT_BUDGET

CONSTANTS = ("t0", "nu", "rho", "exp-neg-nu")


def _rational(text: str):
    try:
        q = parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if q <= 0:
        raise argparse.ArgumentTypeError(f"{text} must be positive")
    return q


def _digits(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not 1 <= n <= 200:
        raise argparse.ArgumentTypeError("digits must be between 1 and 200")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planarconst", description="Certified enclosures of t0, nu, rho and exp(-nu)."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    comp = sub.add_parser("compute", help="compute enclosures and optionally write a certificate")
    comp.add_argument("--constant", choices=CONSTANTS + ("all",), default="all")
    comp.add_argument("--budget", type=_rational, default=DEFAULT_BUDGET, metavar="RAT",
                      help="error budget for each log and sqrt enclosure (default 1/10^13)")
    comp.add_argument("--t0-width", type=_rational, default=DEFAULT_T0_WIDTH, metavar="RAT",
                      help="maximal width of the bracket for t0 (default 2/10^10)")
    comp.add_argument("--cert-out", type=Path, metavar="PATH", help="write the certificate here")
    comp.add_argument("--digits", type=_digits, default=11, metavar="N")

    ver = sub.add_parser("verify", help="replay a certificate")
    ver.add_argument("path", type=Path)

    show = sub.add_parser("show", help="print the claims of a certificate")
    show.add_argument("path", type=Path)
    show.add_argument("--digits", type=_digits, default=11, metavar="N")
    return parser


def _compute(args, parser) -> int:
    cfg = Config(budget=args.budget, t0_width=args.t0_width)
    try:
        cfg.validate()
    except DomainError as exc:
        parser.error(str(exc))
    report = compute_all(cfg)
    wanted = CONSTANTS if args.constant == "all" else (args.constant,)
    values = report.constants()
    for name in wanted:
        print(f"{name} = {outward_round(values[name], args.digits)}")
    if args.cert_out is not None:
        args.cert_out.write_bytes(serialize(report.certificate))
    return 0


def _read(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise PlanarConstError(f"cannot read {path}: {exc.strerror}") from None


def _verify(args) -> int:
    verdict = checker.verify(_read(args.path))
    print(verdict)
    return 0 if verdict.accepted else 1


def _show(args) -> int:
    cert = deserialize(_read(args.path))
    for name, claim in cert.claims.items():
        value = dec_iv(claim["value"], f"$.claims.{name}")
        print(f"{name} = {outward_round(value, args.digits)}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compute":
            return _compute(args, parser)
        if args.command == "verify":
            return _verify(args)
        return _show(args)
    except PlanarConstError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
