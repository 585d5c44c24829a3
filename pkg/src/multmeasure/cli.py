"""Command-line front end: ``measure``, ``cover``, ``verify`` and ``eval``.

Reports are compact JSON on stdout (indented with ``--pretty``). Exit status
is 0 on success, 1 when a checked property fails, and 2 for usage, parse and
domain errors, which are reported as JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import dsl
from .errors import MeasureError
from .families import GeneratorFamily
from .intervals import IntervalSet
from .measure import cover_value, greedy_cover, measure_report, mu, mu_countable
from .mvalue import ExactRational, format_mvalue, mv_compare
from .verify import SUITE_NAMES, run_suite

TOL_ENV = "MULTMEASURE_TOL"
DEFAULT_TOL = 1e-10

EXIT_OK, EXIT_PROPERTY, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # report as JSON with exit status 2
        raise _UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _tolerance(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def build_parser(default_tol: float) -> argparse.ArgumentParser:
    parser = _Parser(prog="multmeasure", description=__doc__.splitlines()[0])
    parser.add_argument("--pretty", action="store_true", help="indent the JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("measure", help="measure a set or a countable family")
    m.add_argument("expr")
    m.add_argument("--float", dest="as_float", action="store_true", help="print the value as a decimal")
    m.add_argument("--log-domain", action="store_true", help="print the log of the value")
    m.add_argument(
        "--tol", type=_tolerance, default=default_tol, help=f"log tolerance for families (env {TOL_ENV})"
    )

    c = sub.add_parser("cover", help="print a greedy cover and check its bound")
    c.add_argument("expr")
    c.add_argument("--epsilon", type=_rational, required=True)

    v = sub.add_parser("verify", help="run a seeded property suite")
    v.add_argument("--suite", choices=SUITE_NAMES, default="all")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)

    e = sub.add_parser("eval", help="evaluate an expression and print the normalized result")
    e.add_argument("expr")
    for p in (m, c, v, e):
        p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    return parser


def _read_env_tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_TOL
    try:
        return _tolerance(raw)
    except argparse.ArgumentTypeError as exc:
        raise _UsageError(f"{TOL_ENV}: {exc}") from None


def cmd_measure(args: argparse.Namespace) -> tuple[dict, int]:
    value = dsl.eval_text(args.expr)
    if isinstance(value, GeneratorFamily):
        report = mu_countable(value, args.tol)
        status = EXIT_OK if report.certificate["routes_agree"] else EXIT_PROPERTY
    else:
        report = measure_report(value)
        status = EXIT_OK
    return report.to_json(as_float=args.as_float, log_domain=args.log_domain), status


def cmd_cover(args: argparse.Namespace) -> tuple[dict, int]:
    value = dsl.eval_text(args.expr)
    if not isinstance(value, IntervalSet):
        raise _UsageError("cover needs an expression that evaluates to a set in (0, inf)")
    cover = greedy_cover(value, args.epsilon)
    nu = cover_value(cover)
    bound = ExactRational(1 + args.epsilon) * mu(value)
    ok = mv_compare(nu, bound) <= 0
    report = {
        "target": value.to_text(ascii_only=True),
        "epsilon": str(args.epsilon),
        "cover": cover.to_json(),
        "nu": format_mvalue(nu),
        "bound": format_mvalue(bound),
        "within_bound": ok,
    }
    return report, EXIT_OK if ok else EXIT_PROPERTY


def cmd_verify(args: argparse.Namespace) -> tuple[dict, int]:
    if args.trials < 1:
        raise _UsageError("--trials must be at least 1")
    result = run_suite(args.suite, args.trials, args.seed)
    return result.to_json(), EXIT_OK if result.passed else EXIT_PROPERTY


def cmd_eval(args: argparse.Namespace) -> tuple[dict, int]:
    return dsl.describe(dsl.eval_text(args.expr)), EXIT_OK


COMMANDS = {"measure": cmd_measure, "cover": cmd_cover, "verify": cmd_verify, "eval": cmd_eval}


def _dump(obj: Any, pretty: bool) -> str:
    if pretty:
        return json.dumps(obj, indent=2, ensure_ascii=False)
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _error(kind: str, message: str, **extra: Any) -> dict:
    return {"error": {"type": kind, "message": message, **extra}}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    pretty = "--pretty" in argv
    try:
        parser = build_parser(_read_env_tolerance())
        args = parser.parse_args(argv)
        report, status = COMMANDS[args.command](args)
    except _UsageError as exc:
        report, status = _error("UsageError", str(exc)), EXIT_USAGE
    except dsl.DslError as exc:
        report, status = {"error": exc.to_json()}, EXIT_USAGE
    except MeasureError as exc:
        report, status = _error(type(exc).__name__, str(exc)), EXIT_USAGE
    stream = sys.stdout if status != EXIT_USAGE else sys.stderr
    print(_dump(report, pretty), file=stream)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
