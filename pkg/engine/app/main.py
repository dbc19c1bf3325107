"""Command line entry point: ``relhilb betti|plane|enumerate|reduce|verify``.

Exit codes: 0 success, 1 a check failed or a table is not a valid Betti table,
2 bad arguments or unparseable input.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Dict, Optional, Sequence

from pydantic import BaseModel, ValidationError

from app.core.config import EXPANSION_CONVENTIONS, OUTPUT_FORMATS, get_settings
from app.core.errors import (
    ExpressionParseError,
    InvalidCycle,
    NegativeOrFractionalBetti,
    NonTermination,
    PreconditionViolated,
    RelHilbError,
)
from app.core.logging import configure_logging
from app.render import (
    betti_table_csv,
    betti_table_text,
    enumeration_csv,
    enumeration_text,
    reduction_csv,
    reduction_text,
    verification_csv,
    verification_text,
)
from app.schemas.betti import LINE, PLANE, CurveBetti, SurfaceBetti
from app.schemas.reports import (
    BettiRow,
    BettiTableReport,
    CertificateEntrySchema,
    CycleRow,
    EnumerationReport,
    OrderCheck,
    PushOrderResult,
    ReductionReport,
)
from app.services.cycle_model import (
    CycleExpr,
    RelationKind,
    degree,
    enumerate_canonical_cycles,
    enumerate_cycles,
    enumerate_normal_cycles,
    length,
    tau_degree,
)
from app.services.goettsche import betti_table, plane_relative_series, relative_series
from app.services.laurent_series import QSeries
from app.services.notation import format_coefficient, format_cycle, format_expression, parse_expression
from app.services.relations import ConventionLike, pushable_targets, resolve_convention
from app.services.rewriting import CertificateEntry, push_orders_agree, reduce_expression
from app.services.verify import run_verification

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

ENUMERATORS = {
    "all": enumerate_cycles,
    "canonical": enumerate_canonical_cycles,
    "normal": enumerate_normal_cycles,
}


class UsageError(Exception):
    """Arguments parsed but make no sense together."""


def _emit(report: BaseModel, fmt: str, text: Callable, as_csv: Callable) -> None:
    if fmt == "json":
        print(report.json(indent=2))
    elif fmt == "csv":
        print(as_csv(report))
    else:
        print(text(report))


def _max_n(args: argparse.Namespace) -> int:
    return args.max_n if args.max_n is not None else get_settings().max_n


def _check_cap(n: int, args: argparse.Namespace) -> None:
    cap = _max_n(args)
    if n > cap:
        raise UsageError(f"n={n} exceeds the configured cap {cap} (raise it with --max-n or RELHILB_MAX_N)")


# -- betti / plane -------------------------------------------------------------


def _betti_report(source: str, s: SurfaceBetti, d: CurveBetti, n_max: int, series: QSeries) -> BettiTableReport:
    rows = [BettiRow(n=n, betti=betti_table(series, n)) for n in range(n_max + 1)]
    return BettiTableReport(
        source=source, surface=list(s.as_tuple()), curve=list(d.as_tuple()), order=series.order, rows=rows
    )


def cmd_betti(args: argparse.Namespace) -> int:
    if args.n < 0:
        raise UsageError(f"--n must be non-negative (got {args.n})")
    _check_cap(args.n, args)
    try:
        surface = SurfaceBetti.of(*args.surface)
        curve = CurveBetti.of(*args.curve)
    except ValidationError as exc:
        raise UsageError(f"invalid Betti numbers: {exc.errors()[0]['msg']}") from exc
    order = args.n + get_settings().truncation_padding
    report = _betti_report("relative Hilbert scheme", surface, curve, args.n, relative_series(surface, curve, order))
    _emit(report, args.format, betti_table_text, betti_table_csv)
    return EXIT_OK


def cmd_plane(args: argparse.Namespace) -> int:
    if args.n < 0:
        raise UsageError(f"--n must be non-negative (got {args.n})")
    _check_cap(args.n, args)
    order = args.n + get_settings().truncation_padding
    report = _betti_report("projective plane relative to a line", PLANE, LINE, args.n, plane_relative_series(order))
    _emit(report, args.format, betti_table_text, betti_table_csv)
    return EXIT_OK


# -- enumerate -----------------------------------------------------------------


def cmd_enumerate(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise UsageError(f"n must be at least 1 (got {args.n})")
    _check_cap(args.n, args)
    cycles = ENUMERATORS[args.filter](args.n)
    report = EnumerationReport(
        n=args.n,
        filter=args.filter,
        count=len(cycles),
        cycles=[
            CycleRow(cycle=format_cycle(c), length=length(c), tau=tau_degree(c), degree=degree(c)) for c in cycles
        ],
    )
    _emit(report, args.format, enumeration_text, enumeration_csv)
    return EXIT_OK


# -- reduce --------------------------------------------------------------------


def _certificate_row(entry: CertificateEntry) -> CertificateEntrySchema:
    relation = entry.relation
    target = None
    if relation.bubble_index is None and relation.mults:
        dim = 0 if relation.kind is RelationKind.PUSH_POINT else 1
        target = f"a{dim}[{relation.mults[0]}]"
    return CertificateEntrySchema(
        kind=relation.kind.value,
        source=format_cycle(relation.source),
        bubble_index=relation.bubble_index,
        mults=list(relation.mults),
        target=target,
        coefficient=format_coefficient(entry.coefficient),
    )


def _order_check(expr: CycleExpr, convention: ConventionLike) -> OrderCheck:
    if len(expr) != 1 or len(pushable_targets(expr.terms[0][0])) < 2:
        return OrderCheck(applicable=False, ok=True)
    cycle, coefficient = expr.terms[0]
    agree, results = push_orders_agree(cycle, convention)
    return OrderCheck(
        applicable=True,
        ok=agree,
        results=[
            PushOrderResult(target=str(target.factor), normal_form=format_expression(form.scale(coefficient)))
            for target, form in results.items()
        ],
    )


def cmd_reduce(args: argparse.Namespace) -> int:
    try:
        expr = parse_expression(args.expr)
    except (ExpressionParseError, InvalidCycle) as exc:
        raise UsageError(f"cannot parse {args.expr!r}: {exc}") from exc
    lengths = sorted(expr.lengths())
    if len(lengths) > 1:
        raise UsageError(f"terms of different lengths {lengths} cannot be reduced together")
    if lengths:
        _check_cap(lengths[0], args)

    convention = resolve_convention(args.convention)
    reduction = reduce_expression(expr, convention=convention)
    verified = reduction.verify()
    report = ReductionReport(
        input=format_expression(expr),
        normal_form=format_expression(reduction.expr),
        convention=convention.value,
        steps=reduction.steps,
        certificate_verified=verified,
        certificate=[_certificate_row(entry) for entry in reduction.certificate],
        order_check=_order_check(expr, convention) if args.check_order else None,
    )
    _emit(report, args.format, reduction_text, reduction_csv)
    if not verified or (report.order_check is not None and not report.order_check.ok):
        return EXIT_FAILED
    return EXIT_OK


# -- verify --------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    bounds: Dict[str, int] = {
        "--census": args.census,
        "--rank": args.rank,
        "--reduction": args.reduction,
        "--order-check": args.order_check,
    }
    for flag, value in bounds.items():
        if value < 0 or (flag in ("--census", "--rank") and value < 1):
            raise UsageError(f"{flag} must be at least {1 if flag in ('--census', '--rank') else 0} (got {value})")
        _check_cap(value, args)
    report = run_verification(
        census_n=args.census,
        rank_n=args.rank,
        reduction_n=args.reduction,
        order_n=args.order_check,
        convention=args.convention,
    )
    _emit(report, args.format, verification_text, verification_csv)
    return EXIT_OK if report.ok else EXIT_FAILED


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=settings.default_format)
    common.add_argument("--max-n", type=int, default=None, help="override RELHILB_MAX_N")

    with_convention = argparse.ArgumentParser(add_help=False)
    with_convention.add_argument(
        "--convention",
        choices=EXPANSION_CONVENTIONS,
        default=None,
        help="how identical points distribute over two bubbles (default RELHILB_EXPANSION)",
    )

    parser = argparse.ArgumentParser(prog="relhilb", description="Relative Hilbert schemes of points on surfaces")
    commands = parser.add_subparsers(dest="command", required=True)

    betti = commands.add_parser("betti", parents=[common], help="Betti numbers of S^[n] relative to D")
    betti.add_argument("--surface", type=int, nargs=5, metavar="B", default=list(PLANE.as_tuple()))
    betti.add_argument("--curve", type=int, nargs=3, metavar="B", default=list(LINE.as_tuple()))
    betti.add_argument("--n", type=int, default=3, help="last row of the table")
    betti.set_defaults(handler=cmd_betti)

    plane = commands.add_parser("plane", parents=[common], help="the projective plane relative to a line")
    plane.add_argument("--n", type=int, default=4)
    plane.set_defaults(handler=cmd_plane)

    enumerate_ = commands.add_parser("enumerate", parents=[common], help="list product classes of length n")
    enumerate_.add_argument("n", type=int)
    enumerate_.add_argument("--filter", choices=sorted(ENUMERATORS), default="normal")
    enumerate_.set_defaults(handler=cmd_enumerate)

    reduce_ = commands.add_parser(
        "reduce", parents=[common, with_convention], help="reduce a combination of classes to normal form"
    )
    reduce_.add_argument("expr", help='e.g. "a2[1]*b0^1[2] - 3 b1^1[1]*b1^2[1]"')
    reduce_.add_argument("--check-order", action="store_true", help="also reduce once per first push and compare")
    reduce_.set_defaults(handler=cmd_reduce)

    verify = commands.add_parser("verify", parents=[common, with_convention], help="census and rank checks")
    verify.add_argument("--census", type=int, default=4, help="census against the series for n <= N")
    verify.add_argument("--rank", type=int, default=2, help="relation rank check for n <= N")
    verify.add_argument("--reduction", type=int, default=0, help="reduce every class and every relation for n <= N")
    verify.add_argument("--order-check", type=int, default=0, help="push order independence for n <= N")
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"relhilb {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionViolated, ExpressionParseError) as exc:
        print(f"relhilb {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NegativeOrFractionalBetti, NonTermination) as exc:
        logger.error(f"{args.command} failed: {exc}")
        return EXIT_FAILED
    except RelHilbError as exc:
        logger.exception(f"{args.command} failed: {exc}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
