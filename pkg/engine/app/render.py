"""Plain-text and CSV renderings of the report models. JSON goes through pydantic."""
from __future__ import annotations

import csv
import io
from typing import Iterable, List, Sequence

from app.schemas.reports import (
    BettiTableReport,
    EnumerationReport,
    ReductionReport,
    VerificationReport,
)
from app.services.notation import format_coefficient, parse_expression


def _csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue().rstrip("\n")


def _grid(header: Sequence[str], rows: List[Sequence[object]]) -> str:
    cells = [list(map(str, header))] + [list(map(str, row)) for row in rows]
    widths = [max(len(row[k]) for row in cells) for k in range(len(header))]
    lines = ["  ".join(cell.rjust(width) for cell, width in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines)


def betti_table_text(report: BettiTableReport) -> str:
    # odd degrees appear when the surface or curve has odd cohomology
    degrees = sorted({d for row in report.rows for d in row.betti}) or [0]
    rows = [[row.n] + [row.betti.get(d, 0) for d in degrees] for row in report.rows]
    title = f"{report.source}: surface {report.surface}, curve {report.curve}"
    return title + "\n" + _grid(["n"] + [f"H^{d}" for d in degrees], rows)


def betti_table_csv(report: BettiTableReport) -> str:
    return _csv(
        ["n", "degree", "betti"],
        ((row.n, d, b) for row in report.rows for d, b in sorted(row.betti.items())),
    )


def enumeration_text(report: EnumerationReport) -> str:
    rows = [[c.cycle, c.length, c.tau, c.degree] for c in report.cycles]
    body = _grid(["cycle", "length", "tau", "degree"], rows)
    return f"{body}\n{report.count} {report.filter} cycles of length {report.n}"


def enumeration_csv(report: EnumerationReport) -> str:
    return _csv(["cycle", "length", "tau", "degree"], ((c.cycle, c.length, c.tau, c.degree) for c in report.cycles))


def reduction_text(report: ReductionReport) -> str:
    lines = [
        f"input:        {report.input}",
        f"normal form:  {report.normal_form}",
        f"convention:   {report.convention}",
        f"steps:        {report.steps}",
        f"certificate:  {'verified' if report.certificate_verified else 'DOES NOT VERIFY'} "
        f"({len(report.certificate)} relations)",
    ]
    for entry in report.certificate:
        where = f" bubble {entry.bubble_index}" if entry.bubble_index is not None else ""
        target = f" push {entry.target}" if entry.target else ""
        lines.append(f"  {entry.coefficient:>8}  {entry.kind} from {entry.source}{where}{target} mults {entry.mults}")
    if report.order_check is not None:
        check = report.order_check
        if not check.applicable:
            lines.append("push order:   not applicable (fewer than two pushable points)")
        else:
            lines.append(f"push order:   {'independent' if check.ok else 'DEPENDS ON ORDER'}")
            for result in check.results:
                lines.append(f"  {result.target} first -> {result.normal_form}")
    return "\n".join(lines)


def reduction_csv(report: ReductionReport) -> str:
    expr = parse_expression(report.normal_form)
    return _csv(["cycle", "coefficient"], ((str(c), format_coefficient(v)) for c, v in expr))


def verification_text(report: VerificationReport) -> str:
    lines = [f"verification {'PASSED' if report.ok else 'FAILED'} ({report.convention} expansion)"]
    for census in (report.census, report.canonical_census):
        if census is None:
            continue
        lines.append(f"{census.kind} census vs series, n <= {census.n_max}: {'ok' if census.ok else 'MISMATCH'}")
        for miss in census.discrepancies:
            lines.append(f"  n={miss.n} degree {miss.degree}: census {miss.census}, series {miss.series}")
    if report.ranks:
        rows = [
            [
                r.n,
                r.degree,
                r.num_cycles,
                r.relation_rank,
                r.num_cycles - r.relation_rank,
                r.betti_from_series,
                "ok" if r.consistent else "MISMATCH",
            ]
            for r in report.ranks
        ]
        lines.append(_grid(["n", "degree", "cycles", "rank", "quotient", "betti", ""], rows))
    for check in report.checks:
        lines.append(f"{check.name}: {'ok' if check.ok else 'FAILED'} ({check.checked} checked)")
        lines.extend(f"  {failure}" for failure in check.failures)
    return "\n".join(lines)


def verification_csv(report: VerificationReport) -> str:
    rows: List[Sequence[object]] = []
    for census in (report.census, report.canonical_census):
        if census is None:
            continue
        for row in census.rows:
            for d in sorted(set(row.census) | set(row.series)):
                found, expected = row.census.get(d, 0), row.series.get(d, 0)
                rows.append([f"{census.kind} census", row.n, d, expected, found, found == expected])
    for r in report.ranks:
        rows.append(["rank", r.n, r.degree, r.betti_from_series, r.num_cycles - r.relation_rank, r.consistent])
    for check in report.checks:
        rows.append([check.name, "", "", "", check.checked, check.ok])
    return _csv(["check", "n", "degree", "expected", "found", "ok"], rows)


__all__ = [
    "betti_table_csv",
    "betti_table_text",
    "enumeration_csv",
    "enumeration_text",
    "reduction_csv",
    "reduction_text",
    "verification_csv",
    "verification_text",
]
