"""Cross-checks between the series side and the cycle side.

The normal classes should form a basis of the cohomology of the relative Hilbert
scheme, so three independent counts have to agree degree by degree: the series
coefficient, the number of normal classes, and the number of all product classes
minus the rank of the relations among them.
"""
from __future__ import annotations

import logging
import time
from collections import defaultdict
from fractions import Fraction
from typing import Callable, Dict, List

from app.core.config import get_settings
from app.schemas.betti import LINE, PLANE
from app.schemas.reports import (
    CensusDiscrepancy,
    CensusReport,
    CensusRow,
    CheckReport,
    RankReport,
    VerificationReport,
)

from .cycle_model import (
    CycleClass,
    CycleExpr,
    degree,
    degree_histogram,
    enumerate_canonical_cycles,
    enumerate_cycles,
    enumerate_normal_cycles,
    is_normal,
    tau_degree,
)
from .goettsche import (
    betti_table,
    canonical_form_series,
    normal_form_series,
    plane_relative_series,
    relative_series,
    relative_series_by_strata,
)
from .laurent_series import QSeries
from .linalg import kernel_basis, matrix_rank
from .notation import format_coefficient, format_cycle, format_expression
from .relations import ConventionLike, all_relations, resolve_convention
from .rewriting import normal_form_of, order_check_candidates, push_orders_agree, reduce_expression

logger = logging.getLogger(__name__)


def _series_order(n_max: int) -> int:
    return n_max + get_settings().truncation_padding


def normal_form_census(n: int) -> Dict[int, int]:
    """Degree histogram of the normal classes of length n."""
    return degree_histogram(enumerate_normal_cycles(n))


def canonical_census(n: int) -> Dict[int, int]:
    return degree_histogram(enumerate_canonical_cycles(n))


def _compare_census(
    kind: str, n_max: int, census: Callable[[int], Dict[int, int]], series: QSeries
) -> CensusReport:
    rows: List[CensusRow] = []
    discrepancies: List[CensusDiscrepancy] = []
    for n in range(1, n_max + 1):
        counted = census(n)
        expected = betti_table(series, n)
        for d in sorted(set(counted) | set(expected)):
            if counted.get(d, 0) != expected.get(d, 0):
                discrepancies.append(
                    CensusDiscrepancy(n=n, degree=d, census=counted.get(d, 0), series=expected.get(d, 0))
                )
        rows.append(CensusRow(n=n, census=counted, series=expected, ok=counted == expected))
    ok = not discrepancies
    if not ok:
        logger.warning(f"{kind} census disagrees with the series in {len(discrepancies)} places")
    return CensusReport(kind=kind, n_max=n_max, ok=ok, rows=rows, discrepancies=discrepancies)


def census_vs_series(n_max: int) -> CensusReport:
    """Normal-class census against the closed-form plane series for n = 1..n_max."""
    if n_max < 1:
        raise ValueError(f"n_max must be positive (got {n_max})")
    return _compare_census("normal", n_max, normal_form_census, plane_relative_series(_series_order(n_max)))


def canonical_census_vs_series(n_max: int) -> CensusReport:
    if n_max < 1:
        raise ValueError(f"n_max must be positive (got {n_max})")
    return _compare_census("canonical", n_max, canonical_census, canonical_form_series(_series_order(n_max)))


def _expr_coordinates(expr: CycleExpr, index: Dict[CycleClass, int]) -> Dict[int, Fraction]:
    return {index[cycle]: coefficient for cycle, coefficient in expr}


def relation_rank_check(n: int, convention: ConventionLike = None) -> List[RankReport]:
    """Per degree: #classes - rank(relations) against the series Betti number."""
    if n < 1:
        raise ValueError(f"n must be positive (got {n})")
    convention = resolve_convention(convention)
    expected = betti_table(plane_relative_series(_series_order(n)), n)

    by_degree: Dict[int, List[CycleClass]] = defaultdict(list)
    for cycle in enumerate_cycles(n):
        by_degree[degree(cycle)].append(cycle)
    relations_by_degree: Dict[int, List[CycleExpr]] = defaultdict(list)
    for relation in all_relations(n, convention):
        relations_by_degree[relation.degree].append(relation.expr)

    reports: List[RankReport] = []
    for d in sorted(by_degree):
        columns = by_degree[d]
        index = {cycle: position for position, cycle in enumerate(columns)}
        rows = [_expr_coordinates(expr, index) for expr in relations_by_degree.get(d, [])]
        positions = list(range(len(columns)))
        rank = matrix_rank(rows, positions)
        agree = matrix_rank(rows, positions, reverse=True) == rank
        betti = expected.get(d, 0)
        consistent = agree and len(columns) - rank == betti

        kernel: List[Dict[str, str]] = []
        if not consistent:
            logger.warning(
                f"n={n} degree {d} ({convention.value} convention): {len(columns)} classes, rank {rank}, "
                f"quotient {len(columns) - rank} but the series gives {betti}"
            )
            for vector in kernel_basis(rows, positions):
                kernel.append({format_cycle(columns[k]): format_coefficient(v) for k, v in sorted(vector.items())})
        else:
            logger.debug(f"n={n} degree {d}: {len(columns)} classes, rank {rank}")

        reports.append(
            RankReport(
                n=n,
                degree=d,
                num_cycles=len(columns),
                relation_rank=rank,
                betti_from_series=betti,
                consistent=consistent,
                elimination_orders_agree=agree,
                kernel_basis=kernel,
            )
        )
    return reports


def reduction_consistency(n: int, convention: ConventionLike = None) -> CheckReport:
    """Reduce every class of length n; output must be normal, tau-homogeneous and certified."""
    failures: List[str] = []
    cycles = enumerate_cycles(n)
    for cycle in cycles:
        reduction = reduce_expression(CycleExpr.of(cycle), convention=convention)
        label = format_cycle(cycle)
        if any(not is_normal(c) for c, _ in reduction.expr):
            failures.append(f"{label}: non-normal terms in {format_expression(reduction.expr)}")
        if any(tau_degree(c) != tau_degree(cycle) for c, _ in reduction.expr):
            failures.append(f"{label}: tau degree changed")
        if not reduction.verify():
            failures.append(f"{label}: certificate does not verify")
    return CheckReport(name=f"reduction n={n}", ok=not failures, checked=len(cycles), failures=failures)


def relations_compatible(n: int, convention: ConventionLike = None) -> CheckReport:
    """Every relation must reduce to zero."""
    failures: List[str] = []
    relations = all_relations(n, convention)
    for relation in relations:
        image = normal_form_of(relation.expr, convention)
        if not image.is_zero():
            failures.append(
                f"{relation.kind.value} from {format_cycle(relation.source)} reduces to {format_expression(image)}"
            )
    return CheckReport(name=f"relations vanish n={n}", ok=not failures, checked=len(relations), failures=failures)


def push_order_independence(n_max: int, convention: ConventionLike = None) -> CheckReport:
    """Every class of length <= n_max reaches one normal form whichever point is pushed first."""
    failures: List[str] = []
    checked = 0
    for n in range(1, n_max + 1):
        for cycle in order_check_candidates(enumerate_cycles(n)):
            checked += 1
            agree, results = push_orders_agree(cycle, convention)
            if not agree:
                forms = "; ".join(f"{t.factor} first -> {format_expression(e)}" for t, e in results.items())
                failures.append(f"{format_cycle(cycle)}: {forms}")
    return CheckReport(name=f"push order n<={n_max}", ok=not failures, checked=checked, failures=failures)


def series_identities(order: int) -> CheckReport:
    """The plane series computed four ways must coincide."""
    closed_form = plane_relative_series(order)
    candidates = {
        "relative formula": relative_series(PLANE, LINE, order),
        "sum over bubbles": relative_series_by_strata(PLANE, LINE, order),
        "normal-form count": normal_form_series(order),
    }
    failures = [name for name, series in candidates.items() if series != closed_form]
    return CheckReport(name=f"series identities to q^{order}", ok=not failures, checked=len(candidates), failures=failures)


def poincare_symmetry(n_max: int) -> CheckReport:
    series = plane_relative_series(_series_order(n_max))
    failures = []
    for n in range(1, n_max + 1):
        table = betti_table(series, n)
        if any(table.get(4 * n - d, 0) != b for d, b in table.items()):
            failures.append(f"n={n}: {table}")
    return CheckReport(name=f"Poincare symmetry n<={n_max}", ok=not failures, checked=n_max, failures=failures)


def run_verification(
    *,
    census_n: int,
    rank_n: int,
    reduction_n: int = 0,
    order_n: int = 0,
    convention: ConventionLike = None,
) -> VerificationReport:
    """Run every check up to the given bounds; a bound of 0 skips that check."""
    convention = resolve_convention(convention)
    started = time.monotonic()

    census = census_vs_series(census_n) if census_n else None
    canonical = canonical_census_vs_series(census_n) if census_n else None
    ranks: List[RankReport] = []
    for n in range(1, rank_n + 1):
        ranks.extend(relation_rank_check(n, convention))

    checks: List[CheckReport] = []
    bound = max(census_n, rank_n, reduction_n, order_n, 1)
    checks.append(series_identities(_series_order(bound)))
    checks.append(poincare_symmetry(bound))
    for n in range(1, reduction_n + 1):
        checks.append(reduction_consistency(n, convention))
        checks.append(relations_compatible(n, convention))
    if order_n:
        checks.append(push_order_independence(order_n, convention))

    ok = (
        (census is None or census.ok)
        and (canonical is None or canonical.ok)
        and all(r.consistent for r in ranks)
        and all(c.ok for c in checks)
    )
    logger.info(f"verification {'passed' if ok else 'FAILED'} in {time.monotonic() - started:.1f}s")
    return VerificationReport(
        ok=ok,
        convention=convention.value,
        census=census,
        canonical_census=canonical,
        ranks=ranks,
        checks=checks,
    )


__all__ = [
    "canonical_census",
    "canonical_census_vs_series",
    "census_vs_series",
    "normal_form_census",
    "poincare_symmetry",
    "push_order_independence",
    "reduction_consistency",
    "relation_rank_check",
    "relations_compatible",
    "run_verification",
    "series_identities",
]
