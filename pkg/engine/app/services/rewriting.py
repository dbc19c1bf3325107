"""Reduction of product-class combinations to canonical and normal form.

Each step picks a term X, finds a relation combination R in which X has
coefficient +-1 and replaces the working expression e by e - (e[X] / R[X]) * R.
Every other term of R is strictly smaller than X under ``rewrite_measure``:

    (number of a0/a1 base factors, per-bubble keys from bubble 1 upwards)

with the key of a bubble being (zero-cycle points, multiplicity of the only
zero-cycle point or 0, -size). The rules touch nothing below the bubble they
repair, so the measure drops lexicographically and reduction terminates.
The steps taken are recorded as a certificate: original + sum(c * r) == result.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.core.config import get_settings
from app.core.errors import NonTermination, PreconditionViolated, RewriteFailed

from .cycle_model import (
    BubbleFactor,
    CycleClass,
    CycleExpr,
    RelationInstance,
    first_noncanonical_bubble,
    first_normal_violation,
    is_canonical,
    is_normal,
    replace_in_bubble,
)
from .relations import (
    ConventionLike,
    ExpansionConvention,
    PushTarget,
    line_line,
    point_line,
    point_point,
    push,
    pushable_targets,
    resolve_convention,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CertificateEntry:
    relation: RelationInstance
    coefficient: Fraction


@dataclass(frozen=True)
class Reduction:
    original: CycleExpr
    expr: CycleExpr
    certificate: Tuple[CertificateEntry, ...] = ()
    steps: int = 0

    def verify(self) -> bool:
        return verify_certificate(self.original, self)

    def then(self, following: "Reduction") -> "Reduction":
        """Chain a reduction of ``self.expr`` onto this one."""
        if following.original != self.expr:
            raise ValueError("reductions do not chain: the second does not start where the first ends")
        return Reduction(
            original=self.original,
            expr=following.expr,
            certificate=self.certificate + following.certificate,
            steps=self.steps + following.steps,
        )


def verify_certificate(original: CycleExpr, reduction: Reduction) -> bool:
    """Check original + sum(c * r.expr) == reduction.expr exactly."""
    total = original
    for entry in reduction.certificate:
        total = total + entry.relation.expr.scale(entry.coefficient)
    return total == reduction.expr


@functools.lru_cache(maxsize=None)
def rewrite_measure(cycle: CycleClass) -> tuple:
    pushable = sum(1 for f in cycle.base if f.support_dim < 2)
    keys = []
    for bubble in cycle.bubbles:
        points = [f.mult for f in bubble if f.support_dim == 0]
        keys.append((len(points), points[0] if len(points) == 1 else 0, -len(bubble)))
    return (pushable, tuple(keys))


Combination = List[Tuple[RelationInstance, int]]


def _canonical_rule(cycle: CycleClass, index: int, convention: ExpansionConvention) -> Combination:
    bubble = cycle.bubble(index)
    points = sorted(f.mult for f in bubble if f.support_dim == 0)
    if len(points) >= 2:
        # read the cycle as the stabilized term of a Point-Line relation
        a, b = points[-1], points[0]
        source = replace_in_bubble(cycle, index, BubbleFactor(0, a), [BubbleFactor(1, a)])
        return [(point_line(source, index, a, b, convention), 1)]
    b = points[0]
    a = min(f.mult for f in bubble if f.support_dim == 1)
    source = replace_in_bubble(cycle, index, BubbleFactor(0, b), [BubbleFactor(1, b)])
    return [(line_line(source, index, a, b, convention), 1)]


def _normal_rule(cycle: CycleClass, index: int, convention: ExpansionConvention) -> Combination:
    a = cycle.bubble(index)[0].mult
    upper = list(cycle.bubble(index + 1))
    lower_bubbles = cycle.bubbles[: index - 1]
    higher_bubbles = cycle.bubbles[index + 1 :]

    def merged(*factors: BubbleFactor) -> CycleClass:
        return CycleClass(cycle.base, lower_bubbles + (tuple(factors) + tuple(upper),) + higher_bubbles)

    points = [f for f in upper if f.support_dim == 0]
    if points:
        b = points[0].mult
        upper.remove(points[0])
        return [(point_point(merged(BubbleFactor(0, a), BubbleFactor(0, b)), index, a, b, convention), 1)]

    b = min(f.mult for f in upper)
    upper.remove(BubbleFactor(1, b))
    # the stabilized terms of the two Point-Line relations coincide and cancel
    keeps_a = point_line(merged(BubbleFactor(1, b), BubbleFactor(0, a)), index, b, a, convention)
    keeps_b = point_line(merged(BubbleFactor(1, a), BubbleFactor(0, b)), index, a, b, convention)
    return [(keeps_a, 1), (keeps_b, -1)]


def _rule_for(cycle: CycleClass, convention: ExpansionConvention) -> Combination:
    targets = pushable_targets(cycle)
    if targets:
        return [(push(cycle, targets[0], convention), 1)]
    index = first_noncanonical_bubble(cycle)
    if index is not None:
        return _canonical_rule(cycle, index, convention)
    index = first_normal_violation(cycle)
    if index is not None:
        return _normal_rule(cycle, index, convention)
    raise RewriteFailed(f"{cycle} is already normal")


def _run(
    expr: CycleExpr,
    *,
    needs_rewrite: Callable[[CycleClass], bool],
    convention: ConventionLike,
    step_limit: Optional[int],
    phase: str,
) -> Reduction:
    convention = resolve_convention(convention)
    limit = step_limit if step_limit is not None else get_settings().rewrite_step_limit
    working: Dict[CycleClass, Fraction] = expr.as_dict()
    certificate: List[CertificateEntry] = []
    steps = 0

    while True:
        pending = [c for c in working if needs_rewrite(c)]
        if not pending:
            break
        steps += 1
        if steps > limit:
            raise NonTermination(
                f"{phase} reduction exceeded {limit} rewrite steps; {len(pending)} terms still pending, "
                f"largest {max(pending, key=lambda c: (rewrite_measure(c), c))}"
            )
        target = max(pending, key=lambda c: (rewrite_measure(c), c))
        combination = _rule_for(target, convention)

        combined = CycleExpr()
        for relation, weight in combination:
            combined = combined + relation.expr.scale(weight)
        pivot = combined.coefficient(target)
        if pivot == 0:
            raise RewriteFailed(f"no rule isolates {target}")
        factor = -working[target] / pivot
        logger.debug(f"{phase} step {steps}: rewriting {target} with {[r.kind.value for r, _ in combination]}")

        for relation, weight in combination:
            certificate.append(CertificateEntry(relation=relation, coefficient=factor * weight))
        for cycle, coefficient in combined:
            value = working.get(cycle, Fraction(0)) + factor * coefficient
            if value:
                working[cycle] = value
            else:
                working.pop(cycle, None)

    result = CycleExpr.from_mapping(working)
    if steps:
        logger.debug(f"{phase} reduction finished after {steps} steps with {len(result)} terms")
    return Reduction(original=expr, expr=result, certificate=tuple(certificate), steps=steps)


def reduce_to_canonical(
    expr: CycleExpr, *, convention: ConventionLike = None, step_limit: Optional[int] = None
) -> Reduction:
    """Rewrite every term into canonical form (push relations, then bubble by bubble)."""
    return _run(
        expr,
        needs_rewrite=lambda c: not is_canonical(c),
        convention=convention,
        step_limit=step_limit,
        phase="canonical",
    )


def reduce_to_normal(
    expr: CycleExpr, *, convention: ConventionLike = None, step_limit: Optional[int] = None
) -> Reduction:
    """Rewrite a combination of canonical classes into normal form.

    Raises:
        PreconditionViolated: some term is not canonical.
    """
    offending = [c for c, _ in expr if not is_canonical(c)]
    if offending:
        raise PreconditionViolated(f"reduce_to_normal needs canonical input; {offending[0]} is not canonical")
    return _run(
        expr,
        needs_rewrite=lambda c: not is_normal(c),
        convention=convention,
        step_limit=step_limit,
        phase="normal",
    )


def reduce_expression(
    expr: CycleExpr, *, convention: ConventionLike = None, step_limit: Optional[int] = None
) -> Reduction:
    canonical = reduce_to_canonical(expr, convention=convention, step_limit=step_limit)
    return canonical.then(reduce_to_normal(canonical.expr, convention=convention, step_limit=step_limit))


@functools.lru_cache(maxsize=None)
def _normal_form(cycle: CycleClass, convention: ExpansionConvention) -> CycleExpr:
    return reduce_expression(CycleExpr.of(cycle), convention=convention).expr


def normal_form(cycle: CycleClass, convention: ConventionLike = None) -> CycleExpr:
    return _normal_form(cycle, resolve_convention(convention))


def normal_form_of(expr: CycleExpr, convention: ConventionLike = None) -> CycleExpr:
    """Normal form of a combination, assembled from cached per-class normal forms."""
    total = CycleExpr()
    for cycle, coefficient in expr:
        total = total + normal_form(cycle, convention).scale(coefficient)
    return total


def reduce_with_first_push(
    cycle: CycleClass, target: PushTarget, *, convention: ConventionLike = None, step_limit: Optional[int] = None
) -> Reduction:
    """Reduce ``cycle`` to normal form, pushing ``target`` before anything else."""
    relation = push(cycle, target, convention)
    start = CycleExpr.of(cycle)
    pushed = Reduction(
        original=start,
        expr=start - relation.expr,
        certificate=(CertificateEntry(relation=relation, coefficient=Fraction(-1)),),
        steps=1,
    )
    return pushed.then(reduce_expression(pushed.expr, convention=convention, step_limit=step_limit))


def push_orders_agree(cycle: CycleClass, convention: ConventionLike = None) -> Tuple[bool, Dict[PushTarget, CycleExpr]]:
    """Reduce ``cycle`` once per distinct first push and compare the normal forms."""
    results = {
        target: reduce_with_first_push(cycle, target, convention=convention).expr
        for target in pushable_targets(cycle)
    }
    return len(set(results.values())) <= 1, results


def order_check_candidates(cycles: Sequence[CycleClass]) -> List[CycleClass]:
    """Classes with at least two distinct pushable base points."""
    return [c for c in cycles if len(pushable_targets(c)) >= 2]


__all__ = [
    "CertificateEntry",
    "Reduction",
    "normal_form",
    "normal_form_of",
    "order_check_candidates",
    "push_orders_agree",
    "reduce_expression",
    "reduce_to_canonical",
    "reduce_to_normal",
    "reduce_with_first_push",
    "rewrite_measure",
    "verify_certificate",
]
