"""The relation families among product classes.

Every constructor returns a RelationInstance whose ``expr`` is stored as
left-hand side minus right-hand side. Terms that come from distributing a set of
points over two destinations are expanded according to an ExpansionConvention:
``binomial`` treats every factor occurrence as distinct (identical points give
binomial coefficients), ``distinct`` keeps each resulting multiset once.
"""
from __future__ import annotations

import functools
import logging
from collections import Counter
from enum import Enum
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, TypeVar, Union

from app.core.config import get_settings
from app.core.errors import FactorsNotFound, RelationNotHomogeneous, TargetNotFound

from .cycle_model import (
    BaseFactor,
    Bubble,
    BubbleFactor,
    CycleClass,
    CycleExpr,
    RelationInstance,
    RelationKind,
    enumerate_cycles,
)

logger = logging.getLogger(__name__)

T = TypeVar("T", BaseFactor, BubbleFactor)


class ExpansionConvention(str, Enum):
    BINOMIAL = "binomial"
    DISTINCT = "distinct"


ConventionLike = Union[ExpansionConvention, str, None]


def resolve_convention(convention: ConventionLike = None) -> ExpansionConvention:
    if convention is None:
        convention = get_settings().expansion_convention
    return ExpansionConvention(convention)


@dataclass(frozen=True)
class PushTarget:
    """The base point pushed into a new first bubble."""

    factor: BaseFactor

    def __post_init__(self) -> None:
        if self.factor.support_dim not in (0, 1):
            raise ValueError(f"only a0 and a1 points can be pushed (got {self.factor})")

    @classmethod
    def of(cls, support_dim: int, mult: int) -> "PushTarget":
        return cls(BaseFactor(support_dim, mult))


def _distribute(items: Sequence[T], convention: ExpansionConvention) -> List[Tuple[Tuple[T, ...], Tuple[T, ...], int]]:
    """All ways to split ``items`` into (stay, move), with multiplicities."""
    states: Counter = Counter({((), ()): 1})
    for item in items:
        following: Counter = Counter()
        for (stay, move), count in states.items():
            following[(tuple(sorted(stay + (item,))), move)] += count
            following[(stay, tuple(sorted(move + (item,))))] += count
        states = following
    splits = sorted(states.items())
    if convention is ExpansionConvention.DISTINCT:
        return [(stay, move, 1) for (stay, move), _ in splits]
    return [(stay, move, count) for (stay, move), count in splits]


def _instance(
    lhs: CycleExpr,
    rhs: CycleExpr,
    *,
    kind: RelationKind,
    source: CycleClass,
    bubble_index: Optional[int] = None,
    mults: Tuple[int, ...] = (),
) -> RelationInstance:
    expr = lhs - rhs
    if not expr.is_homogeneous():
        raise RelationNotHomogeneous(
            f"{kind.value} relation from {source} mixes lengths {sorted(expr.lengths())} "
            f"and tau degrees {sorted(expr.taus())}"
        )
    return RelationInstance(expr=expr, kind=kind, source=source, bubble_index=bubble_index, mults=mults)


def _push(cycle: CycleClass, target: PushTarget, convention: ConventionLike) -> RelationInstance:
    convention = resolve_convention(convention)
    if target.factor not in cycle.base:
        raise TargetNotFound(f"{target.factor} does not occur in the base of {cycle}")
    rest = list(cycle.base)
    rest.remove(target.factor)
    fixed = tuple(f for f in rest if f.support_dim == 0)
    movable = [f for f in rest if f.support_dim > 0]
    landing = BubbleFactor(target.factor.support_dim, target.factor.mult)

    rhs: Counter = Counter()
    for stay, move, count in _distribute(movable, convention):
        # a plane point entering the bubble lies on the divisor line, a line point on one of its points
        first_bubble = (landing,) + tuple(BubbleFactor(f.support_dim - 1, f.mult) for f in move)
        rhs[CycleClass(fixed + stay, (first_bubble,) + cycle.bubbles)] += count

    kind = RelationKind.PUSH_POINT if target.factor.support_dim == 0 else RelationKind.PUSH_LINE
    return _instance(
        CycleExpr.of(cycle),
        CycleExpr.from_mapping(rhs),
        kind=kind,
        source=cycle,
        mults=(target.factor.mult,),
    )


def push_zero_cycle(cycle: CycleClass, target: PushTarget, convention: ConventionLike = None) -> RelationInstance:
    """Push a point of the open plane supported on a zero-cycle into a new first bubble."""
    if target.factor.support_dim != 0:
        raise ValueError(f"push_zero_cycle needs an a0 target (got {target.factor})")
    return _push(cycle, target, convention)


def push_one_cycle(cycle: CycleClass, target: PushTarget, convention: ConventionLike = None) -> RelationInstance:
    """Push a point of the open plane supported on a line into a new first bubble."""
    if target.factor.support_dim != 1:
        raise ValueError(f"push_one_cycle needs an a1 target (got {target.factor})")
    return _push(cycle, target, convention)


def push(cycle: CycleClass, target: PushTarget, convention: ConventionLike = None) -> RelationInstance:
    return _push(cycle, target, convention)


def _split_bubble(
    cycle: CycleClass, index: int, designated: Sequence[BubbleFactor]
) -> Tuple[Tuple[Bubble, ...], Bubble, Tuple[Bubble, ...]]:
    if index < 1 or index > len(cycle.bubbles):
        raise FactorsNotFound(f"{cycle} has no bubble {index}")
    remaining = list(cycle.bubbles[index - 1])
    for factor in designated:
        if factor not in remaining:
            raise FactorsNotFound(f"bubble {index} of {cycle} lacks {factor.render(index)}")
        remaining.remove(factor)
    return cycle.bubbles[: index - 1], tuple(remaining), cycle.bubbles[index:]


class _BubbleSplit:
    """The pieces of a cycle around bubble ``index`` once the designated factors are removed."""

    def __init__(self, cycle: CycleClass, index: int, designated: Sequence[BubbleFactor], convention: ExpansionConvention):
        self.base = cycle.base
        self.lower, self.others, self.upper = _split_bubble(cycle, index, designated)
        self.convention = convention

    def lifted(self, keep: Sequence[BubbleFactor], lift: Sequence[BubbleFactor]) -> CycleExpr:
        """``keep`` stays in bubble i, ``lift`` opens bubble i+1, the rest go either way, higher bubbles shift."""
        terms: Counter = Counter()
        for stay, move, count in _distribute(self.others, self.convention):
            bubbles = self.lower + (tuple(keep) + stay, tuple(lift) + move) + self.upper
            terms[CycleClass(self.base, bubbles)] += count
        return CycleExpr.from_mapping(terms)

    def in_place(self, contents: Sequence[BubbleFactor]) -> CycleExpr:
        bubbles = self.lower + (tuple(contents) + self.others,) + self.upper
        return CycleExpr.of(CycleClass(self.base, bubbles))


def point_point(cycle: CycleClass, i: int, a: int, b: int, convention: ConventionLike = None) -> RelationInstance:
    """Two zero-cycle points of bubble i: lifting either one into a new bubble i+1 gives the same class."""
    pa, pb = BubbleFactor(0, a), BubbleFactor(0, b)
    split = _BubbleSplit(cycle, i, (pa, pb), resolve_convention(convention))
    return _instance(
        split.lifted(keep=(pb,), lift=(pa,)),
        split.lifted(keep=(pa,), lift=(pb,)),
        kind=RelationKind.POINT_POINT,
        source=cycle,
        bubble_index=i,
        mults=(a, b),
    )


def point_line(cycle: CycleClass, i: int, a: int, b: int, convention: ConventionLike = None) -> RelationInstance:
    """A line point b1[a] and a zero-cycle point b0[b] of bubble i.

    Lifting the line point equals lifting the zero-cycle point plus the
    stabilized component where both stay in bubble i as zero-cycle points.
    """
    line, point = BubbleFactor(1, a), BubbleFactor(0, b)
    split = _BubbleSplit(cycle, i, (line, point), resolve_convention(convention))
    rhs = split.lifted(keep=(line,), lift=(point,)) + split.in_place((BubbleFactor(0, a), point))
    return _instance(
        split.lifted(keep=(point,), lift=(line,)),
        rhs,
        kind=RelationKind.POINT_LINE,
        source=cycle,
        bubble_index=i,
        mults=(a, b),
    )


def line_line(cycle: CycleClass, i: int, a: int, b: int, convention: ConventionLike = None) -> RelationInstance:
    """Two line points b1[a], b1[b] of bubble i; symmetric under exchanging a and b."""
    la, lb = BubbleFactor(1, a), BubbleFactor(1, b)
    split = _BubbleSplit(cycle, i, (la, lb), resolve_convention(convention))
    lhs = split.lifted(keep=(lb,), lift=(la,)) + split.in_place((la, BubbleFactor(0, b)))
    rhs = split.lifted(keep=(la,), lift=(lb,)) + split.in_place((BubbleFactor(0, a), lb))
    return _instance(lhs, rhs, kind=RelationKind.LINE_LINE, source=cycle, bubble_index=i, mults=(a, b))


def pushable_targets(cycle: CycleClass) -> Tuple[PushTarget, ...]:
    """Distinct a0/a1 base factors, smallest first."""
    return tuple(PushTarget(f) for f in sorted({f for f in cycle.base if f.support_dim < 2}))


def relations_from(cycle: CycleClass, convention: ConventionLike = None) -> List[RelationInstance]:
    """Every push and bubble relation sourced at ``cycle``, zero ones dropped."""
    convention = resolve_convention(convention)
    found: List[RelationInstance] = [push(cycle, target, convention) for target in pushable_targets(cycle)]
    for index, bubble in enumerate(cycle.bubbles, start=1):
        points = sorted({f.mult for f in bubble if f.support_dim == 0})
        lines = sorted({f.mult for f in bubble if f.support_dim == 1})
        for x, a in enumerate(points):
            for b in points[x + 1 :]:
                found.append(point_point(cycle, index, a, b, convention))
        for a in lines:
            for b in points:
                found.append(point_line(cycle, index, a, b, convention))
        for x, a in enumerate(lines):
            for b in lines[x + 1 :]:
                found.append(line_line(cycle, index, a, b, convention))
    return [r for r in found if not r.expr.is_zero()]


@functools.lru_cache(maxsize=16)
def _all_relations(n: int, convention: ExpansionConvention) -> Tuple[RelationInstance, ...]:
    seen = set()
    out = []
    for cycle in enumerate_cycles(n):
        for relation in relations_from(cycle, convention):
            key = (relation.kind, relation.source, relation.bubble_index, relation.mults)
            if key in seen:
                continue
            seen.add(key)
            out.append(relation)
    logger.info(f"generated {len(out)} relations among product classes of length {n} ({convention.value})")
    return tuple(out)


def all_relations(n: int, convention: ConventionLike = None) -> Tuple[RelationInstance, ...]:
    """Push, Point-Point, Point-Line and Line-Line relations for every class of length n."""
    if n < 1:
        raise ValueError(f"n must be positive (got {n})")
    return _all_relations(n, resolve_convention(convention))


def measure_A(cycle: CycleClass) -> int:
    """Count pairs (p, k): p the lone zero-cycle point of its bubble, k a higher
    bubble holding a point of strictly smaller multiplicity."""
    count = 0
    for position, bubble in enumerate(cycle.bubbles):
        if len(bubble) != 1 or bubble[0].support_dim != 0:
            continue
        mult = bubble[0].mult
        count += sum(1 for higher in cycle.bubbles[position + 1 :] if min(f.mult for f in higher) < mult)
    return count


__all__ = [
    "ConventionLike",
    "ExpansionConvention",
    "PushTarget",
    "all_relations",
    "line_line",
    "measure_A",
    "point_line",
    "point_point",
    "push",
    "push_one_cycle",
    "push_zero_cycle",
    "pushable_targets",
    "relations_from",
    "resolve_convention",
]
