"""Product classes on the relative Hilbert scheme of the plane relative to a line.

A class is a multiset of base factors a_a[m] (support of dimension a in the open
plane) together with an ordered list of nonempty bubbles, each a multiset of
bubble factors b_b[m]. The bubble index is positional: bubble k of a cycle is
``cycle.bubbles[k - 1]``.
"""
from __future__ import annotations

import functools
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from app.core.errors import InvalidCycle

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class BaseFactor:
    support_dim: int
    mult: int

    def __post_init__(self) -> None:
        if self.support_dim not in (0, 1, 2):
            raise InvalidCycle(f"base factor support must be 0, 1 or 2 (got {self.support_dim})")
        if self.mult < 1:
            raise InvalidCycle(f"multiplicity must be positive (got {self.mult})")

    def __str__(self) -> str:
        return f"a{self.support_dim}[{self.mult}]"


@dataclass(frozen=True, order=True)
class BubbleFactor:
    support_dim: int
    mult: int

    def __post_init__(self) -> None:
        if self.support_dim not in (0, 1):
            raise InvalidCycle(f"bubble factor support must be 0 or 1 (got {self.support_dim})")
        if self.mult < 1:
            raise InvalidCycle(f"multiplicity must be positive (got {self.mult})")

    def render(self, bubble_index: int) -> str:
        return f"b{self.support_dim}^{bubble_index}[{self.mult}]"


Bubble = Tuple[BubbleFactor, ...]


@dataclass(frozen=True, order=True)
class CycleClass:
    """One product class. Factors are kept sorted, so equality is multiset equality."""

    base: Tuple[BaseFactor, ...] = ()
    bubbles: Tuple[Bubble, ...] = ()

    def __post_init__(self) -> None:
        base = tuple(sorted(self.base))
        bubbles = tuple(tuple(sorted(bubble)) for bubble in self.bubbles)
        for index, bubble in enumerate(bubbles, start=1):
            if not bubble:
                raise InvalidCycle(f"bubble {index} is empty")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "bubbles", bubbles)

    @property
    def length(self) -> int:
        return length(self)

    @property
    def tau(self) -> int:
        return tau_degree(self)

    @property
    def degree(self) -> int:
        return degree(self)

    def bubble(self, index: int) -> Bubble:
        if index < 1 or index > len(self.bubbles):
            raise IndexError(f"bubble {index} out of range 1..{len(self.bubbles)}")
        return self.bubbles[index - 1]

    def __str__(self) -> str:
        return format_cycle(self)


def length(cycle: CycleClass) -> int:
    return sum(f.mult for f in cycle.base) + sum(f.mult for bubble in cycle.bubbles for f in bubble)


def tau_degree(cycle: CycleClass) -> int:
    """Normalized grading: a_a[m] weighs 2a - 2, b_b[m] weighs 2b, each bubble -2."""
    base = sum(2 * f.support_dim - 2 for f in cycle.base)
    bubbles = sum(2 * f.support_dim for bubble in cycle.bubbles for f in bubble)
    return base + bubbles - 2 * len(cycle.bubbles)


def degree(cycle: CycleClass) -> int:
    """Cohomological degree 2 * length + tau."""
    return 2 * length(cycle) + tau_degree(cycle)


def format_cycle(cycle: CycleClass) -> str:
    factors = [str(f) for f in cycle.base]
    for index, bubble in enumerate(cycle.bubbles, start=1):
        factors.extend(f.render(index) for f in bubble)
    return "*".join(factors) if factors else "1"


def _bubble_is_canonical(bubble: Bubble) -> bool:
    zeros = [f for f in bubble if f.support_dim == 0]
    if len(zeros) > 1:
        return False
    if zeros:
        return zeros[0].mult <= min(f.mult for f in bubble)
    return True


def first_noncanonical_bubble(cycle: CycleClass) -> Optional[int]:
    for index, bubble in enumerate(cycle.bubbles, start=1):
        if not _bubble_is_canonical(bubble):
            return index
    return None


def is_canonical(cycle: CycleClass) -> bool:
    if any(f.support_dim != 2 for f in cycle.base):
        return False
    return first_noncanonical_bubble(cycle) is None


def lone_point(bubble: Bubble) -> Optional[int]:
    """Multiplicity of the bubble's only factor when it is a zero-cycle point."""
    if len(bubble) == 1 and bubble[0].support_dim == 0:
        return bubble[0].mult
    return None


def first_normal_violation(cycle: CycleClass) -> Optional[int]:
    """Lowest k whose lone zero-cycle point exceeds the smallest multiplicity in bubble k+1."""
    for index in range(1, len(cycle.bubbles)):
        mult = lone_point(cycle.bubbles[index - 1])
        if mult is not None and mult > min(f.mult for f in cycle.bubbles[index]):
            return index
    return None


def is_normal(cycle: CycleClass) -> bool:
    return is_canonical(cycle) and first_normal_violation(cycle) is None


def cycle_sort_key(cycle: CycleClass) -> tuple:
    """Listing order: descending degree, then fewer bubbles, then structure."""
    return (-degree(cycle), len(cycle.bubbles), cycle)


@dataclass(frozen=True)
class CycleExpr:
    """Formal rational combination of product classes; zero coefficients are dropped."""

    terms: Tuple[Tuple[CycleClass, Fraction], ...] = ()

    def __post_init__(self) -> None:
        acc: Dict[CycleClass, Fraction] = {}
        for cycle, coefficient in self.terms:
            acc[cycle] = acc.get(cycle, Fraction(0)) + Fraction(coefficient)
        ordered = sorted(((c, v) for c, v in acc.items() if v != 0), key=lambda item: cycle_sort_key(item[0]))
        object.__setattr__(self, "terms", tuple(ordered))

    @classmethod
    def of(cls, cycle: CycleClass, coefficient: Scalar = 1) -> "CycleExpr":
        return cls(((cycle, coefficient),))

    @classmethod
    def from_mapping(cls, terms: Mapping[CycleClass, Scalar]) -> "CycleExpr":
        return cls(tuple(terms.items()))

    def as_dict(self) -> Dict[CycleClass, Fraction]:
        return dict(self.terms)

    def coefficient(self, cycle: CycleClass) -> Fraction:
        for c, v in self.terms:
            if c == cycle:
                return v
        return Fraction(0)

    def support(self) -> Tuple[CycleClass, ...]:
        return tuple(c for c, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def lengths(self) -> set[int]:
        return {length(c) for c, _ in self.terms}

    def taus(self) -> set[int]:
        return {tau_degree(c) for c, _ in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.lengths()) <= 1 and len(self.taus()) <= 1

    def __iter__(self) -> Iterator[Tuple[CycleClass, Fraction]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "CycleExpr") -> "CycleExpr":
        if not isinstance(other, CycleExpr):
            return NotImplemented
        return CycleExpr(self.terms + other.terms)

    def __sub__(self, other: "CycleExpr") -> "CycleExpr":
        if not isinstance(other, CycleExpr):
            return NotImplemented
        return CycleExpr(self.terms + tuple((c, -v) for c, v in other.terms))

    def __neg__(self) -> "CycleExpr":
        return self.scale(-1)

    def __mul__(self, factor: Scalar) -> "CycleExpr":
        if not isinstance(factor, (int, Fraction)):
            return NotImplemented
        return self.scale(factor)

    __rmul__ = __mul__

    def scale(self, factor: Scalar) -> "CycleExpr":
        return CycleExpr(tuple((c, v * factor) for c, v in self.terms))

    def __str__(self) -> str:
        from .notation import format_expression

        return format_expression(self)


class RelationKind(str, Enum):
    PUSH_POINT = "PushPoint"
    PUSH_LINE = "PushLine"
    POINT_POINT = "PointPoint"
    POINT_LINE = "PointLine"
    LINE_LINE = "LineLine"


@dataclass(frozen=True)
class RelationInstance:
    """A combination of product classes that vanishes in cohomology.

    ``mults`` records the designated multiplicities: (a,) for a push, (a, b) for a
    bubble relation. Together with kind, source and bubble_index they rebuild
    ``expr`` exactly.
    """

    expr: CycleExpr
    kind: RelationKind
    source: CycleClass
    bubble_index: Optional[int] = None
    mults: Tuple[int, ...] = ()

    @property
    def tau(self) -> Optional[int]:
        taus = self.expr.taus()
        return next(iter(taus)) if taus else None

    @property
    def degree(self) -> Optional[int]:
        if self.expr.is_zero():
            return None
        return degree(self.expr.terms[0][0])


# -- enumeration ---------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _multisets(total: int, dims: Tuple[int, ...], bound: Tuple[int, int]) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """Multisets of (mult, dim) pairs with mults summing to ``total``.

    Items are produced in non-increasing order and never exceed ``bound``, so each
    multiset appears once.
    """
    if total == 0:
        return ((),)
    out = []
    for mult in range(min(total, bound[0]), 0, -1):
        for dim in sorted(dims, reverse=True):
            item = (mult, dim)
            if item > bound:
                continue
            for rest in _multisets(total - mult, dims, item):
                out.append((item,) + rest)
    return tuple(out)


def _base_multisets(total: int, dims: Tuple[int, ...]) -> Tuple[Tuple[BaseFactor, ...], ...]:
    return tuple(
        tuple(BaseFactor(dim, mult) for mult, dim in items)
        for items in _multisets(total, dims, (total, max(dims)))
    )


@functools.lru_cache(maxsize=None)
def _bubbles_of_size(size: int) -> Tuple[Bubble, ...]:
    return tuple(
        tuple(sorted(BubbleFactor(dim, mult) for mult, dim in items))
        for items in _multisets(size, (0, 1), (size, 1))
    )


@functools.lru_cache(maxsize=None)
def _canonical_bubbles_of_size(size: int) -> Tuple[Bubble, ...]:
    bubbles = []
    for items in _multisets(size, (1,), (size, 1)):
        lines = [BubbleFactor(1, mult) for mult, _ in items]
        bubbles.append(tuple(sorted(lines)))
    # at most one zero-cycle point, no larger than any line point
    for point in range(1, size + 1):
        for items in _multisets(size - point, (1,), (size - point, 1)):
            if all(mult >= point for mult, _ in items):
                lines = [BubbleFactor(1, mult) for mult, _ in items]
                bubbles.append(tuple(sorted([BubbleFactor(0, point)] + lines)))
    return tuple(bubbles)


@functools.lru_cache(maxsize=None)
def _bubble_sequences(total: int, canonical: bool) -> Tuple[Tuple[Bubble, ...], ...]:
    if total == 0:
        return ((),)
    source = _canonical_bubbles_of_size if canonical else _bubbles_of_size
    out = []
    for size in range(1, total + 1):
        for bubble in source(size):
            for rest in _bubble_sequences(total - size, canonical):
                out.append((bubble,) + rest)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def _normal_sequences(total: int, previous_point: Optional[int]) -> Tuple[Tuple[Bubble, ...], ...]:
    if total == 0:
        return ((),)
    out = []
    for size in range(1, total + 1):
        for bubble in _canonical_bubbles_of_size(size):
            if previous_point is not None and min(f.mult for f in bubble) < previous_point:
                continue
            for rest in _normal_sequences(total - size, lone_point(bubble)):
                out.append((bubble,) + rest)
    return tuple(out)


def _check_length(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be positive (got {n})")


def _assemble(n: int, base_dims: Tuple[int, ...], sequences) -> Tuple[CycleClass, ...]:
    cycles = []
    for base_length in range(n + 1):
        for base in _base_multisets(base_length, base_dims):
            for bubbles in sequences(n - base_length):
                cycles.append(CycleClass(base, bubbles))
    return tuple(sorted(cycles, key=cycle_sort_key))


@functools.lru_cache(maxsize=32)
def enumerate_cycles(n: int) -> Tuple[CycleClass, ...]:
    """Every product class of length n, each once, in listing order."""
    _check_length(n)
    cycles = _assemble(n, (0, 1, 2), lambda total: _bubble_sequences(total, False))
    logger.debug(f"enumerated {len(cycles)} product classes of length {n}")
    return cycles


@functools.lru_cache(maxsize=32)
def enumerate_canonical_cycles(n: int) -> Tuple[CycleClass, ...]:
    _check_length(n)
    return _assemble(n, (2,), lambda total: _bubble_sequences(total, True))


@functools.lru_cache(maxsize=32)
def enumerate_normal_cycles(n: int) -> Tuple[CycleClass, ...]:
    """Normal product classes of length n, built directly rather than filtered."""
    _check_length(n)
    cycles = _assemble(n, (2,), lambda total: _normal_sequences(total, None))
    logger.debug(f"enumerated {len(cycles)} normal classes of length {n}")
    return cycles


def degree_histogram(cycles: Iterable[CycleClass]) -> Dict[int, int]:
    counts = Counter(degree(c) for c in cycles)
    return dict(sorted(counts.items()))


def replace_in_bubble(cycle: CycleClass, index: int, old: BubbleFactor, new: Sequence[BubbleFactor]) -> CycleClass:
    """Swap one occurrence of ``old`` in bubble ``index`` for the factors in ``new``."""
    contents = list(cycle.bubble(index))
    contents.remove(old)
    contents.extend(new)
    bubbles = list(cycle.bubbles)
    bubbles[index - 1] = tuple(contents)
    return CycleClass(cycle.base, tuple(bubbles))


__all__ = [
    "BaseFactor",
    "Bubble",
    "BubbleFactor",
    "CycleClass",
    "CycleExpr",
    "RelationInstance",
    "RelationKind",
    "cycle_sort_key",
    "degree",
    "degree_histogram",
    "enumerate_canonical_cycles",
    "enumerate_cycles",
    "enumerate_normal_cycles",
    "first_noncanonical_bubble",
    "first_normal_violation",
    "format_cycle",
    "is_canonical",
    "is_normal",
    "length",
    "lone_point",
    "replace_in_bubble",
    "tau_degree",
]
