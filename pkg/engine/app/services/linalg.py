"""Exact rank and kernel computations on sparse rational rows.

Rows are mappings column -> rational. Elimination is fraction free: rows are
cleared to primitive integer vectors and combined by cross multiplication, with
the content divided out after every step so entries stay small.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Mapping, Sequence, TypeVar

K = TypeVar("K", bound=Hashable)


def _primitive(row: Dict[K, int]) -> Dict[K, int]:
    content = 0
    for value in row.values():
        content = math.gcd(content, value)
    if content > 1:
        return {k: v // content for k, v in row.items()}
    return row


def integer_row(row: Mapping[K, Fraction]) -> Dict[K, int]:
    """Scale a rational row to a primitive integer row with the same span."""
    denominator = 1
    for value in row.values():
        denominator = math.lcm(denominator, Fraction(value).denominator)
    scaled = {k: int(Fraction(v) * denominator) for k, v in row.items() if v != 0}
    return _primitive(scaled)


def row_echelon(rows: Iterable[Mapping[K, Fraction]], column_order: Sequence[K]) -> Dict[K, Dict[K, int]]:
    """Echelon basis of the row span, keyed by pivot column.

    The pivot of a row is its first nonzero column in ``column_order``.
    """
    rank_of = {column: position for position, column in enumerate(column_order)}
    pivots: Dict[K, Dict[K, int]] = {}
    for raw in rows:
        row = integer_row(raw)
        while row:
            column = min(row, key=rank_of.__getitem__)
            pivot = pivots.get(column)
            if pivot is None:
                pivots[column] = row
                break
            g = math.gcd(pivot[column], row[column])
            keep, remove = pivot[column] // g, row[column] // g
            combined: Dict[K, int] = {}
            for k in set(row) | set(pivot):
                value = keep * row.get(k, 0) - remove * pivot.get(k, 0)
                if value:
                    combined[k] = value
            row = _primitive(combined)
    return pivots


def matrix_rank(rows: Sequence[Mapping[K, Fraction]], columns: Sequence[K], *, reverse: bool = False) -> int:
    """Rank of the rows; ``reverse`` eliminates with the opposite pivot order and row order."""
    if reverse:
        return len(row_echelon(list(rows)[::-1], list(columns)[::-1]))
    return len(row_echelon(rows, columns))


def kernel_basis(rows: Sequence[Mapping[K, Fraction]], columns: Sequence[K]) -> List[Dict[K, Fraction]]:
    """Basis of {v : row . v = 0 for every row}, one vector per free column."""
    echelon = row_echelon(rows, columns)
    rank_of = {column: position for position, column in enumerate(columns)}
    reduced: Dict[K, Dict[K, Fraction]] = {
        column: {k: Fraction(v, row[column]) for k, v in row.items()} for column, row in echelon.items()
    }
    # back substitution from the last pivot
    for column in sorted(reduced, key=rank_of.__getitem__, reverse=True):
        source = reduced[column]
        for other, row in reduced.items():
            if other == column or column not in row:
                continue
            factor = row[column]
            for k, v in source.items():
                value = row.get(k, Fraction(0)) - factor * v
                if value:
                    row[k] = value
                else:
                    row.pop(k, None)

    basis: List[Dict[K, Fraction]] = []
    for free in columns:
        if free in reduced:
            continue
        vector: Dict[K, Fraction] = {free: Fraction(1)}
        for column, row in reduced.items():
            if free in row:
                vector[column] = -row[free]
        basis.append(vector)
    return basis


__all__ = ["integer_row", "kernel_basis", "matrix_rank", "row_echelon"]
