"""Text form of product classes and their combinations.

    factor     ::= ("a0" | "a1" | "a2") "[" int "]" | ("b0" | "b1") "^" int "[" int "]"
    cycle      ::= factor ("*" factor)*
    expression ::= [rational] cycle (("+" | "-") [rational] cycle)*

Example: ``a2[1]*b0^1[2] - 3 b1^1[1]*b1^2[1]``. The empty class is written ``1``
and the zero expression ``0``. ``format_expression`` output parses back to the
same CycleExpr.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Tuple

from app.core.errors import ExpressionParseError

from .cycle_model import BaseFactor, BubbleFactor, CycleClass, CycleExpr, format_cycle

BASE_FACTOR_PATTERN = re.compile(r"a(?P<dim>\d+)\[(?P<mult>\d+)\]")
BUBBLE_FACTOR_PATTERN = re.compile(r"b(?P<dim>\d+)\^(?P<index>\d+)\[(?P<mult>\d+)\]")
RATIONAL_PATTERN = re.compile(r"(?P<num>\d+)(?:\s*/\s*(?P<den>\d+))?")
_WHITESPACE = re.compile(r"\s*")


class _Reader:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        self.pos = _WHITESPACE.match(self.text, self.pos).end()

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def error(self, message: str, position: int | None = None) -> ExpressionParseError:
        return ExpressionParseError(message, text=self.text, position=self.pos if position is None else position)


def _read_factor(reader: _Reader, base: List[BaseFactor], bubbles: Dict[int, List[BubbleFactor]]) -> None:
    reader.skip()
    start = reader.pos
    match = BASE_FACTOR_PATTERN.match(reader.text, start)
    if match:
        dim = int(match["dim"])
        mult = int(match["mult"])
        if dim > 2:
            raise reader.error(f"base support must be 0, 1 or 2, not {dim}", start)
        if mult < 1:
            raise reader.error("multiplicity must be positive", start)
        base.append(BaseFactor(dim, mult))
        reader.pos = match.end()
        return
    match = BUBBLE_FACTOR_PATTERN.match(reader.text, start)
    if match:
        dim = int(match["dim"])
        index = int(match["index"])
        mult = int(match["mult"])
        if dim > 1:
            raise reader.error(f"bubble support must be 0 or 1, not {dim}", start)
        if index < 1:
            raise reader.error("bubble indices start at 1", start)
        if mult < 1:
            raise reader.error("multiplicity must be positive", start)
        bubbles.setdefault(index, []).append(BubbleFactor(dim, mult))
        reader.pos = match.end()
        return
    raise reader.error("expected a factor such as a2[1] or b0^1[1]", start)


def _read_cycle(reader: _Reader) -> CycleClass:
    reader.skip()
    start = reader.pos
    if reader.text.startswith("1", start) and not RATIONAL_PATTERN.match(reader.text, start + 1):
        reader.pos = start + 1
        return CycleClass()
    base: List[BaseFactor] = []
    bubbles: Dict[int, List[BubbleFactor]] = {}
    _read_factor(reader, base, bubbles)
    while reader.peek() == "*":
        reader.pos += 1
        _read_factor(reader, base, bubbles)
    if bubbles and sorted(bubbles) != list(range(1, max(bubbles) + 1)):
        missing = min(set(range(1, max(bubbles) + 1)) - set(bubbles))
        raise reader.error(f"bubble {missing} is empty; bubble indices must run 1..{max(bubbles)}", start)
    return CycleClass(tuple(base), tuple(tuple(bubbles[k]) for k in sorted(bubbles)))


def parse_cycle(text: str) -> CycleClass:
    reader = _Reader(text)
    cycle = _read_cycle(reader)
    if not reader.at_end():
        raise reader.error("unexpected trailing text")
    return cycle


def _read_coefficient(reader: _Reader) -> Fraction:
    reader.skip()
    start = reader.pos
    match = RATIONAL_PATTERN.match(reader.text, start)
    if not match:
        return Fraction(1)
    # a bare "1" is the empty class, not a coefficient
    after = _WHITESPACE.match(reader.text, match.end()).end()
    if after >= len(reader.text) or reader.text[after] in "+-":
        return Fraction(1)
    denominator = int(match["den"]) if match["den"] else 1
    if denominator == 0:
        raise reader.error("zero denominator", start)
    reader.pos = match.end()
    if reader.peek() == "*":
        reader.pos += 1
    return Fraction(int(match["num"]), denominator)


def parse_expression(text: str) -> CycleExpr:
    """Parse an expression; raises ExpressionParseError with the failing position."""
    reader = _Reader(text)
    if reader.at_end():
        raise reader.error("empty expression")
    if text.strip() == "0":
        return CycleExpr()

    terms: List[Tuple[CycleClass, Fraction]] = []
    sign = 1
    if reader.peek() in "+-":
        sign = -1 if reader.peek() == "-" else 1
        reader.pos += 1
    while True:
        coefficient = _read_coefficient(reader)
        cycle = _read_cycle(reader)
        terms.append((cycle, sign * coefficient))
        if reader.at_end():
            break
        symbol = reader.peek()
        if symbol not in "+-":
            raise reader.error(f"expected '+' or '-', found {symbol!r}")
        sign = -1 if symbol == "-" else 1
        reader.pos += 1
    return CycleExpr(tuple(terms))


def format_coefficient(value: Fraction) -> str:
    return str(value)


def format_expression(expr: CycleExpr) -> str:
    if expr.is_zero():
        return "0"
    pieces: List[str] = []
    for position, (cycle, coefficient) in enumerate(expr.terms):
        magnitude = abs(coefficient)
        body = format_cycle(cycle) if magnitude == 1 else f"{format_coefficient(magnitude)} {format_cycle(cycle)}"
        if position == 0:
            pieces.append(body if coefficient > 0 else f"-{body}")
        else:
            pieces.append(f"{'+' if coefficient > 0 else '-'} {body}")
    return " ".join(pieces)


__all__ = [
    "format_coefficient",
    "format_cycle",
    "format_expression",
    "parse_cycle",
    "parse_expression",
]
