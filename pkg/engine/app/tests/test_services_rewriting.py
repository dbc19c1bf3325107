"""Tests for reduction to canonical and normal form."""
from __future__ import annotations

from fractions import Fraction

import pytest

from app.core.errors import NonTermination, PreconditionViolated
from app.services.cycle_model import CycleExpr, enumerate_cycles, is_canonical, is_normal
from app.services.relations import PushTarget, push
from app.services.rewriting import (
    CertificateEntry,
    Reduction,
    normal_form,
    normal_form_of,
    order_check_candidates,
    push_orders_agree,
    reduce_expression,
    reduce_to_canonical,
    reduce_to_normal,
    reduce_with_first_push,
    rewrite_measure,
    verify_certificate,
)


class TestNormalForms:
    """Hand-computed normal forms, one per rewrite rule."""

    @pytest.mark.parametrize(
        "source,expected",
        [
            # push
            ("a0[2]", "b0^1[2]"),
            # two pushes and a doubled zero-cycle point
            ("a1[1]*a0[1]", "b0^1[1]*b1^2[1]"),
            # two zero-cycle points in one bubble
            ("b0^1[1]*b0^1[1]", "b0^1[1]*b1^2[1] - b1^1[1]*b0^2[1]"),
            # a zero-cycle point larger than a line point
            ("b0^1[2]*b1^1[1]", "b1^1[1]*b1^2[2] + b0^1[1]*b1^1[2] - b1^1[2]*b1^2[1]"),
            # lone point followed by a smaller zero-cycle point
            ("b0^1[2]*b0^2[1]", "b0^1[1]*b0^2[2]"),
            # lone point followed by a smaller line point
            ("b0^1[2]*b1^2[1]", "b1^1[1]*b0^2[2] + b0^1[1]*b1^2[2] - b1^1[2]*b0^2[1]"),
        ],
    )
    def test_rules(self, cycle, expr, source, expected):
        """Should reach the hand-computed normal form."""
        assert normal_form(cycle(source)) == expr(expected)

    def test_normal_class_is_untouched(self, expr):
        """Should take no steps on a normal class."""
        reduction = reduce_expression(expr("b0^1[1]*b0^2[1]"))
        assert reduction.expr == expr("b0^1[1]*b0^2[1]")
        assert reduction.steps == 0
        assert reduction.certificate == ()

    def test_linear(self, expr):
        """Should reduce a combination term by term."""
        combination = expr("2 a0[2] - 1/2 b0^1[2]*b0^2[1]")
        assert normal_form_of(combination) == expr("2 b0^1[2] - 1/2 b0^1[1]*b0^2[2]")

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_every_class_reaches_normal_form(self, n):
        """Should reduce every class to certified normal terms of the same tau."""
        for c in enumerate_cycles(n):
            reduction = reduce_expression(CycleExpr.of(c))
            assert all(is_normal(term) for term, _ in reduction.expr)
            assert reduction.expr.taus() <= {c.tau}
            assert reduction.verify()


class TestPhases:
    """The canonical and normal phases on their own."""

    def test_canonical_phase_only(self, expr):
        """Should leave a canonical class to the normal phase."""
        reduction = reduce_to_canonical(expr("b0^1[2]*b0^2[1]"))
        assert reduction.steps == 0
        assert all(is_canonical(c) for c, _ in reduction.expr)

    def test_normal_phase_needs_canonical_input(self, expr):
        """Should refuse non-canonical input in the normal phase."""
        with pytest.raises(PreconditionViolated):
            reduce_to_normal(expr("a0[1]"))

    def test_step_limit(self, expr):
        """Should raise NonTermination past the step limit."""
        with pytest.raises(NonTermination, match="exceeded 1 rewrite steps"):
            reduce_expression(expr("a1[1]*a0[1]"), step_limit=1)

    def test_then_requires_matching_ends(self, expr):
        """Should refuse to chain reductions that do not meet."""
        first = Reduction(original=expr("a0[1]"), expr=expr("b0^1[1]"))
        second = Reduction(original=expr("a2[1]"), expr=expr("a2[1]"))
        with pytest.raises(ValueError):
            first.then(second)


class TestCertificates:
    """Relation certificates."""

    def test_certificate_reproduces_result(self, expr):
        """Should certify the result with one entry per step."""
        original = expr("a1[1]*a0[1]")
        reduction = reduce_expression(original)
        assert verify_certificate(original, reduction)
        assert reduction.steps == len(reduction.certificate) == 3

    def test_tampered_certificate_fails(self, cycle, expr):
        """Should reject a certificate with the wrong coefficient."""
        original = expr("a0[1]")
        relation = push(cycle("a0[1]"), PushTarget.of(0, 1))
        forged = Reduction(
            original=original,
            expr=expr("b0^1[1]"),
            certificate=(CertificateEntry(relation=relation, coefficient=Fraction(1)),),
            steps=1,
        )
        assert not forged.verify()


class TestPushOrder:
    """Normal forms do not depend on which base point is pushed first."""

    def test_both_orders(self, cycle, expr):
        """Should reach the same normal form from either first push."""
        c = cycle("a1[1]*a0[1]")
        for target in (PushTarget.of(0, 1), PushTarget.of(1, 1)):
            reduction = reduce_with_first_push(c, target)
            assert reduction.expr == expr("b0^1[1]*b1^2[1]")
            assert reduction.verify()

    def test_push_orders_agree(self, cycle):
        agree, results = push_orders_agree(cycle("a1[1]*a0[1]"))
        assert agree
        assert len(results) == 2

    def test_candidates(self):
        """Should select classes with two distinct pushable points."""
        candidates = order_check_candidates(enumerate_cycles(2))
        assert {str(c) for c in candidates} == {"a0[1]*a1[1]"}


class TestMeasure:
    """The termination measure."""

    def test_pushable_points_dominate(self, cycle):
        """Should rank open pushable points above any bubble structure."""
        assert rewrite_measure(cycle("a0[1]*b1^1[1]")) > rewrite_measure(cycle("b0^1[1]*b1^2[1]"))

    def test_fewer_zero_cycle_points_is_smaller(self, cycle):
        """Should rank a bubble with two zero-cycle points higher."""
        assert rewrite_measure(cycle("b0^1[1]*b0^1[1]")) > rewrite_measure(cycle("b0^1[1]*b1^2[1]"))
