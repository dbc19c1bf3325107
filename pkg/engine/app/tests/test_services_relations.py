"""Tests for push and bubble relations."""
from __future__ import annotations

import pytest

from app.core.errors import FactorsNotFound, TargetNotFound
from app.services.cycle_model import RelationKind, first_normal_violation, is_canonical
from app.services.relations import (
    ExpansionConvention,
    PushTarget,
    all_relations,
    line_line,
    measure_A,
    point_line,
    point_point,
    push,
    push_one_cycle,
    push_zero_cycle,
    pushable_targets,
    relations_from,
    resolve_convention,
)


class TestPush:
    """Moving a base point into a new first bubble."""

    def test_single_point(self, cycle, expr):
        """Should move a lone open point into the first bubble."""
        relation = push(cycle("a0[1]"), PushTarget.of(0, 1))
        assert relation.expr == expr("a0[1] - b0^1[1]")
        assert relation.kind is RelationKind.PUSH_POINT
        assert relation.mults == (1,)
        assert relation.bubble_index is None

    def test_line_point(self, cycle, expr):
        """Should push a line point onto the divisor."""
        relation = push_one_cycle(cycle("a1[1]*a0[1]"), PushTarget.of(1, 1))
        assert relation.expr == expr("a1[1]*a0[1] - a0[1]*b1^1[1]")
        assert relation.kind is RelationKind.PUSH_LINE

    def test_lines_may_follow_into_the_bubble(self, cycle, expr):
        """Should let a line point follow the pushed point into the bubble."""
        relation = push_zero_cycle(cycle("a1[1]*a0[1]"), PushTarget.of(0, 1))
        assert relation.expr == expr("a1[1]*a0[1] - a1[1]*b0^1[1] - b0^1[1]*b0^1[1]")

    def test_plane_points_land_on_the_divisor(self, cycle, expr):
        """Should restrict a plane point to the divisor when it follows."""
        relation = push(cycle("a2[1]*a0[1]"), PushTarget.of(0, 1))
        assert relation.expr == expr("a2[1]*a0[1] - a2[1]*b0^1[1] - b0^1[1]*b1^1[1]")

    def test_existing_bubbles_shift_up(self, cycle, expr):
        """Should shift existing bubbles up by one."""
        relation = push(cycle("a0[1]*b1^1[1]"), PushTarget.of(0, 1))
        assert relation.expr == expr("a0[1]*b1^1[1] - b0^1[1]*b1^2[1]")

    def test_identical_points_binomial(self, cycle):
        """Should count identical followers with a binomial coefficient."""
        relation = push(cycle("a0[1]*a2[1]*a2[1]"), PushTarget.of(0, 1), ExpansionConvention.BINOMIAL)
        assert relation.expr.coefficient(cycle("a2[1]*b0^1[1]*b1^1[1]")) == -2

    def test_identical_points_distinct(self, cycle):
        """Should keep each resulting class once under the distinct convention."""
        relation = push(cycle("a0[1]*a2[1]*a2[1]"), PushTarget.of(0, 1), "distinct")
        assert relation.expr.coefficient(cycle("a2[1]*b0^1[1]*b1^1[1]")) == -1

    def test_missing_target(self, cycle):
        """Should raise TargetNotFound when the target is absent."""
        with pytest.raises(TargetNotFound):
            push(cycle("a2[1]"), PushTarget.of(0, 1))

    def test_plane_points_are_not_pushable(self):
        with pytest.raises(ValueError):
            PushTarget.of(2, 1)

    def test_wrong_push_kind(self, cycle):
        """Should refuse a line target in the zero-cycle push."""
        with pytest.raises(ValueError):
            push_zero_cycle(cycle("a1[1]"), PushTarget.of(1, 1))

    def test_pushable_targets(self, cycle):
        """Should list distinct pushable factors, smallest first."""
        targets = pushable_targets(cycle("a2[1]*a1[1]*a0[1]*a0[1]"))
        assert [str(t.factor) for t in targets] == ["a0[1]", "a1[1]"]


class TestBubbleRelations:
    """Point-Point, Point-Line and Line-Line relations inside one bubble."""

    def test_point_point(self, cycle, expr):
        """Should equate lifting either zero-cycle point."""
        relation = point_point(cycle("b0^1[2]*b0^1[1]"), 1, 2, 1)
        assert relation.expr == expr("b0^1[1]*b0^2[2] - b0^1[2]*b0^2[1]")
        assert relation.kind is RelationKind.POINT_POINT
        assert relation.bubble_index == 1

    def test_point_line(self, cycle, expr):
        """Should add the stabilized term with both points left in place."""
        relation = point_line(cycle("b0^1[1]*b1^1[1]"), 1, 1, 1)
        assert relation.expr == expr("b0^1[1]*b1^2[1] - b1^1[1]*b0^2[1] - b0^1[1]*b0^1[1]")

    def test_line_line(self, cycle, expr):
        relation = line_line(cycle("b1^1[1]*b1^1[2]"), 1, 1, 2)
        assert relation.expr == expr(
            "b1^1[2]*b1^2[1] + b0^1[2]*b1^1[1] - b1^1[1]*b1^2[2] - b0^1[1]*b1^1[2]"
        )

    def test_line_line_antisymmetric(self, cycle):
        """Should change sign when the two lines are exchanged."""
        c = cycle("b1^1[1]*b1^1[2]*b0^1[1]")
        assert line_line(c, 1, 1, 2).expr == -line_line(c, 1, 2, 1).expr

    def test_other_factors_distribute(self, cycle):
        """Should let other factors stay or move with the lifted point."""
        relation = point_point(cycle("b0^1[1]*b0^1[2]*b1^1[1]"), 1, 2, 1)
        assert relation.expr.coefficient(cycle("b0^1[1]*b0^2[2]*b1^2[1]")) == 1
        assert relation.expr.coefficient(cycle("b0^1[1]*b1^1[1]*b0^2[2]")) == 1

    def test_higher_bubbles_shift(self, cycle, expr):
        """Should shift bubbles above the split by one."""
        relation = point_point(cycle("b0^1[1]*b0^1[2]*b1^2[3]"), 1, 2, 1)
        assert relation.expr == expr("b0^1[1]*b0^2[2]*b1^3[3] - b0^1[2]*b0^2[1]*b1^3[3]")

    def test_missing_factors(self, cycle):
        """Should raise FactorsNotFound for absent factors or bubbles."""
        with pytest.raises(FactorsNotFound):
            point_point(cycle("b0^1[1]*b0^1[1]"), 1, 1, 2)
        with pytest.raises(FactorsNotFound):
            point_line(cycle("b0^1[1]*b1^1[1]"), 2, 1, 1)


class TestRelationSets:
    """Collections of relations by source and by length."""

    def test_relations_from_single_point(self, cycle):
        relations = relations_from(cycle("a0[1]"))
        assert [r.kind for r in relations] == [RelationKind.PUSH_POINT]

    def test_all_relations_length_one(self):
        relations = all_relations(1)
        assert sorted(r.kind.value for r in relations) == ["PushLine", "PushPoint"]

    @pytest.mark.parametrize("n", [2, 3])
    def test_all_relations_are_homogeneous(self, n):
        """Should keep every relation homogeneous in length and tau."""
        for relation in all_relations(n):
            assert relation.expr.is_homogeneous()
            assert relation.expr.lengths() == {n}

    def test_no_duplicate_sources(self):
        """Should build each relation once."""
        relations = all_relations(3)
        keys = [(r.kind, r.source, r.bubble_index, r.mults) for r in relations]
        assert len(keys) == len(set(keys))

    def test_rejects_non_positive_length(self):
        with pytest.raises(ValueError):
            all_relations(0)

    def test_convention_defaults_to_settings(self):
        """Should fall back to the configured convention."""
        assert resolve_convention() is ExpansionConvention.BINOMIAL
        assert resolve_convention("distinct") is ExpansionConvention.DISTINCT


class TestMeasureA:
    """The lone-point inversion count."""

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("b0^1[3]*b0^2[2]*b0^3[1]", 3),
            ("b0^1[1]*b0^2[2]", 0),
            ("b0^1[2]*b1^2[1]", 1),
            ("b0^1[2]*b1^1[3]*b0^2[1]", 0),
        ],
    )
    def test_measure(self, cycle, text, expected):
        """Should count pairs of a lone point and a higher smaller bubble."""
        assert measure_A(cycle(text)) == expected

    def test_point_point_rewrite_can_raise_the_measure(self, cycle):
        """Should show a Point-Point term with a larger measure than the class it rewrites."""
        rewritten = cycle("b0^1[2]*b0^2[2]*b0^3[2]*b0^4[1]*b1^4[1]")
        assert is_canonical(rewritten)
        assert first_normal_violation(rewritten) == 3

        merged = cycle("b0^1[2]*b0^2[2]*b0^3[2]*b0^3[1]*b1^3[1]")
        relation = point_point(merged, 3, 2, 1)
        introduced = cycle("b0^1[2]*b0^2[2]*b0^3[2]*b1^3[1]*b0^4[1]")
        assert relation.expr.coefficient(rewritten) == -1
        assert relation.expr.coefficient(introduced) == -1
        assert measure_A(rewritten) == 3
        assert measure_A(introduced) == 4
