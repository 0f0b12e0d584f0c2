import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conormal.errors import DomainError
from conormal.geometry import Arc, BasePoint, ClassLabel, PhasePoint, Point, Whole, circle_reduce, contains, distance

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
unit = st.floats(min_value=0.0, max_value=1.0, exclude_max=True)


@pytest.mark.parametrize("x, want", [(1.25, 0.25), (0.0, 0.0), (-0.3, 0.7)])
def test_circle_reduce_examples(x, want):
    assert circle_reduce(x).q == pytest.approx(want, abs=1e-15)


@pytest.mark.parametrize("x", [math.inf, -math.inf, math.nan])
def test_circle_reduce_rejects_non_finite(x):
    with pytest.raises(DomainError):
        circle_reduce(x)


def test_fractions_stay_exact():
    assert circle_reduce(Fraction(7, 3)).q == Fraction(1, 3)


def test_tiny_negative_reduces_into_range():
    assert 0.0 <= circle_reduce(-1e-18).q < 1.0


@given(finite)
def test_reduce_is_idempotent(x):
    once = circle_reduce(x)
    assert circle_reduce(once.q) == once
    assert 0.0 <= once.q < 1.0


@given(finite, finite)
def test_distance_bounded_by_half(x, y):
    assert 0.0 <= distance(x, y) <= 0.5


def test_contains_examples():
    assert contains(Whole(), BasePoint(0.42), 0)
    assert contains(Point(0.5), BasePoint(0.5), 0)
    assert not contains(Arc(0.1, 0.4, "-"), BasePoint(0.7), 0)


def test_contains_tolerance():
    assert contains(Point(0.0), 0.999, 0.002)
    assert contains(Arc(0.1, 0.4), 0.405, 0.01)
    assert contains(Arc(0.1, 0.4), 0.095, 0.01)
    with pytest.raises(DomainError):
        contains(Whole(), 0.1, -1.0)


def test_arc_wraps_counterclockwise():
    arc = Arc(0.9, 0.1)
    assert arc.length == pytest.approx(0.2)
    assert contains(arc, 0.0)
    assert not contains(arc, 0.5)


def test_arc_validation():
    with pytest.raises(DomainError):
        Arc(0.25, 1.25)
    with pytest.raises(DomainError):
        Arc(0.2, 0.3, "*")


@given(unit, unit, unit, finite)
def test_arc_membership_rotation_invariant(a, b, x, shift):
    if abs(a - b) < 1e-9 or abs(circle_reduce(a + shift).q - circle_reduce(b + shift).q) < 1e-9:
        return
    arc, rot = Arc(a, b), Arc(a + shift, b + shift)
    # stay away from the endpoints where rounding decides membership
    off = arc.offset(x)
    if min(abs(off), abs(off - arc.length), abs(1 - off)) < 1e-6:
        return
    assert contains(arc, x) == contains(rot, x + shift)


def test_phase_point_reduces_base():
    z = PhasePoint(1.5, 2)
    assert z.q.q == 0.5 and z.p == 2.0


def test_class_labels():
    assert ClassLabel("fundamental") is ClassLabel.FUNDAMENTAL
    assert ClassLabel("point") is ClassLabel.POINT
