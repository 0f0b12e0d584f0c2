import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conormal.persistence import circle_persistence, graph_persistence
from oracles import sweep_circle


def test_constant_function_has_no_finite_bars():
    d = circle_persistence(np.zeros(64))
    assert d.bars == [] and d.essential0 == 0.0 and d.essential1 == 0.0


def test_two_minima_give_one_bar():
    # minima m1 < m2, maxima 3 and 2
    v = np.array([0.0, 1.5, 3.0, 1.5, 1.0, 1.6, 2.0, 1.2])
    d = circle_persistence(v)
    assert d.bars == [(1.0, 2.0)]
    assert d.essential0 == 0.0 and d.essential1 == 3.0


def test_single_minimum_on_circle():
    q = np.arange(200) / 200.0
    d = circle_persistence(np.cos(2 * np.pi * q))
    assert d.bars == []
    assert d.essential0 == -1.0 and d.essential1 == 1.0


def test_path_has_no_cycle():
    v = [3.0, 0.0, 2.0, -1.0, 4.0]
    d = graph_persistence(v, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert d.essential1 is None
    assert d.bars == [(0.0, 2.0)]
    assert d.essential0 == -1.0


def test_bars_ordered():
    rng = np.random.default_rng(3)
    d = circle_persistence(rng.normal(size=300))
    assert all(b < de for b, de in d.bars)


@settings(max_examples=150, deadline=None)
@given(arrays(np.int64, st.integers(3, 40), elements=st.integers(-6, 6)))
def test_matches_threshold_sweep(v):
    v = v.astype(float)
    d = circle_persistence(v)
    bars, e0, e1 = sweep_circle(v)
    assert d.bars == bars
    assert d.essential0 == e0 and d.essential1 == e1


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.integers(3, 60), elements=st.floats(-10, 10)))
def test_invariants(v):
    d = circle_persistence(v)
    assert d.essential0 == v.min()
    assert d.essential1 == v.max()
    for b, de in d.bars:
        assert v.min() <= b < de <= v.max()
    # each finite bar needs a separate local minimum and maximum
    assert len(d.bars) <= len(v) // 2


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.integers(3, 60), elements=st.floats(-10, 10)), st.integers(0, 59))
def test_rotation_invariant(v, k):
    a = circle_persistence(v)
    b = circle_persistence(np.roll(v, k % len(v)))
    assert a.bars == b.bars and a.essential0 == b.essential0 and a.essential1 == b.essential1
