import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conormal import hamiltonian as hm
from conormal import viterbo as vb
from conormal.errors import DomainError

COS = hm.TrigPoly.cosine()


@pytest.mark.parametrize("x1, n, expected", [(0.3, 1, math.cos(2 * math.pi * 0.3)), (0.5, 2, 1.0), (0.25, 2, -1.0)])
def test_rescaled_examples(x1, n, expected):
    assert vb.rescaled_spectral(COS, x1, n) == pytest.approx(expected, abs=1e-6)


def test_rescaled_rejects_bad_n():
    with pytest.raises(DomainError):
        vb.rescaled_spectral(COS, 0.1, 0)


def test_fixed_point_orbit():
    e = vb.orbit_experiment(COS, 0.0, 50, spot_checks=0)
    assert np.all(e.rhs_sup == 1.0) and e.lhs == 1.0


def test_golden_orbit_fills_the_circle():
    f = hm.TrigPoly.shifted_cosine(vb.GOLDEN)
    e = vb.orbit_experiment(f, vb.GOLDEN, 10**4, spot_checks=10)
    assert e.lhs == pytest.approx(-1.0, abs=1e-12)
    assert e.rhs_sup[-1] >= 0.995
    assert e.gap <= 5e-3
    assert e.separation >= 1.9
    assert len(e.spot_checks) >= 1
    for n, v in e.spot_checks:
        assert v == pytest.approx(f((n * vb.GOLDEN) % 1.0), abs=1e-6)


def test_golden_cosine_example():
    e = vb.orbit_experiment(COS, vb.GOLDEN, 10**4, spot_checks=0)
    assert e.rhs_sup[-1] >= 1.0 - 5e-3


@pytest.mark.parametrize("n_max", [1, 10, 500])
def test_lhs_at_minimum_is_minus_one(n_max):
    e = vb.orbit_experiment(COS, 0.5, n_max, spot_checks=0)
    assert e.lhs == -1.0


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 0.999), st.integers(1, 300))
def test_running_sup_invariants(x1, n_max):
    e = vb.orbit_experiment(COS, x1, n_max, spot_checks=0)
    assert np.all(np.diff(e.rhs_sup) >= 0)
    assert np.all(e.rhs_sup <= 1.0)
    n = np.arange(1, n_max + 1)
    assert np.allclose(e.rhs_sequence, COS(np.mod(n * x1, 1.0)), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30), st.integers(0, 29))
def test_rational_orbit_stabilizes(q, p):
    x = Fraction(p % q, q)
    f = hm.TrigPoly((0.1, 0.3, -0.5), (0.2, 0.4))
    e = vb.orbit_experiment(f, x, 3 * q, spot_checks=0)
    orbit_max = max(float(f(float((k * x) % 1))) for k in range(q))
    assert np.all(e.rhs_sup[q - 1:] == e.rhs_sup[q - 1])
    assert e.rhs_sup[q - 1] == pytest.approx(orbit_max, abs=1e-15)
