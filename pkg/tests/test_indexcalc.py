from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conormal import indexcalc as ic
from conormal.errors import DomainError

H = Fraction(1, 2)
half_ints = st.integers(-40, 40).map(lambda k: Fraction(k, 2))


@st.composite
def dims(draw):
    m = draw(st.integers(0, 10))
    return m, draw(st.integers(0, m))


def test_pants_examples():
    assert ic.dim_pants(0, 0, 0, 1, 0) == -1
    assert ic.dim_pants(0, 0, 0, 2, 2) == -1
    assert ic.dim_pants(0, 0, 0, 0, 0) == 0


def test_half_strip_examples():
    assert ic.dim_half_strip(0, 2, ic.INCOMING) == 1
    assert ic.dim_half_strip(H, 1, ic.OUTGOING) == 1
    assert ic.dim_half_strip(0, 0, ic.INCOMING) == 0
    with pytest.raises(DomainError):
        ic.dim_half_strip(0, 1, "sideways")


def test_whole_strip_examples():
    assert ic.dim_whole_strip(3, 3, 4, 4) == 0
    assert ic.dim_whole_strip(1, 0, 2, 1) == 0
    assert ic.dim_whole_strip(0, 0, 1, 0) == -1


def test_results_are_exact():
    v = ic.dim_pants(H, "3/2", Fraction(-1, 2), 3, 1)
    assert isinstance(v, Fraction) and v == H + Fraction(3, 2) + H + H * 1 - 3


def test_gluing_examples():
    assert ic.verify_gluing(0, 0, 0, 0, 0, 0, 0)
    assert ic.verify_gluing(H, -3, "7/2", 2, Fraction(-5, 2), 7, 3)


def test_product_degree_examples():
    assert ic.product_degree(1, 1, 1) == 1
    assert ic.product_degree(4, 5, 0) == 9
    assert ic.intersection_degree(4, 5, 2) == 7


def test_intertwining_only_when_dims_agree():
    assert ic.product_intertwines(3, 3)
    assert not ic.product_intertwines(3, 2)
    for m in range(1, 8):
        for n in range(m):
            assert ic.product_degree(2, 3, m) != ic.intersection_degree(2, 3, n)


@pytest.mark.parametrize("bad", [0.5, 1e-3, Fraction(1, 3), "1/4", True, None])
def test_rejects_non_half_integers(bad):
    with pytest.raises(DomainError):
        ic.dim_pants(bad, 0, 0, 1, 0)


def test_rejects_bad_dimensions():
    with pytest.raises(DomainError):
        ic.dim_pants(0, 0, 0, 1, 2)
    with pytest.raises(DomainError):
        ic.dim_whole_strip(0, 0, -1, 0)
    with pytest.raises(DomainError):
        ic.IndexData(H, 2, 3)
    assert ic.IndexData("3/2", 2, 1).mu == Fraction(3, 2)


@given(half_ints, half_ints, half_ints, half_ints, half_ints, dims())
def test_gluing_identity(m1, m2, mo, mx, my, d):
    lhs, rhs = ic.gluing_sides(m1, m2, mo, mx, my, *d)
    assert lhs == rhs
    assert ic.verify_gluing(m1, m2, mo, mx, my, *d)


@given(half_ints, half_ints, dims())
def test_zero_dimensional_output(m1, m2, d):
    mo = ic.output_grading(m1, m2, *d)
    assert ic.dim_pants(m1, m2, mo, *d) == 0
    assert mo.denominator <= 2


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(0, 10))
def test_pants_shift_matches_product_degree_when_n_is_m(r, s, m):
    # with dim_N = dim_M the output shift is r + s + m/2 - m, i.e. the product shift up to the m/2 normalization
    mo = ic.output_grading(r, s, m, m)
    assert mo - H * m == ic.product_degree(r, s, m)
