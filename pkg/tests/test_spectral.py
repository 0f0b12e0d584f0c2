import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conormal import hamiltonian as hm
from conormal import spectral as sp
from conormal.errors import OracleUnavailableError, UnsupportedCombinationError
from conormal.geometry import Arc, ClassLabel, Point, Whole

COS = hm.TrigPoly.cosine()
FUND, PT = ClassLabel.FUNDAMENTAL, ClassLabel.POINT
G = 256
FLAT = 0.5  # lifted flows stay in the flat region, where RK4 is exact


@pytest.fixture(scope="module")
def cos_profile():
    return sp.action_profile(hm.lifted(COS))


@pytest.fixture(scope="module")
def zero_profile():
    return sp.action_profile(hm.zero(), 64)


@pytest.fixture(scope="module")
def bump_profile():
    H = hm.compose(hm.lifted(COS * 0.3), hm.Bump(0.3, 0.0, 0.3, 0.8, 0.05))
    prof = sp.action_profile(H, 512, 1e-2)
    assert prof.graphical
    return prof


# --- profiles -----------------------------------------------------------------------


def test_lifted_profile(cos_profile):
    assert cos_profile.graphical
    assert cos_profile.error_bound < 1e-6
    x = np.linspace(0, 1, 1000)
    assert np.max(np.abs(cos_profile.S(x) - COS(x))) <= 1e-6


def test_zero_profile(zero_profile):
    assert zero_profile.graphical
    assert np.all(zero_profile.S(np.linspace(0, 1, 50)) == 0.0)


def test_iterate_profile_is_n_times_f():
    n = 6
    prof = sp.action_profile(hm.iterate(hm.lifted(COS, n), n), G, FLAT)
    x = np.linspace(0, 1, 300)
    assert np.max(np.abs(prof.S(x) - n * COS(x))) <= n * 1e-6


def test_iterate_profiles_agree_with_single_profiles():
    H = hm.compose(hm.lifted(COS * 0.05, 3), hm.Bump(0.6, 0.0, 0.3, 0.6, 0.02))
    profs = sp.iterate_profiles(H, 3, 256, 1e-2)
    for n, prof in enumerate(profs, start=1):
        ref = sp.action_profile(hm.iterate(H, n), 256, 1e-2)
        assert np.max(np.abs(prof.ys - ref.ys)) <= 1e-9


def test_non_graphical_profile_is_refused():
    H = hm.Bump(0.5, 0.1, 0.3, 0.3, 1.0)
    prof = sp.action_profile(H, 512, 1e-2)
    assert not prof.graphical and prof.reason
    with pytest.raises(OracleUnavailableError):
        sp.ell_plus(prof, Point(0.5))
    with pytest.raises(OracleUnavailableError):
        sp.persistence(prof, Whole())


# --- ell_plus -----------------------------------------------------------------------


def test_ell_plus_examples(cos_profile, zero_profile):
    assert sp.ell_plus(cos_profile, Point(0.5)).value == pytest.approx(-1.0, abs=1e-6)
    assert sp.ell_plus(cos_profile, Whole(), FUND).value == pytest.approx(1.0, abs=1e-6)
    assert sp.ell_plus(cos_profile, Whole(), PT).value == pytest.approx(-1.0, abs=1e-6)
    for N in (Point(0.3), Whole(), Arc(0.1, 0.4, "-"), Arc(0.1, 0.4, "+")):
        label = sp.supported_classes(N)[0]
        assert sp.ell_plus(zero_profile, N, label).value == 0.0


def test_point_class_on_point(cos_profile):
    assert sp.ell_plus(cos_profile, Point(0.25), PT).value == pytest.approx(0.0, abs=1e-6)


def test_arc_extrema(cos_profile):
    # arc through the maximum at 0, crossing the seam
    r = sp.ell_plus(cos_profile, Arc(0.9, 0.2, "-"), FUND)
    assert r.value == pytest.approx(1.0, abs=1e-6)
    assert min(r.location, 1 - r.location) <= 1e-4
    # arc not containing an interior critical point: extremum at an endpoint
    r = sp.ell_plus(cos_profile, Arc(0.1, 0.3, "+"), PT)
    assert r.value == pytest.approx(COS(0.3), abs=1e-6)
    r = sp.ell_plus(cos_profile, Arc(0.1, 0.3, "-"), FUND)
    assert r.value == pytest.approx(COS(0.1), abs=1e-6)


def test_unsupported_combinations(cos_profile):
    with pytest.raises(UnsupportedCombinationError):
        sp.ell_plus(cos_profile, Arc(0.1, 0.3, "+"), FUND)
    with pytest.raises(UnsupportedCombinationError):
        sp.ell_plus(cos_profile, Arc(0.1, 0.3, "-"), PT)
    with pytest.raises(UnsupportedCombinationError):
        sp.persistence(cos_profile, Point(0.1))


def test_spectrality(cos_profile, bump_profile):
    for prof in (cos_profile, bump_profile):
        for N in (Point(0.37), Whole(), Arc(0.2, 0.7, "-"), Arc(0.6, 0.1, "+")):
            for label in sp.supported_classes(N):
                r = sp.ell_plus(prof, N, label)
                assert r.spectral, (N, label, r.witness)
                assert r.witness.distance <= 1e-5


def test_persistence_of_cosine(cos_profile):
    d = sp.persistence(cos_profile, Whole())
    assert d.essential0 == pytest.approx(-1.0, abs=1e-6)
    assert d.essential1 == pytest.approx(1.0, abs=1e-6)
    assert d.bars == []


def test_cross_check(cos_profile, bump_profile):
    for prof in (cos_profile, bump_profile):
        for N in (Whole(), Arc(0.2, 0.7, "-"), Arc(0.6, 0.1, "+"), Arc(0.05, 0.95, "-")):
            for c in sp.cross_check(prof, N):
                assert c.agrees, c


# --- invariants -------------------------------------------------------------------

coef = st.floats(-1, 1, allow_nan=False)


@st.composite
def polys(draw):
    d = draw(st.integers(1, 3))
    return hm.TrigPoly(tuple(draw(coef) for _ in range(d + 1)), tuple(draw(coef) for _ in range(d)))


@st.composite
def targets(draw):
    kind = draw(st.sampled_from(["point", "whole", "arc-", "arc+"]))
    if kind == "point":
        return Point(draw(st.floats(0, 0.999)))
    if kind == "whole":
        return Whole()
    a = draw(st.integers(0, 15)) / 16
    b = draw(st.integers(1, 15)) / 16
    return Arc(a, (a + b) % 1.0, kind[-1])


@settings(max_examples=25, deadline=None)
@given(polys(), polys(), targets())
def test_monotone_in_the_hamiltonian(f, h, N):
    lo, *_ = h.extrema()
    g = f + h - hm.TrigPoly((lo,))  # g >= f pointwise
    cut = hm.safe_cutoff(f.deriv_bound() + g.deriv_bound())
    pf = sp.action_profile(hm.Lifted(f, cut), G, FLAT)
    pg = sp.action_profile(hm.Lifted(g, cut), G, FLAT)
    for label in sp.supported_classes(N):
        assert sp.ell_plus(pf, N, label, False).value <= sp.ell_plus(pg, N, label, False).value + 1e-8


@settings(max_examples=15, deadline=None)
@given(polys(), st.integers(1, 8), st.floats(0, 0.999))
def test_iterate_linearity(f, n, x):
    H = hm.lifted(f, n)
    one = sp.action_profile(H, G, FLAT)
    many = sp.action_profile(hm.iterate(H, n), G, FLAT)
    assert sp.ell_plus(many, Point(x), witness=False).value == pytest.approx(n * one.S(x), abs=n * 1e-6)


@settings(max_examples=15, deadline=None)
@given(polys())
def test_lifted_validation(f):
    prof = sp.action_profile(hm.lifted(f), G, FLAT)
    assert np.max(np.abs(prof.ys - f(prof.xs))) <= 1e-6


# --- inequalities -------------------------------------------------------------------


def test_triangle_examples():
    f, g = COS, hm.TrigPoly((0.1, -0.3, 0.2), (0.4, 0.0))
    cut = hm.safe_cutoff(f.deriv_bound() + g.deriv_bound(), 2)
    H, K = hm.Lifted(f, cut), hm.Lifted(g, cut)
    x = 0.3
    r = sp.check_triangle(H, K, Point(x), grid=G, step=FLAT)
    assert r.holds and r.margin == pytest.approx(1.0 - f(x), abs=1e-6)
    r = sp.check_triangle(H, hm.zero(), Point(x), grid=G, step=FLAT)
    assert r.holds and r.margin == pytest.approx(1.0 - f(x), abs=1e-6)
    r = sp.check_triangle(hm.zero(), hm.zero(), Whole(), grid=64)
    assert r.holds and r.margin == 0.0


def test_triangle_with_bump_and_witness():
    H = hm.lifted(COS * 0.3)
    K = hm.Bump(0.3, 0.0, 0.3, 0.8, 0.05)
    r = sp.check_triangle(H, K, Arc(0.8, 0.4, "-"), grid=512, step=1e-2, witness=True)
    assert r.holds


def test_triangle_refuses_plus_arc():
    with pytest.raises(UnsupportedCombinationError):
        sp.check_triangle(hm.zero(), hm.zero(), Arc(0.1, 0.2, "+"), grid=64)


def test_class_bound_examples():
    r = sp.check_class_bound(hm.lifted(COS), Point(0.5), grid=G, step=FLAT)
    assert r.holds and r.bound == pytest.approx(1.0, abs=1e-6)
    assert r.entries[0][1] == pytest.approx(-1.0, abs=1e-6)
    r = sp.check_class_bound(hm.zero(), Whole(), grid=64)
    assert r.holds and all(v == 0.0 for _, v, _ in r.entries)
    f = hm.TrigPoly.shifted_cosine(0.6)  # maximum at 0.1
    r = sp.check_class_bound(hm.lifted(f), Arc(0.0, 0.2, "-"), grid=G, step=FLAT)
    assert r.holds and r.entries[0][1] == pytest.approx(1.0, abs=1e-6)


def test_spectral_value():
    assert sp.spectral_value(hm.lifted(COS), Point(0.0), grid=G, step=FLAT) == pytest.approx(1.0, abs=1e-6)
