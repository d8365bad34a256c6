from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convlab.algebraic import (
    PowerThreshold,
    RationalInterval,
    Verdict,
    enclose_affine,
    floor_of,
    make_algebraic,
    nearest_distance,
    real_root,
    refine,
    trace_power_sums,
)
from convlab.errors import (
    InvalidInput,
    MultipleRootsInInterval,
    NoRootInInterval,
    ReduciblePolynomial,
)
from convlab.poly import IntPolynomial

from oracles import cbrt2_scaled, frac_to_mpf


def test_make_algebraic_examples(cbrt2, phi):
    assert cbrt2.degree == 3
    assert phi.degree == 2
    assert not cbrt2.trusted_irreducible
    with pytest.raises(ReduciblePolynomial):
        real_root((-4, 0, 1), 0, 3)
    with pytest.raises(ReduciblePolynomial):
        real_root((1, -2, 1), 0, 3)


def test_make_algebraic_interval_errors():
    with pytest.raises(NoRootInInterval):
        real_root((-2, 0, 0, 1), 2, 3)
    with pytest.raises(MultipleRootsInInterval):
        real_root((-2, 0, 1), -2, 2)
    with pytest.raises(InvalidInput):
        make_algebraic((), RationalInterval(0, 1))


def test_make_algebraic_normalizes_sign_and_content():
    x = real_root((4, 0, -2), 1, 2)
    assert x.minpoly.coeffs == (-2, 0, 1)


def test_degree_four_is_flagged_trusted():
    x = real_root((-2, 0, 0, 0, 1), 1, 2)
    assert x.trusted_irreducible


def test_refine_widths(cbrt2, phi):
    iv = refine(cbrt2, 1)
    assert iv.width <= Fraction(1, 2)
    assert iv.lo ** 3 <= 2 <= iv.hi ** 3
    iv = refine(phi, 10)
    assert iv.width <= Fraction(1, 1024)
    assert iv.lo ** 2 - iv.lo - 1 <= 0 <= iv.hi ** 2 - iv.hi - 1


def test_refine_200_bits_matches_integer_root_oracle(cbrt2):
    iv = refine(cbrt2, 200)
    ref = Fraction(cbrt2_scaled(400), 1 << 400)
    assert abs(iv.mid - ref) <= Fraction(1, 1 << 199)


@pytest.mark.parametrize("bits", [1, 7, 63, 64, 65, 130, 500])
def test_refine_nests(cbrt2, bits):
    outer, inner = refine(cbrt2, bits), refine(cbrt2, bits + 1)
    assert inner.within(outer)


def test_refine_is_deterministic(cbrt2):
    assert refine(cbrt2, 777) == refine(cbrt2, 777)


def test_floor_of_examples(cbrt2, phi, sqrt2):
    assert floor_of(cbrt2) == 1
    assert floor_of(phi) == 1
    assert floor_of(sqrt2) == 1
    assert floor_of(sqrt2, Fraction(-3, 2)) == -1


@given(st.integers(-10**30, 10**30).filter(lambda m: m != 0))
@settings(max_examples=80, deadline=None)
def test_enclose_affine_contains_value(m):
    x = real_root((-2, 0, 0, 1), 1, 2)
    e = enclose_affine(x, m, Fraction(1, 3), 80)
    with mpmath.workdps(80):
        v = m * mpmath.cbrt(2) + mpmath.mpf(1) / 3
        assert frac_to_mpf(e.lo) <= v <= frac_to_mpf(e.hi)
    assert e.width <= Fraction(1, 1 << 80)


def test_nearest_distance_examples(sqrt2, cbrt2):
    cd = nearest_distance(5, sqrt2, Fraction(1, 10))
    assert cd.verdict is Verdict.LESS
    with mpmath.workdps(160):
        ref = abs(5 * mpmath.sqrt(2) - 7)
        assert frac_to_mpf(cd.enclosure.lo) <= ref <= frac_to_mpf(cd.enclosure.hi)
    assert abs(float(cd.enclosure.mid) - 0.0710678) < 1e-6
    cd = nearest_distance(1, cbrt2, Fraction(1, 2))
    assert cd.verdict is Verdict.LESS
    assert abs(float(cd.enclosure.mid) - 0.259921) < 1e-6


def test_nearest_distance_greater_and_undecided(sqrt2):
    assert nearest_distance(5, sqrt2, Fraction(1, 20)).verdict is Verdict.GREATER
    with pytest.raises(InvalidInput):
        nearest_distance(0, sqrt2, Fraction(1, 2))


def test_nearest_distance_power_threshold(cbrt2):
    # ||1 * 2^(1/3)|| ~ 0.26 < 3^(-1) but > 5^(-1)
    assert nearest_distance(1, cbrt2, PowerThreshold(3, Fraction(1))).verdict is Verdict.LESS
    assert nearest_distance(1, cbrt2, PowerThreshold(5, Fraction(1))).verdict is Verdict.GREATER


@given(st.integers(1, 10**12))
@settings(max_examples=60, deadline=None)
def test_nearest_distance_verdict_stable_under_cap_doubling(m):
    x = real_root((-2, 0, 0, 1), 1, 2)
    thr = PowerThreshold(m + 1, Fraction(1, 2))
    a = nearest_distance(m, x, thr, bits_cap=256)
    b = nearest_distance(m, x, thr, bits_cap=512)
    if a.verdict is not Verdict.UNDECIDED:
        assert b.verdict is a.verdict


def test_power_threshold_exact():
    t = PowerThreshold(4, Fraction(1, 2))
    assert t.exceeds(Fraction(1, 3))
    assert not t.exceeds(Fraction(1, 2))
    assert not t.below(Fraction(1, 2))
    assert t.below(Fraction(3, 5))


def test_trace_power_sums_examples():
    assert trace_power_sums(IntPolynomial((-1, -1, 0, 1)), 5) == [3, 0, 2, 3, 2, 5]
    assert trace_power_sums(IntPolynomial((-1, 1)), 3) == [1, 1, 1, 1]
    assert trace_power_sums(IntPolynomial((-1, -1, 1)), 4) == [2, 1, 3, 4, 7]
    with pytest.raises(InvalidInput):
        trace_power_sums(IntPolynomial((1, 2)), 3)


@pytest.mark.parametrize("coeffs", [(-1, -1, 0, 1), (-1, 0, -1, 1), (3, -5, 2, 7, 1)])
def test_trace_sequence_satisfies_charpoly_recurrence(coeffs):
    f = IntPolynomial(coeffs)
    t = f.degree
    u = trace_power_sums(f, 200 + t)
    c = [-coeffs[t - i] for i in range(1, t + 1)]
    for n in range(0, 201):
        assert u[n + t] == sum(c[i - 1] * u[n + t - i] for i in range(1, t + 1))


def test_trace_power_sums_match_numeric_roots():
    f = IntPolynomial((-1, -1, 0, 1))
    u = trace_power_sums(f, 30)
    with mpmath.workdps(60):
        roots = mpmath.polyroots([1, 0, -1, -1], extraprec=200)
        for n in range(31):
            assert abs(sum(r**n for r in roots) - u[n]) < mpmath.mpf(10) ** -30
