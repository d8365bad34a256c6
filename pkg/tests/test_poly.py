from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convlab.poly import (
    IntPolynomial,
    cyclotomic,
    discriminant,
    euler_phi,
    from_power_sums,
    interpolate,
    isolate_real_roots,
    is_squarefree,
    power_sums,
    rational_roots,
    resultant,
    squarefree_part,
    sturm_count,
    sturm_sequence,
)

from oracles import mp_roots, sylvester_resultant

small_coeffs = st.lists(st.integers(-6, 6), min_size=2, max_size=5).filter(lambda c: c[-1] != 0)


def test_trimming_and_degree():
    assert IntPolynomial((1, 2, 0, 0)).coeffs == (1, 2)
    assert IntPolynomial(()).degree == -1
    assert IntPolynomial((0, 0, 3)).degree == 2


def test_arithmetic():
    f = IntPolynomial((-1, 1))
    assert (f * f).coeffs == (1, -2, 1)
    assert (f**3).coeffs == (-1, 3, -3, 1)
    assert (f + IntPolynomial((1,))).coeffs == (0, 1)
    assert IntPolynomial((0, 0, 1)).derivative().coeffs == (0, 2)


def test_str_form():
    assert str(IntPolynomial((-2, 0, 0, 1))) == "x^3 - 2"


def test_json_round_trip():
    f = IntPolynomial((-(10**40), 3, 0, 7))
    assert IntPolynomial.from_json(f.to_json()) == f
    assert all(isinstance(c, str) for c in f.to_json())


@given(small_coeffs, small_coeffs)
@settings(max_examples=80, deadline=None)
def test_resultant_matches_sylvester(f, g):
    assert resultant(IntPolynomial(tuple(f)), IntPolynomial(tuple(g))) == sylvester_resultant(f, g)


def test_known_resultants_and_discriminants():
    assert resultant(IntPolynomial((-2, 0, 1)), IntPolynomial((-3, 0, 1))) == 1
    assert discriminant(IntPolynomial((-1, -1, 0, 1))) == -23
    assert discriminant(IntPolynomial((-1, 0, -1, 1))) == -31
    assert discriminant(IntPolynomial((-2, 0, 0, 1))) == -108


def test_squarefree_part():
    f = IntPolynomial.from_roots([1, 1, 2, 3, 3, 3])
    assert squarefree_part(f) == IntPolynomial.from_roots([1, 2, 3])
    assert not is_squarefree(f)
    assert is_squarefree(IntPolynomial((-2, 0, 1)))


def test_cyclotomic_small_cases():
    assert cyclotomic(1).coeffs == (-1, 1)
    assert cyclotomic(2).coeffs == (1, 1)
    assert cyclotomic(4).coeffs == (1, 0, 1)
    assert cyclotomic(6).coeffs == (1, -1, 1)
    assert cyclotomic(12).coeffs == (1, 0, -1, 0, 1)
    for m in range(1, 40):
        assert cyclotomic(m).degree == euler_phi(m)


def test_cyclotomic_product_is_x_n_minus_1():
    for n in (6, 12, 15, 20):
        prod = IntPolynomial((1,))
        for d in range(1, n + 1):
            if n % d == 0:
                prod = prod * cyclotomic(d)
        assert prod == IntPolynomial((-1,) + (0,) * (n - 1) + (1,))


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_interpolate_recovers_polynomial(coeffs):
    f = IntPolynomial(tuple(coeffs))
    xs = list(range(len(coeffs) + 2))
    got = interpolate(xs, [f(x) for x in xs])
    assert IntPolynomial(tuple(int(c) for c in got)) == f


def test_power_sums_round_trip():
    f = IntPolynomial((-1, -1, 0, 1))
    p = power_sums(f, 6)
    assert p[:6] == [3, 0, 2, 3, 2, 5]
    back = from_power_sums(p, 3)
    assert [Fraction(c) for c in back] == [Fraction(c) for c in f.coeffs]


@given(small_coeffs)
@settings(max_examples=60, deadline=None)
def test_sturm_count_matches_numeric_roots(c):
    f = squarefree_part(IntPolynomial(tuple(c)))
    if f.degree < 1:
        return
    seq = sturm_sequence(f)
    roots = [r for r in mp_roots(list(f.coeffs)) if abs(r.imag) < 1e-25]
    lo, hi = Fraction(-7, 3), Fraction(5, 2)
    expected = sum(1 for r in roots if float(lo) < r.real <= float(hi))
    assert sturm_count(seq, lo, hi) == expected


def test_isolate_real_roots_separates():
    f = IntPolynomial.from_roots([-3, 0, 1, 2])
    ivs = isolate_real_roots(f)
    assert len(ivs) == 4
    for lo, hi in ivs:
        assert lo <= hi


def test_rational_roots():
    assert sorted(rational_roots(IntPolynomial((-4, 0, 1)))) == [-2, 2]
    assert rational_roots(IntPolynomial((-2, 0, 0, 1))) == []
    assert Fraction(1, 2) in rational_roots(IntPolynomial((-1, 2)))
