import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convlab.digits import (
    digit_stats,
    fib,
    lowdc_divisor_max,
    repdigit_candidates,
    sparse_candidates,
    sparse_divisor_max,
    to_digits,
    zeckendorf,
)
from convlab.errors import InvalidInput, UnsupportedSparsity

from oracles import brute_repdigit_max, brute_sparse_max, is_repdigit, nonzero_digits, zeckendorf_brute_ok


def test_digit_stats_examples():
    s = digit_stats(1000, 10)
    assert (s.L, s.dc_s1, s.dc_all) == (1, 1, 1)
    s = digit_stats(5, 2)
    assert (s.L, s.dc_s1, s.dc_all) == (2, 1, 2)
    s = digit_stats(7, 2)
    assert (s.L, s.dc_s1, s.dc_all) == (3, 0, 0)
    assert s.to_json()["digits"] == [1, 1, 1]


@given(st.integers(1, 10**40), st.integers(2, 40))
@settings(max_examples=200, deadline=None)
def test_digit_stats_round_trip(n, b):
    s = digit_stats(n, b)
    assert s.value() == n
    assert s.L == nonzero_digits(n, b)
    assert s.dc_all >= s.dc_s1 >= s.dc_all - 1
    assert (s.dc_all == 0) == is_repdigit(n, b)


def test_to_digits_rejects_bad_input():
    with pytest.raises(InvalidInput):
        to_digits(0, 10)
    with pytest.raises(InvalidInput):
        to_digits(5, 1)


def test_zeckendorf_examples():
    assert fib(9) == 34
    z = zeckendorf(34)
    assert z.indices == (9,) and z.count == 1
    assert zeckendorf(10).indices == (6, 3)
    assert zeckendorf(100).indices == (11, 6, 4)
    assert zeckendorf(1).indices == (2,)
    with pytest.raises(InvalidInput):
        zeckendorf(0)


@given(st.integers(1, 10**60))
@settings(max_examples=300, deadline=None)
def test_zeckendorf_valid(n):
    z = zeckendorf(n)
    assert z.value() == n
    assert all(a - b >= 2 for a, b in zip(z.indices, z.indices[1:]))
    assert min(z.indices) >= 2


def test_zeckendorf_oracle_small():
    for n in range(1, 3000):
        assert zeckendorf_brute_ok(n, zeckendorf(n).indices)


def test_sparse_divisor_examples():
    assert sparse_divisor_max(96, 10, 1)[0] == 8
    assert sparse_divisor_max(1024, 2, 1)[0] == 1024
    assert sparse_divisor_max(1024, 10, 1)[0] == 8
    d, st_ = sparse_divisor_max(96, 10, 2)
    assert d == 96 and st_.L == 2


def test_sparse_candidates_are_descending_and_complete():
    for b in (2, 3, 10):
        for k in (1, 2):
            c = list(sparse_candidates(5000, b, k))
            assert c == sorted(c, reverse=True)
            assert len(set(c)) == len(c)
            assert set(c) == {n for n in range(1, 5001) if nonzero_digits(n, b) <= k}


def test_sparse_rejects_other_sparsity():
    with pytest.raises(UnsupportedSparsity):
        sparse_divisor_max(10, 10, 3)
    with pytest.raises(UnsupportedSparsity):
        lowdc_divisor_max(10, 10, 1)


def test_lowdc_examples():
    assert lowdc_divisor_max(777, 10)[0] == 777
    assert lowdc_divisor_max(24, 10)[0] == 8
    assert lowdc_divisor_max(3, 2)[0] == 3


def test_repdigit_candidates_complete():
    for b in (2, 7, 10):
        c = list(repdigit_candidates(20000, b))
        assert c == sorted(c, reverse=True)
        assert set(c) == {n for n in range(1, 20001) if is_repdigit(n, b)}


@given(st.integers(1, 10**6), st.sampled_from([2, 3, 10, 16]))
@settings(max_examples=300, deadline=None)
def test_divisor_max_matches_brute_force(n, b):
    assert sparse_divisor_max(n, b, 1)[0] == brute_sparse_max(n, b, 1)
    assert sparse_divisor_max(n, b, 2)[0] == brute_sparse_max(n, b, 2)
    assert lowdc_divisor_max(n, b)[0] == brute_repdigit_max(n, b)
