import pytest
from hypothesis import given, strategies as st

from crosslayer.errors import InvalidModulusError, NoInverseError
from crosslayer.numtheory import (
    egcd,
    is_prime,
    mod_inv,
    mod_pow,
    reduce_by_bitwidth,
    reduction_steps,
)


def naive_pow(b, e, m):
    r = 1 % m
    for _ in range(e):
        r = r * b % m
    return r


def test_mod_pow_worked_values():
    assert mod_pow(398, 5, 481) == 151
    assert mod_pow(151, 173, 481) == 398
    assert mod_pow(7, 0, 13) == 1
    assert mod_pow(0, 5, 13) == 0


@given(st.integers(0, 10**6), st.integers(0, 300), st.integers(2, 10**4))
def test_mod_pow_matches_naive(b, e, m):
    assert mod_pow(b, e, m) == naive_pow(b, e, m)


@given(st.integers(0, 2**200), st.integers(0, 2**64), st.integers(2, 2**128))
def test_mod_pow_matches_builtin_on_big_ints(b, e, m):
    assert mod_pow(b, e, m) == pow(b, e, m)


def test_mod_pow_rejects_small_modulus():
    with pytest.raises(InvalidModulusError):
        mod_pow(3, 4, 1)


def test_mod_inv_examples():
    assert mod_inv(5, 432) == 173
    assert mod_inv(17, 3120) == 2753
    assert mod_inv(12317, 107) == 9
    with pytest.raises(NoInverseError):
        mod_inv(6, 9)


@given(st.integers(-10**9, 10**9), st.integers(2, 10**6))
def test_mod_inv_property(a, m):
    g = egcd(a % m, m)[0]
    if g != 1:
        with pytest.raises(NoInverseError):
            mod_inv(a, m)
    else:
        t = mod_inv(a, m)
        assert 1 <= t < m or m == 1
        assert a * t % m == 1 % m


@given(st.integers(0, 2**64), st.integers(0, 2**64))
def test_egcd_bezout(a, b):
    g, x, y = egcd(a, b)
    assert a * x + b * y == g


def test_reduce_small_example():
    # 1000 mod 107 with b = 7: folds by 128 - 107 = 21
    steps = reduction_steps(1000, 107)
    assert steps[0] == 1000
    assert steps[-1] < 128
    assert reduce_by_bitwidth(1000, 107) == 1000 % 107


@given(st.integers(0, 2**256), st.integers(2, 2**64))
def test_reduce_by_bitwidth_matches_remainder(x, n):
    assert reduce_by_bitwidth(x, n) == x % n


@given(st.integers(0, 2**128), st.integers(2, 2**32))
def test_fold_values_strictly_decrease(x, n):
    steps = reduction_steps(x, n)
    assert all(b < a for a, b in zip(steps, steps[1:]))
    assert all(s % n == x % n for s in steps)


def test_is_prime_small_and_large():
    primes = [p for p in range(200) if is_prime(p)]
    assert primes == [p for p in range(2, 200) if all(p % d for d in range(2, p))]
    assert is_prime(2**61 - 1)
    assert not is_prime((2**61 - 1) * (2**31 - 1))
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    assert is_prime(4294967311)  # first prime above 2**32
