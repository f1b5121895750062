import random

import pytest

from hppk.errors import CapacityExceeded, DegenerateEquation, NotCoprime
from hppk.modmath import (
    WIDE_BITS,
    ensure_wide,
    is_prime_64,
    mod_inverse,
    pow_mod,
    solve_linear,
    solve_quadratic,
    sqrt_mod,
    xgcd,
)


def test_ensure_wide_accepts_256_bit_range():
    assert ensure_wide(0) == 0
    assert ensure_wide((1 << WIDE_BITS) - 1) == (1 << WIDE_BITS) - 1
    with pytest.raises(CapacityExceeded):
        ensure_wide(1 << WIDE_BITS)
    with pytest.raises(CapacityExceeded):
        ensure_wide(-1)


def test_mod_inverse_known_values():
    assert mod_inverse(9, 13) == 3  # 9*3 = 27 = 1 (mod 13)
    assert mod_inverse(4267, 6798) == 6379
    assert 4267 * 6379 % 6798 == 1
    assert mod_inverse(6475, 6798) == 5893


def test_mod_inverse_rejects_common_factor():
    with pytest.raises(NotCoprime):
        mod_inverse(6, 9)


def test_mod_inverse_domain():
    with pytest.raises(ValueError):
        mod_inverse(0, 7)
    with pytest.raises(ValueError):
        mod_inverse(7, 7)


def test_mod_inverse_random_trials():
    rng = random.Random(0xA11CE)
    trials = 0
    while trials < 10_000:
        bits = rng.randint(64, 256)
        m = rng.getrandbits(bits) | 1 << (bits - 1)
        a = rng.randrange(1, m)
        g, _, _ = xgcd(a, m)
        if g != 1:
            continue
        assert a * mod_inverse(a, m) % m == 1
        trials += 1


def test_pow_mod_examples():
    assert pow_mod(2, 10, 1000) == 24
    assert pow_mod(12345, 0, 97) == 1
    assert pow_mod(3, 12, 13) == 1  # Fermat
    with pytest.raises(ValueError):
        pow_mod(2, 3, 1)


def test_pow_mod_matches_iterated_multiplication():
    rng = random.Random(7)
    for _ in range(200):
        m = rng.randrange(2, 1 << 16)
        base = rng.randrange(m)
        exp = rng.randrange(1 << 10)
        acc = 1
        for _ in range(exp):
            acc = acc * base % m
        assert pow_mod(base, exp, m) == acc


def test_sqrt_mod_examples():
    assert sqrt_mod(4, 13) == [2, 11]
    assert sqrt_mod(0, 13) == [0]
    assert sqrt_mod(5, 13) == []  # 5 is a non-residue mod 13


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 29, 41, 73, 97])
def test_sqrt_mod_matches_enumeration_small_primes(p):
    for a in range(p):
        expected = sorted(r for r in range(p) if r * r % p == a)
        assert sqrt_mod(a, p) == expected


def test_sqrt_mod_large_prime_roundtrip():
    p = (1 << 64) - 59
    rng = random.Random(3)
    for _ in range(200):
        r = rng.randrange(1, p)
        roots = sqrt_mod(r * r % p, p)
        assert r in roots or p - r in roots
        for root in roots:
            assert root * root % p == r * r % p


def test_solve_linear_examples():
    assert solve_linear(10, 2, 13) == 8
    assert solve_linear(1, 11, 13) == 11
    with pytest.raises(DegenerateEquation):
        solve_linear(0, 5, 13)


def test_solve_quadratic_examples():
    assert solve_quadratic(1, 0, -1, 13) == [1, 12]
    assert solve_quadratic(1, 1, 1, 5) == []  # discriminant 2, non-residue mod 5
    assert solve_quadratic(0, 10, -2, 13) == [8]  # linear fallback
    with pytest.raises(DegenerateEquation):
        solve_quadratic(0, 0, 3, 13)


@pytest.mark.parametrize("p", [3, 5, 7, 13, 31, 97])
def test_solve_quadratic_matches_enumeration(p):
    rng = random.Random(p)
    for _ in range(300):
        a, b, c = rng.randrange(p), rng.randrange(p), rng.randrange(p)
        if a == 0 and b == 0:
            continue
        expected = sorted(x for x in range(p) if (a * x * x + b * x + c) % p == 0)
        assert solve_quadratic(a, b, c, p) == expected


def test_is_prime_64_examples():
    assert is_prime_64(13)
    assert not is_prime_64(6798)
    assert is_prime_64((1 << 64) - 59)
    assert not is_prime_64(1)
    assert is_prime_64(2)


def test_is_prime_64_matches_trial_division():
    def trial(n):
        if n < 2:
            return False
        d = 2
        while d * d <= n:
            if n % d == 0:
                return False
            d += 1
        return True

    rng = random.Random(17)
    for n in list(range(2, 600)) + [rng.randrange(1 << 28) for _ in range(300)]:
        assert is_prime_64(n) == trial(n)


def test_is_prime_64_rejects_out_of_range():
    with pytest.raises(ValueError):
        is_prime_64(1 << 64)
