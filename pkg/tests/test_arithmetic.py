"""Sieve, Kloosterman sums, and Hecke-eigenvalue algebra."""

import math

import numpy as np
import pytest

from maassdensity.arithmetic import (
    divisor_sigma_complex,
    hecke_prime_power,
    kloosterman_sum,
    kloosterman_sum_check,
    primes_up_to,
    satake_from_lambda,
)
from maassdensity.errors import DomainError


def test_prime_counts():
    assert primes_up_to(10).tolist() == [2, 3, 5, 7]
    assert primes_up_to(1).size == 0
    assert primes_up_to(2).tolist() == [2]
    # pi(10^6) = 78498
    assert primes_up_to(10 ** 6).size == 78498


def test_sieve_cap():
    with pytest.raises(DomainError):
        primes_up_to(10 ** 9 + 1)


def test_kloosterman_fast_vs_slow():
    for c in range(1, 51):
        for (m, n) in ((1, 1), (2, 3), (5, 1)):
            fast = kloosterman_sum(m, n, c)
            slow = kloosterman_sum_check(m, n, c)
            assert abs(fast - slow) < 1e-9 * max(1.0, c)


def test_kloosterman_symmetry():
    for c in (7, 12, 35):
        assert kloosterman_sum(2, 9, c) == pytest.approx(
            kloosterman_sum(9, 2, c), abs=1e-10
        )


def test_kloosterman_weil_bound():
    # |S(m, n; c)| <= d(c) sqrt(gcd(m, n, c)) sqrt(c)
    for c in range(2, 120):
        d = sum(1 for k in range(1, c + 1) if c % k == 0)
        for (m, n) in ((1, 1), (4, 6)):
            g = math.gcd(math.gcd(m, n), c)
            assert abs(kloosterman_sum(m, n, c)) <= d * math.sqrt(g * c) + 1e-9


def test_kloosterman_prime_is_not_trivial():
    # at a prime the sum is a genuine character sum, nonzero generically
    assert abs(kloosterman_sum(1, 1, 7) - kloosterman_sum_check(1, 1, 7)) < 1e-10
    assert abs(kloosterman_sum(1, 1, 7)) > 1e-6


def test_kloosterman_domain():
    with pytest.raises(DomainError):
        kloosterman_sum(1, 1, 0)


def test_divisor_sigma():
    assert divisor_sigma_complex(12, 0.0).real == pytest.approx(6.0)  # d(12)
    assert divisor_sigma_complex(12, 1.0).real == pytest.approx(28.0)  # sigma(12)
    # sigma_{ir}(n) conjugate symmetry
    a = divisor_sigma_complex(30, 0.7j)
    b = divisor_sigma_complex(30, -0.7j)
    assert abs(a - b.conjugate()) < 1e-12


def test_satake_pair():
    for lam in (0.0, 1.3, -1.9, 2.5, -3.0):
        a, b = satake_from_lambda(lam)
        assert abs(a * b - 1.0) < 1e-12
        assert abs(a + b - lam) < 1e-12
        if abs(lam) <= 2.0:
            assert abs(abs(a) - 1.0) < 1e-12


def test_hecke_prime_power_chebyshev_oracle():
    # lambda = 2 cos(theta) gives lambda_{p^k} = sin((k+1) theta)/sin(theta)
    theta = 1.1
    lam = 2.0 * math.cos(theta)
    for k in range(0, 8):
        want = math.sin((k + 1) * theta) / math.sin(theta)
        assert hecke_prime_power(lam, k) == pytest.approx(want, abs=1e-10)


def test_hecke_recursion_direct():
    lam = 1.7
    assert hecke_prime_power(lam, 0) == 1.0
    assert hecke_prime_power(lam, 1) == lam
    assert hecke_prime_power(lam, 2) == pytest.approx(lam * lam - 1.0)
    assert hecke_prime_power(lam, 3) == pytest.approx(lam ** 3 - 2.0 * lam)
    with pytest.raises(DomainError):
        hecke_prime_power(lam, -1)
