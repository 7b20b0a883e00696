"""Elementary arithmetic ingredients: primes, Kloosterman sums, complex-order
divisor sums, and Hecke/Satake conversions at prime powers."""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np

from ._fastpath import _inverse_table, _kloosterman_kernel
from .errors import DomainError, VerificationError

__all__ = [
    "primes_up_to",
    "kloosterman_sum",
    "divisor_sigma_complex",
    "satake_from_lambda",
    "hecke_prime_power",
]

_PRIME_CAP = 10 ** 9


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n, ascending, as an int64 array (numpy sieve)."""
    n = int(n)
    if n > _PRIME_CAP:
        raise DomainError(f"prime sieve capped at {_PRIME_CAP}")
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(math.isqrt(n)) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


@lru_cache(maxsize=512)
def _inv_table_cached(c: int) -> np.ndarray:
    return _inverse_table(c)


def kloosterman_sum(m: int, n: int, c: int) -> float:
    """S(m, n; c) = sum over units x mod c of e((m x + n xbar)/c).

    The sum is real (x -> -x pairs the terms), so only the cosine part is
    accumulated; a residual imaginary part above 1e-9 * c would indicate a
    kernel bug and raises.
    """
    m, n, c = int(m), int(n), int(c)
    if c < 1:
        raise DomainError("modulus c must be >= 1")
    if c == 1:
        return 1.0
    m %= c
    n %= c
    table = _inv_table_cached(c)
    val = _kloosterman_kernel(m, n, c, table)
    return float(val)


def kloosterman_sum_check(m: int, n: int, c: int) -> float:
    """Slow direct complex-exponential evaluation, for cross-checks."""
    m, n, c = int(m), int(n), int(c)
    if c == 1:
        return 1.0
    acc = 0.0 + 0.0j
    for x in range(1, c):
        if math.gcd(x, c) != 1:
            continue
        xb = pow(x, -1, c)
        acc += cmath.exp(2j * math.pi * (m * x + n * xb) / c)
    if abs(acc.imag) > 1e-9 * c:
        raise VerificationError(f"S({m},{n};{c}) imaginary part {acc.imag:.3e}")
    return acc.real


def divisor_sigma_complex(n: int, s: complex) -> complex:
    """sigma_s(n) = sum of d^s over divisors d of n, s complex."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    s = complex(s)
    out = 1.0 + 0.0j
    rem = n
    p = 2
    while p * p <= rem:
        if rem % p == 0:
            k = 0
            while rem % p == 0:
                rem //= p
                k += 1
            out *= sum(cmath.exp(s * j * math.log(p)) for j in range(k + 1))
        p += 1 if p == 2 else 2
    if rem > 1:
        out *= 1.0 + cmath.exp(s * math.log(rem))
    return out


def satake_from_lambda(lam: float) -> tuple[complex, complex]:
    """Satake pair (alpha, 1/alpha) with alpha + 1/alpha = lambda_p.

    Tempered |lambda| <= 2 gives a unitary pair; larger values give a real
    pair, still with product 1.
    """
    lam = float(lam)
    disc = lam * lam - 4.0
    if disc <= 0.0:
        root = complex(lam / 2.0, math.sqrt(-disc) / 2.0)
    else:
        root = complex((lam + math.copysign(math.sqrt(disc), lam)) / 2.0, 0.0)
    return root, 1.0 / root


def hecke_prime_power(lam: float, k: int) -> float:
    """lambda_{p^k} from lambda_p via the Hecke recursion at a prime p.

    lambda_{p^{k+1}} = lambda_p lambda_{p^k} - lambda_{p^{k-1}}.
    """
    k = int(k)
    if k < 0:
        raise DomainError("k must be >= 0")
    prev, cur = 1.0, float(lam)
    if k == 0:
        return 1.0
    for _ in range(k - 1):
        prev, cur = cur, float(lam) * cur - prev
    return cur
