"""Numba-accelerated inner loops, with pure-Python fallbacks.

Everything here is an implementation detail: the public contracts live in
`specfun` and `arithmetic`. Each kernel has identical semantics in the jitted
and fallback variants; the fallback keeps the package importable (and the
tests meaningful) on machines without a working numba install.
"""

import math

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except Exception:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def _j_array_full(x, nmax):
    """J_0..J_nmax at x>0: downward (Miller) recurrence, Neumann-normalized.

    Start order is pushed far enough above max(nmax, x) that the seeded tail
    is below double rounding after normalization by J_0 + 2*sum J_{2k} = 1.
    """
    out = np.zeros(nmax + 1)
    start = int(max(nmax, x) + 16.0 * (x ** (1.0 / 3.0) + 1.0) + 24)
    if start % 2 == 1:
        start += 1
    jp = 0.0
    jc = 1e-200
    neumann = 0.0  # will hold J~_0 + 2*sum_{k>=1} J~_{2k}
    for n in range(start, 0, -1):
        jm = (2.0 * n / x) * jc - jp
        jp = jc
        jc = jm
        nn = n - 1
        if nn <= nmax:
            out[nn] = jc
        if nn % 2 == 0:
            if nn == 0:
                neumann += jc
            else:
                neumann += 2.0 * jc
        if abs(jc) > 1e250:
            jc *= 1e-250
            jp *= 1e-250
            neumann *= 1e-250
            for i in range(nmax + 1):
                out[i] *= 1e-250
    if neumann == 0.0:
        return out
    inv = 1.0 / neumann
    for i in range(nmax + 1):
        out[i] *= inv
    return out


@njit(cache=True)
def _kloosterman_kernel(m, n, c, inv_table):
    """sum_{x mod c, gcd=1} cos(2*pi*(m*x + n*xbar)/c); inv_table[x]=xbar or -1."""
    two_pi_over_c = 2.0 * math.pi / c
    acc = 0.0
    comp = 0.0
    for x in range(1, c):
        xb = inv_table[x]
        if xb < 0:
            continue
        term = math.cos(two_pi_over_c * ((m * x + n * xb) % c))
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc


@njit(cache=True)
def _inverse_table(c):
    """Modular inverses mod c (extended Euclid); -1 where gcd(x, c) > 1."""
    table = np.full(c, -1, dtype=np.int64)
    if c == 1:
        return table
    for x in range(1, c):
        # extended Euclid for inverse of x mod c
        a, b = x, c
        u0, u1 = 1, 0
        while b != 0:
            q = a // b
            a, b = b, a - q * b
            u0, u1 = u1, u0 - q * u1
        if a == 1:
            table[x] = u0 % c
    return table


def j_array(x, nmax):
    """Array [J_0(x), ..., J_nmax(x)] for real x, nmax >= 0."""
    ax = abs(float(x))
    nmax = int(nmax)
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    if ax < 1e-10:
        out = np.zeros(nmax + 1)
        out[0] = 1.0
        if nmax >= 1:
            out[1] = ax / 2.0
        res = out
    else:
        res = _j_array_full(ax, nmax)
    if x < 0:
        res = res.copy()
        res[1::2] *= -1.0
    return res
