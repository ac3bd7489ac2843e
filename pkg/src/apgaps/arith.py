"""Small multiplicative-function helpers on machine integers.

Trial-division factorization is plenty here: every caller works with
divisor-table entries or scan moduli far below 10^9.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt


@lru_cache(maxsize=None)
def factorize(n: int):
    """Prime factorization as a tuple of (p, e) pairs, n >= 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    m = n
    for p in range(2, isqrt(n) + 1):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def g_mult(n: int) -> int:
    """Totally multiplicative with g(p) = p - 2; g(1) = 1.  g(2) = 0."""
    out = 1
    for p, e in factorize(n):
        out *= (p - 2) ** e
    return out


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def divisors(n: int):
    """All positive divisors, ascending."""
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def primorial_upto(limit: int) -> int:
    """Product of all primes <= limit (1 for limit < 2)."""
    out = 1
    for p in range(2, limit + 1):
        if all(p % q for q in range(2, isqrt(p) + 1)):
            out *= p
    return out


def crt_merge(r1: int, m1: int, r2: int, m2: int):
    """Merge x == r1 (m1) with x == r2 (m2); None when incompatible."""
    g = gcd(m1, m2)
    if (r2 - r1) % g != 0:
        return None
    l = m1 // g * m2
    t = ((r2 - r1) // g * pow(m1 // g, -1, m2 // g)) % (m2 // g) if m2 != g else 0
    return ((r1 + m1 * t) % l, l)


def count_in_class(lo: int, hi: int, residue: int, modulus: int) -> int:
    """#{n in [lo, hi) : n == residue (mod modulus)}."""
    if hi <= lo:
        return 0
    residue %= modulus
    return (hi - 1 - residue) // modulus - (lo - 1 - residue) // modulus
