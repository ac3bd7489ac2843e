"""Prime generation and prime statistics in arithmetic progressions.

Everything downstream (tuple search, sieve-weight window sums, gap and
discrepancy scans) pulls its primes from here.  The central object is
PrimeTable, an immutable bit-packed primality table built by a segmented
sieve of Eratosthenes over the odd integers.
"""

from __future__ import annotations

import math
import os
from math import gcd

import numpy as np

# Hard memory guard: a table for limit = 2^34 packs into ~1 GiB of bits.
DEFAULT_LIMIT_CAP = 1 << 34

# Segment span (in odd numbers) roughly sized to stay cache/memory friendly.
_SEGMENT_ODDS = 1 << 21

_POPCOUNT8 = np.unpackbits(
    np.arange(256, dtype=np.uint8)[:, None], axis=1
).sum(axis=1).astype(np.int64)


def _simple_sieve(limit: int) -> np.ndarray:
    """Plain boolean sieve; used only for the base primes up to sqrt(limit)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


class PrimeTable:
    """Bit-packed primality over [2, limit], odd numbers only.

    Bit i of the packed array corresponds to the odd number 2*i + 1; the
    prime 2 is special-cased.  The table is immutable after construction
    and safe to share across threads.
    """

    def __init__(self, limit: int, packed_bits: np.ndarray):
        self.limit = limit
        self._bits = packed_bits
        self._bits.setflags(write=False)
        self._n_odds = (limit + 1) // 2

    # -- queries ---------------------------------------------------------

    def __contains__(self, n: int) -> bool:
        return self.is_prime(n)

    def is_prime(self, n: int) -> bool:
        if n < 2 or n > self.limit:
            return False
        if n == 2:
            return True
        if n % 2 == 0:
            return False
        i = (n - 1) // 2
        return bool((self._bits[i >> 3] >> (7 - (i & 7))) & 1)

    def is_prime_array(self, ns: np.ndarray) -> np.ndarray:
        """Vectorized membership for an int array within [0, limit]."""
        ns = np.asarray(ns, dtype=np.int64)
        if ns.size and int(ns.max()) > self.limit:
            raise ValueError("query exceeds table limit %d" % self.limit)
        idx = (ns - 1) >> 1
        odd_bit = (self._bits[idx >> 3] >> (7 - (idx & 7)).astype(np.uint8)) & 1
        out = (ns % 2 == 1) & (ns > 1) & odd_bit.astype(bool)
        out |= ns == 2
        return out

    def count(self) -> int:
        """pi(limit)."""
        odd = int(_POPCOUNT8[self._bits].sum())
        return odd + (1 if self.limit >= 2 else 0)

    def primes_array(self, lo: int = 2, hi: int | None = None) -> np.ndarray:
        """All primes in [lo, hi] as an int64 array (hi defaults to limit)."""
        if hi is None:
            hi = self.limit
        hi = min(hi, self.limit)
        if hi < lo:
            return np.array([], dtype=np.int64)
        bits = np.unpackbits(self._bits, count=self._n_odds)
        odds = 2 * np.flatnonzero(bits).astype(np.int64) + 1
        out = odds[(odds >= lo) & (odds <= hi)]
        if lo <= 2 <= hi:
            out = np.concatenate(([2], out))
        return out

    def __iter__(self):
        return iter(self.primes_array())


def _cache_path(limit: int):
    cache_dir = os.environ.get("APGAPS_CACHE_DIR")
    if not cache_dir:
        return None
    return os.path.join(cache_dir, "primetable_%d.npy" % limit)


def sieve_upto(limit: int, limit_cap: int = DEFAULT_LIMIT_CAP) -> PrimeTable:
    """Segmented sieve producing a PrimeTable for [2, limit].

    Rejects limit < 2 and limits above the memory cap.  Memory use beyond
    the packed bit array is bounded by one segment.  When APGAPS_CACHE_DIR
    is set, the packed bit array is reused from / written to that directory.
    """
    if limit < 2:
        raise ValueError("sieve limit must be >= 2, got %d" % limit)
    if limit > limit_cap:
        raise ValueError(
            "sieve limit %d exceeds memory cap %d" % (limit, limit_cap)
        )
    n_odds = (limit + 1) // 2
    cache = _cache_path(limit)
    if cache and os.path.exists(cache):
        packed = np.load(cache)
        if packed.dtype == np.uint8 and len(packed) == (n_odds + 7) // 8:
            return PrimeTable(limit, packed)
    base = _simple_sieve(math.isqrt(limit))
    base_odd = base[base > 2]

    packed = np.zeros((n_odds + 7) // 8, dtype=np.uint8)
    for seg_start in range(0, n_odds, _SEGMENT_ODDS):
        seg_len = min(_SEGMENT_ODDS, n_odds - seg_start)
        lo = 2 * seg_start + 1          # first odd number in segment
        hi = lo + 2 * seg_len           # exclusive
        mask = np.ones(seg_len, dtype=bool)
        if seg_start == 0:
            mask[0] = False             # 1 is not prime
        for p in base_odd:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start >= hi:
                continue
            mask[(start - lo) // 2 :: p] = False
        seg_packed = np.packbits(mask)
        packed[seg_start // 8 : seg_start // 8 + len(seg_packed)] |= seg_packed
    if cache:
        os.makedirs(os.path.dirname(cache) or ".", exist_ok=True)
        np.save(cache, packed)
        if os.path.exists(cache + ".npy"):  # np.save appends the suffix
            os.replace(cache + ".npy", cache)
    return PrimeTable(limit, packed)


def nth_prime(n: int) -> int:
    """The n-th prime, p_1 = 2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n < 6:
        return [2, 3, 5, 7, 11][n - 1]
    # p_n < n (ln n + ln ln n) for n >= 6
    bound = int(n * (math.log(n) + math.log(math.log(n)))) + 10
    while True:
        ps = sieve_upto(bound).primes_array()
        if len(ps) >= n:
            return int(ps[n - 1])
        bound *= 2


def primes_in_ap(M: int, a: int, lo: int, hi: int,
                 table: PrimeTable | None = None) -> list[int]:
    """Primes p in [lo, hi] with p == a (mod M), ascending.

    M = 1 is accepted as the degenerate progression covering all integers.
    """
    if M < 1:
        raise ValueError("modulus must be positive")
    if lo > hi:
        raise ValueError("empty window: lo > hi")
    a = a % M
    if M > 1 and gcd(a, M) != 1:
        raise ValueError("residue %d not coprime to modulus %d" % (a, M))
    if table is None or table.limit < hi:
        table = sieve_upto(max(hi, 2))
    ps = table.primes_array(max(lo, 2), hi)
    if M > 1:
        ps = ps[ps % M == a]
    return [int(p) for p in ps]


def prime_power_arrays(X: int, table: PrimeTable | None = None):
    """All prime powers p^j <= X with their von Mangoldt values log p.

    Returns (powers, logs) as parallel numpy arrays, unordered between the
    j = 1 block and higher powers.
    """
    if X < 2:
        return np.array([], dtype=np.int64), np.array([], dtype=np.float64)
    if table is None or table.limit < X:
        table = sieve_upto(X)
    ps = table.primes_array(2, X)
    powers = [ps]
    logs = [np.log(ps.astype(np.float64))]
    for p in ps[ps <= math.isqrt(X)]:
        p = int(p)
        lp = math.log(p)
        q = p * p
        while q <= X:
            powers.append(np.array([q], dtype=np.int64))
            logs.append(np.array([lp]))
            q *= p
    return np.concatenate(powers), np.concatenate(logs)


def psi_ap(X: int, q: int, a: int, table: PrimeTable | None = None) -> float:
    """Chebyshev psi over a progression: sum of Lambda(n), n <= X, n == a (q).

    Exact prime-power enumeration; the accumulation uses math.fsum so the
    result is correctly rounded for the given terms.
    """
    if q < 1:
        raise ValueError("modulus must be positive")
    if X < 2:
        return 0.0
    powers, logs = prime_power_arrays(X, table)
    sel = powers % q == a % q
    return math.fsum(logs[sel])
