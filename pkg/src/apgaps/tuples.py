"""Admissible k-tuples: verification, narrow-tuple search, dilation.

A tuple is admissible when, for every prime p, its offsets miss at least
one residue class mod p.  Only primes p <= k can be fully covered by k
offsets, so the check is finite.  The narrow-tuple search combines the
shifted-primes construction with a greedy residue sieve over shifted
intervals, shrinking the diameter by bisection.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from pathlib import Path

from .primes import nth_prime, sieve_upto


@dataclass(frozen=True)
class Tuple:
    """Strictly increasing offsets, normalized so the first is 0."""

    offsets: tuple

    def __post_init__(self):
        offs = tuple(int(h) for h in self.offsets)
        if not offs:
            raise ValueError("tuple must be non-empty")
        if any(b <= a for a, b in zip(offs, offs[1:])):
            raise ValueError("offsets must be strictly increasing")
        if offs[0] != 0:
            offs = tuple(h - offs[0] for h in offs)
        object.__setattr__(self, "offsets", offs)

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def diameter(self) -> int:
        return self.offsets[-1] - self.offsets[0]

    def to_line(self) -> str:
        return ",".join(str(h) for h in self.offsets)

    @classmethod
    def from_line(cls, line: str) -> "Tuple":
        parts = [p.strip() for p in line.strip().split(",") if p.strip()]
        if not parts:
            raise ValueError("empty tuple line")
        return cls(tuple(int(p) for p in parts))

    def save(self, path) -> None:
        Path(path).write_text(self.to_line() + "\n")

    @classmethod
    def load(cls, path) -> "Tuple":
        return cls.from_line(Path(path).read_text())


@dataclass(frozen=True)
class DilatedTuple:
    """The image M*h_i + a of a base tuple; all elements == a (mod M)."""

    base: Tuple
    M: int
    a: int

    @property
    def elements(self) -> tuple:
        return tuple(self.M * h + self.a for h in self.base.offsets)

    @property
    def diameter(self) -> int:
        return self.M * self.base.diameter


def is_admissible(t: Tuple) -> bool:
    """True iff the offsets miss a residue class mod p for every prime p <= k.

    Primes p > k can never be covered by k offsets, so checking p <= k
    suffices.
    """
    k = t.k
    if k == 1:
        return True
    for p in sieve_upto(k).primes_array():
        p = int(p)
        if len({h % p for h in t.offsets}) == p:
            return False
    return True


def shifted_primes_tuple(k: int) -> Tuple:
    """The tuple {p_(pi(k)+1), ..., p_(pi(k)+k)} normalized to start at 0.

    All elements exceed k before normalization, hence are coprime to every
    prime p <= k, which makes the tuple admissible by construction.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return Tuple((0,))
    pi_k = int(sieve_upto(k).count())
    # Sieve once past the needed index rather than calling nth_prime k times.
    import math

    n_needed = pi_k + k
    bound = max(100, int(n_needed * (math.log(n_needed) + math.log(math.log(max(n_needed, 6))) + 1)))
    ps = sieve_upto(bound).primes_array()
    while len(ps) < n_needed:
        bound *= 2
        ps = sieve_upto(bound).primes_array()
    sel = ps[pi_k : pi_k + k]
    return Tuple(tuple(int(p) for p in sel))


def _greedy_survivors(lo: int, hi: int, k: int, small_primes) -> list[int]:
    """Greedy residue sieve on [lo, hi]: for each prime p <= k remove the
    least-populated residue class (smallest class on ties)."""
    survivors = list(range(lo, hi + 1))
    for p in small_primes:
        p = int(p)
        buckets = [0] * p
        for n in survivors:
            buckets[n % p] += 1
        best = min(range(p), key=lambda r: (buckets[r], r))
        survivors = [n for n in survivors if n % p != best]
        if len(survivors) < k:
            return []
    return survivors


def _greedy_tuple(k: int, diameter: int, shifts) -> Tuple | None:
    """Best admissible k-tuple found by the greedy sieve over shifted
    intervals of the given diameter, or None."""
    small_primes = [int(p) for p in sieve_upto(max(k, 2)).primes_array()] if k > 1 else []
    best = None
    for s in shifts:
        surv = _greedy_survivors(s, s + diameter, k, small_primes)
        if len(surv) >= k:
            # narrowest window of k consecutive survivors
            start = min(range(len(surv) - k + 1),
                        key=lambda i: surv[i + k - 1] - surv[i])
            cand = Tuple(tuple(surv[start : start + k]))
            if is_admissible(cand) and (best is None or cand.diameter < best.diameter
                                        or (cand.diameter == best.diameter
                                            and cand.offsets < best.offsets)):
                best = cand
    return best


def narrow_tuple(k: int, budget: int = 32, patience: int = 4) -> Tuple:
    """An admissible k-tuple of small diameter.

    Starts from the shifted-primes construction, then refines with a
    greedy residue sieve over shifted intervals, walking the target
    diameter downward until `patience` consecutive diameters fail.  The
    budget is the number of interval shifts tried per diameter; the search
    is fully deterministic, and a larger budget can only tighten the
    result.  The winner is always re-verified by is_admissible.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    best = shifted_primes_tuple(k)
    if k <= 2:
        return best  # {0} or {0,2}: already minimal
    shifts = [i * max(1, k // 2) for i in range(budget)]
    misses = 0
    diameter = best.diameter - 1
    while diameter >= k - 1 and misses < patience:
        cand = _greedy_tuple(k, diameter, shifts)
        if cand is not None and cand.diameter < best.diameter:
            best = cand
            misses = 0
            diameter = best.diameter - 1
        else:
            misses += 1
            diameter -= 1
    assert is_admissible(best)
    return best


def dilate(t: Tuple, M: int, a: int) -> DilatedTuple:
    """Map offsets h_i to M*h_i + a (all congruent to a mod M)."""
    if M < 1:
        raise ValueError("modulus must be positive")
    if gcd(a % M if M > 1 else 1, M) != 1:
        raise ValueError("residue %d not coprime to modulus %d" % (a, M))
    return DilatedTuple(t, M, a)
