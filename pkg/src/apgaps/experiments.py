"""Desk-scale empirical scans: Bombieri-Vinogradov style discrepancies and
prime-gap windows in arithmetic progressions, with CSV persistence.

The distribution statements being probed are asymptotic, so the scans
record ratios against reference thresholds instead of asserting them.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .arith import euler_phi
from .primes import PrimeTable, prime_power_arrays, primes_in_ap, sieve_upto
from .tuples import Tuple

DESK_CAP = 10**8

REGIMES = ("log-power", "exp-sqrt", "power")


def regime_exponent(regime: str, theta: float | None = None) -> float:
    """Distribution exponent for the modulus regime: 1/2 for moduli of at
    most (log X)^C or exp(C sqrt(log X)) size, theta for power-size."""
    if regime in ("log-power", "exp-sqrt"):
        return 0.5
    if regime == "power":
        if theta is None or not 0 < theta < 5 / 12:
            raise ValueError("power regime needs theta in (0, 5/12)")
        return theta
    raise ValueError("unknown regime %r" % regime)


@dataclass(frozen=True)
class BVScanConfig:
    X: int
    M: int
    q_max: int
    regime: str = "log-power"
    Pf: int = 1
    theta: float | None = None
    delta: float = 0.05

    def advisory_q_cap(self) -> float:
        """X^(e_f - delta); a q_max above this is reported, not rejected."""
        return float(self.X) ** (regime_exponent(self.regime, self.theta) - self.delta)


@dataclass
class BVScanResult:
    total: float
    per_q: list  # rows (q, worst_a, discrepancy)
    psi_total: float
    q_cap_advisory: float
    threshold_ratio: float  # total / (X / (phi(M) log X))


def bv_discrepancy(cfg: BVScanConfig, table: PrimeTable | None = None,
                   desk_cap: int = DESK_CAP) -> BVScanResult:
    """For each q <= q_max coprime to M*Pf, the worst-class discrepancy
    max over a coprime to qM of |psi(X; qM, a) - psi(X)/phi(qM)|, summed.

    One shared prime-power table feeds per-class accumulators for every
    modulus (a vectorized bincount per q), so the prime enumeration is done
    once.
    """
    if cfg.X > desk_cap:
        raise ValueError("X=%d above desk cap %d" % (cfg.X, desk_cap))
    powers, logs = prime_power_arrays(cfg.X, table)
    psi_total = math.fsum(logs)
    rows = []
    for q in range(1, cfg.q_max + 1):
        if gcd(q, cfg.M * cfg.Pf) != 1:
            continue
        mod = q * cfg.M
        classes = np.bincount(powers % mod, weights=logs, minlength=mod)
        expected = psi_total / euler_phi(mod)
        worst_a, worst = 0, -1.0
        for a in range(mod):
            if gcd(a, mod) != 1 and mod > 1:
                continue
            disc = abs(float(classes[a]) - expected)
            if disc > worst:
                worst_a, worst = a, disc
        if mod == 1:
            worst_a, worst = 0, 0.0
        rows.append((q, worst_a, worst))
    total = math.fsum(r[2] for r in rows)
    reference = cfg.X / (euler_phi(cfg.M) * math.log(cfg.X))
    return BVScanResult(
        total=total,
        per_q=rows,
        psi_total=psi_total,
        q_cap_advisory=cfg.advisory_q_cap(),
        threshold_ratio=total / reference,
    )


# ---------------------------------------------------------------------------
# gap scans
# ---------------------------------------------------------------------------

@dataclass
class GapRecord:
    M: int
    a: int
    X: int
    r: int
    gap_observed: int | None
    bound_shape: str
    witness_primes: list = field(default_factory=list)
    status: str = "ok"  # or "insufficient primes"
    tuple_hit: int | None = None  # n with >= r+1 primes among n*M + h_i, if probed


def gap_scan(M: int, a: int, X: int, r: int, tuple_hint: Tuple | None = None,
             bound_shape: str = "", table: PrimeTable | None = None,
             desk_cap: int = DESK_CAP) -> GapRecord:
    """Minimal window of r+1 consecutive primes == a (mod M) in [X, 2X].

    Returns an 'insufficient primes' record instead of raising when the
    window holds fewer than r+1 such primes.  With a tuple_hint, also
    reports the first n for which at least r+1 of the n*M + h_i are prime.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if 2 * X > 2 * desk_cap:
        raise ValueError("window exceeds desk cap")
    hi = 2 * X + (tuple_hint.diameter if tuple_hint is not None else 0)
    if table is None or table.limit < hi:
        table = sieve_upto(max(hi, 4))
    ps = primes_in_ap(M, a, X, 2 * X, table)
    if len(ps) < r + 1:
        return GapRecord(M, a, X, r, None, bound_shape, [], "insufficient primes")
    best_i = min(range(len(ps) - r), key=lambda i: ps[i + r] - ps[i])
    record = GapRecord(
        M, a, X, r,
        ps[best_i + r] - ps[best_i],
        bound_shape,
        ps[best_i : best_i + r + 1],
    )
    if tuple_hint is not None:
        record.tuple_hit = _tuple_translate_hit(M, a, X, r, tuple_hint, table)
    return record


def _tuple_translate_hit(M, a, X, r, hint: Tuple, table: PrimeTable):
    """First n with n*M in [X, 2X] such that n*M + (M*h_i + a) yields at
    least r+1 primes, or None."""
    lo_n = (X + M - 1) // M
    hi_n = (2 * X) // M
    ns = np.arange(lo_n, hi_n + 1, dtype=np.int64)
    counts = np.zeros(len(ns), dtype=np.int64)
    for h in hint.offsets:
        counts += table.is_prime_array(ns * M + (M * h + a))
    hits = np.flatnonzero(counts >= r + 1)
    return int(ns[hits[0]]) if len(hits) else None


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

_GAP_COLUMNS = [
    "M", "a", "X", "r", "gap_observed", "bound_shape",
    "witness_primes", "status", "tuple_hit",
]


def persist(records, path) -> None:
    """Append GapRecords to a CSV file (header written when absent)."""
    import os

    new_file = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        w = csv.writer(fh)
        if new_file:
            w.writerow(_GAP_COLUMNS)
        for rec in records:
            w.writerow([
                rec.M, rec.a, rec.X, rec.r,
                "" if rec.gap_observed is None else rec.gap_observed,
                rec.bound_shape,
                ";".join(str(p) for p in rec.witness_primes),
                rec.status,
                "" if rec.tuple_hit is None else rec.tuple_hit,
            ])


def load(path) -> list:
    """Read GapRecords back; raises ValueError naming the offending row."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows:
        return out
    if rows[0] != _GAP_COLUMNS:
        raise ValueError("row 1: unexpected header %r" % rows[0])
    for idx, row in enumerate(rows[1:], start=2):
        if len(row) != len(_GAP_COLUMNS):
            raise ValueError("row %d: expected %d fields, got %d"
                             % (idx, len(_GAP_COLUMNS), len(row)))
        try:
            out.append(GapRecord(
                M=int(row[0]), a=int(row[1]), X=int(row[2]), r=int(row[3]),
                gap_observed=None if row[4] == "" else int(row[4]),
                bound_shape=row[5],
                witness_primes=[int(p) for p in row[6].split(";") if p],
                status=row[7],
                tuple_hit=None if row[8] == "" else int(row[8]),
            ))
        except ValueError as exc:
            raise ValueError("row %d: %s" % (idx, exc)) from None
    return out
