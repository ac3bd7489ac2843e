"""The sieve-weight algebra: lambda / y / y^(m) tables and window sums.

All table transforms are exact identities in rational arithmetic; the
brute-force window sums S1 and S2 evaluate them literally over the n
window, so every rearrangement can be cross-checked with zero tolerance.
The asymptotic evaluators compute the main terms only (no error-term
bookkeeping).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .arith import (
    count_in_class,
    crt_merge,
    euler_phi,
    g_mult,
    is_squarefree,
    mobius,
    primorial_upto,
)
from .primes import PrimeTable


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SieveConfig:
    """All sieve parameters with their derived fields.

    h holds the dilated tuple: h_i == a (mod M), strictly increasing,
    diameter < D0 * M.  W is the primorial of D0, Wprime = W/(W, Pf*M),
    V = Wprime * M, R = X^(theta/2 - delta), x = floor(X/M).  nu0 is the
    residue class mod Wprime that keeps every n*M + h_i coprime to Wprime.
    """

    X: int
    M: int
    a: int
    h: tuple
    theta: float
    delta: float
    D0: int
    Pf: int = 1
    W: int = field(init=False, default=0)
    Wprime: int = field(init=False, default=0)
    V: int = field(init=False, default=0)
    R: float = field(init=False, default=0.0)
    x: int = field(init=False, default=0)
    nu0: int = field(init=False, default=0)

    @property
    def k(self) -> int:
        return len(self.h)


def make_config(X, M, a, h, theta, delta, D0, Pf=1, nu0=None) -> SieveConfig:
    """Validate parameters, derive W, Wprime, V, R, x and nu0."""
    h = tuple(int(v) for v in h)
    if M < 1:
        raise ValueError("modulus must be positive")
    a = a % M if M > 1 else 0
    if M > 1 and gcd(a, M) != 1:
        raise ValueError("residue not coprime to modulus")
    if any(b <= c for c, b in zip(h, h[1:])):
        raise ValueError("tuple offsets must be strictly increasing")
    if any((v - a) % M for v in h):
        raise ValueError("tuple offsets must be congruent to a mod M")
    if not 0 < theta < 0.5:
        raise ValueError("theta must lie in (0, 1/2)")
    if delta <= 0:
        raise ValueError("delta must be positive")
    if D0 < 1:
        raise ValueError("D0 must be >= 1")
    if h[-1] - h[0] >= D0 * M:
        raise ValueError("tuple diameter must be < D0*M")
    cfg = object.__new__(SieveConfig)
    object.__setattr__(cfg, "X", int(X))
    object.__setattr__(cfg, "M", int(M))
    object.__setattr__(cfg, "a", int(a))
    object.__setattr__(cfg, "h", h)
    object.__setattr__(cfg, "theta", float(theta))
    object.__setattr__(cfg, "delta", float(delta))
    object.__setattr__(cfg, "D0", int(D0))
    object.__setattr__(cfg, "Pf", int(Pf))
    W = primorial_upto(D0)
    Wp = W // gcd(W, Pf * M)
    object.__setattr__(cfg, "W", W)
    object.__setattr__(cfg, "Wprime", Wp)
    object.__setattr__(cfg, "V", Wp * M)
    object.__setattr__(cfg, "R", float(X) ** (theta / 2 - delta))
    object.__setattr__(cfg, "x", int(X) // int(M))
    if nu0 is None:
        nu0 = choose_nu0(cfg)
    else:
        if any(gcd(M * nu0 + hi, Wp) != 1 for hi in h):
            raise ValueError("nu0 leaves some M*nu0 + h_i sharing a factor with Wprime")
    object.__setattr__(cfg, "nu0", int(nu0))
    return cfg


def choose_nu0(cfg: SieveConfig) -> int:
    """Residue nu0 mod Wprime with gcd(M*nu0 + h_i, Wprime) = 1 for all i.

    Per prime p | Wprime the forbidden classes are -h_i * M^{-1} mod p; the
    smallest allowed class is taken and the choices are combined by CRT.
    Fails when the tuple covers all classes mod some p (not admissible).
    """
    res, mod = 0, 1
    p, W = 2, cfg.Wprime
    while W > 1:
        if W % p == 0:
            while W % p == 0:
                W //= p
            minv = pow(cfg.M % p, -1, p)
            forbidden = {(-hi * minv) % p for hi in cfg.h}
            allowed = [c for c in range(p) if c not in forbidden]
            if not allowed:
                raise ValueError(
                    "tuple covers every residue class mod %d (not admissible)" % p
                )
            res, mod = crt_merge(res, mod, allowed[0], p)
        p += 1
    return res


# ---------------------------------------------------------------------------
# weight tables
# ---------------------------------------------------------------------------

@dataclass
class WeightTable:
    """Map from support vectors (d_1, ..., d_k) to weights.

    kind is 'lambda', 'y' or 'y_m'; off-support lookups return 0.  Values
    are Fractions when built from rational inputs, floats otherwise.
    """

    kind: str
    k: int
    entries: dict

    def get(self, key):
        return self.entries.get(tuple(key), 0)

    def __len__(self):
        return len(self.entries)


def support_vectors(cfg: SieveConfig, require_one_at: int | None = None):
    """All k-vectors of positive integers with squarefree pairwise-coprime
    product, coprime to V*Pf and below R, in lexicographic order.

    require_one_at = m (0-based) additionally pins that coordinate to 1.
    """
    if cfg.R <= 1:
        raise ValueError("R <= 1: empty support, check X/theta/delta")
    bound = math.ceil(cfg.R)
    coprime_to = cfg.V * cfg.Pf
    allowed = [
        m
        for m in range(1, bound)
        if m < cfg.R and is_squarefree(m) and gcd(m, coprime_to) == 1
    ]
    out = []

    def extend(prefix, prod):
        i = len(prefix)
        if i == cfg.k:
            out.append(tuple(prefix))
            return
        for m in allowed:
            if require_one_at == i and m != 1:
                break
            if prod * m >= cfg.R:
                if m == 1:
                    continue
                break
            if m > 1 and gcd(prod, m) != 1:
                continue
            extend(prefix + [m], prod * m)

    extend([], 1)
    return out


def y_from_F(cfg: SieveConfig, F) -> WeightTable:
    """y table from a function on the simplex: F(log r_i / log R)."""
    if cfg.R <= 1:
        raise ValueError("R must exceed 1")
    logR = math.log(cfg.R)
    entries = {}
    for r in support_vectors(cfg):
        entries[r] = F([math.log(ri) / logR for ri in r])
    return WeightTable("y", cfg.k, entries)


def lambda_from_y(cfg: SieveConfig, ytable: WeightTable) -> WeightTable:
    """lambda_d = (prod mu(d_i) d_i) * sum over r with d_i | r_i of
    y_r / prod phi(r_i)."""
    support = support_vectors(cfg)
    entries = {}
    for d in support:
        pref = 1
        for di in d:
            pref *= mobius(di) * di
        acc = 0
        for r, yv in ytable.entries.items():
            if yv == 0:
                continue
            if all(ri % di == 0 for di, ri in zip(d, r)):
                den = 1
                for ri in r:
                    den *= euler_phi(ri)
                acc += (
                    Fraction(yv, den) if isinstance(yv, (int, Fraction)) else yv / den
                )
        val = pref * acc
        if val != 0:
            entries[d] = val
    return WeightTable("lambda", cfg.k, entries)


def y_from_lambda(cfg: SieveConfig, ltable: WeightTable) -> WeightTable:
    """y_r = (prod mu(r_i) phi(r_i)) * sum over d with r_i | d_i of
    lambda_d / prod d_i."""
    support = support_vectors(cfg)
    entries = {}
    for r in support:
        pref = 1
        for ri in r:
            pref *= mobius(ri) * euler_phi(ri)
        acc = 0
        for d, lv in ltable.entries.items():
            if lv == 0:
                continue
            if all(di % ri == 0 for ri, di in zip(r, d)):
                den = 1
                for di in d:
                    den *= di
                acc += (
                    Fraction(lv, den) if isinstance(lv, (int, Fraction)) else lv / den
                )
        val = pref * acc
        if val != 0:
            entries[r] = val
    return WeightTable("y", cfg.k, entries)


def ym_from_lambda(cfg: SieveConfig, ltable: WeightTable, m: int) -> WeightTable:
    """y^(m)_r = (prod mu(r_i) g(r_i)) * sum over d with r_i | d_i, d_m = 1
    of lambda_d / prod phi(d_i), on the support with r_m = 1.

    m is 1-based.  g is totally multiplicative with g(p) = p - 2, so any
    even r_i kills the entry outright.
    """
    if not 1 <= m <= cfg.k:
        raise ValueError("m out of range")
    mi = m - 1
    entries = {}
    for r in support_vectors(cfg, require_one_at=mi):
        pref = 1
        for ri in r:
            pref *= mobius(ri) * g_mult(ri)
        if pref == 0:
            continue
        acc = 0
        for d, lv in ltable.entries.items():
            if lv == 0 or d[mi] != 1:
                continue
            if all(di % ri == 0 for ri, di in zip(r, d)):
                den = 1
                for di in d:
                    den *= euler_phi(di)
                acc += (
                    Fraction(lv, den) if isinstance(lv, (int, Fraction)) else lv / den
                )
        val = pref * acc
        if val != 0:
            entries[r] = val
    return WeightTable("y_m", cfg.k, entries)


@dataclass
class IdentityReport:
    checked: int
    max_abs_discrepancy: Fraction
    failures: list


def ym_identity_check(cfg: SieveConfig, ytable: WeightTable, m: int) -> IdentityReport:
    """Exact pre-approximation identity for y^(m) directly in terms of y.

    Compares y^(m) computed through lambda against the divisor-collapsed
    double sum

      y^(m)_r = (prod mu(r_i) g(r_i))
                * sum over a with r_i | a_i of
                  [y_a / prod phi(a_i)] * prod over i != m of mu(a_i) r_i / phi(a_i)

    (with r_m = 1, a_m free).  Both sides must agree exactly.
    """
    mi = m - 1
    via_lambda = ym_from_lambda(cfg, lambda_from_y(cfg, ytable), m)
    failures = []
    maxdisc = Fraction(0)
    checked = 0
    for r in support_vectors(cfg, require_one_at=mi):
        pref = 1
        for ri in r:
            pref *= mobius(ri) * g_mult(ri)
        acc = 0
        for a, yv in ytable.entries.items():
            if yv == 0:
                continue
            if not all(ai % ri == 0 for ri, ai in zip(r, a)):
                continue
            term = Fraction(yv) if isinstance(yv, int) else yv
            for ai in a:
                term /= euler_phi(ai)
            for i, (ri, ai) in enumerate(zip(r, a)):
                if i == mi:
                    continue
                term *= Fraction(mobius(ai) * ri, euler_phi(ai))
            acc += term
        direct = pref * acc
        other = via_lambda.get(r)
        disc = abs(direct - other)
        checked += 1
        if disc > maxdisc:
            maxdisc = disc
        if disc != 0:
            failures.append((r, direct, other))
    return IdentityReport(checked, maxdisc, failures)


# ---------------------------------------------------------------------------
# window sums
# ---------------------------------------------------------------------------

def _inner_sum(cfg: SieveConfig, ltable: WeightTable, n: int):
    val = 0
    nMh = [n * cfg.M + hi for hi in cfg.h]
    for d, lv in ltable.entries.items():
        ok = True
        for di, v in zip(d, nMh):
            if v % di:
                ok = False
                break
        if ok:
            val += lv
    return val


def _window_ns(cfg: SieveConfig):
    start = cfg.x + (cfg.nu0 - cfg.x) % cfg.Wprime
    return range(start, 2 * cfg.x, cfg.Wprime)


def s1_bruteforce(cfg: SieveConfig, ltable: WeightTable):
    """S1 evaluated literally: sum over the n window of the squared inner
    divisor sum.  Exact when the lambda values are rational."""
    ns = _window_ns(cfg)
    if len(ns) == 0:
        warnings.warn("empty n window for S1")
        return 0
    total = 0
    for n in ns:
        v = _inner_sum(cfg, ltable, n)
        total += v * v
    return total


def s1_rearranged(cfg: SieveConfig, ltable: WeightTable):
    """S1 via divisor pairing: sum over (d, e) of lambda_d * lambda_e times
    the exact CRT count of n in the window.  Must equal s1_bruteforce."""
    items = list(ltable.entries.items())
    total = 0
    for d, lv in items:
        for e, mv in items:
            cnt = _pair_count(cfg, d, e)
            if cnt:
                total += lv * mv * cnt
    return total


def _pair_count(cfg: SieveConfig, d, e) -> int:
    """#{n in [x, 2x): n == nu0 (Wprime), [d_i, e_i] | n*M + h_i for all i}."""
    res, mod = cfg.nu0, cfg.Wprime
    for di, ei, hi in zip(d, e, cfg.h):
        L = lcm(di, ei)
        if L == 1:
            continue
        g = gcd(cfg.M, L)
        if hi % g:
            return 0
        Lr = L // g
        if Lr == 1:
            continue
        r = (-(hi // g) * pow((cfg.M // g) % Lr, -1, Lr)) % Lr
        merged = crt_merge(res, mod, r, Lr)
        if merged is None:
            return 0
        res, mod = merged
    return count_in_class(cfg.x, 2 * cfg.x, res, mod)


def s2_bruteforce(cfg: SieveConfig, ltable: WeightTable, primetable: PrimeTable):
    """Exact S2^(m) for each m and their total.

    The prime table must cover every n*M + h_m in the window.
    """
    needed = (2 * cfg.x - 1) * cfg.M + cfg.h[-1]
    if primetable.limit < needed:
        raise ValueError(
            "prime table limit %d below required %d" % (primetable.limit, needed)
        )
    per_m = [0] * cfg.k
    for n in _window_ns(cfg):
        v = _inner_sum(cfg, ltable, n)
        if v == 0:
            continue
        v2 = v * v
        for m in range(cfg.k):
            if primetable.is_prime(n * cfg.M + cfg.h[m]):
                per_m[m] += v2
    return per_m, sum(per_m)


def s_rho(s1, s2, rho):
    """S^(rho) = S2 - rho * S1."""
    return s2 - rho * s1


def rho_for_threshold(mk_lower: float, theta: float, delta_prime: float) -> float:
    """The threshold choice rho = theta * mk / 2 - delta_prime."""
    return theta * mk_lower / 2 - delta_prime


# ---------------------------------------------------------------------------
# asymptotic main terms
# ---------------------------------------------------------------------------

def s1_asymptotic(cfg: SieveConfig, F) -> float:
    """Main term phi(V*Pf)^k X (log R)^k I(F) / (V (V*Pf)^k).

    F must expose an exact i_value (see variational.SimplexPolynomial).
    """
    VPf = cfg.V * cfg.Pf
    phi_ratio = (euler_phi(VPf) / VPf) ** cfg.k
    return phi_ratio * cfg.X * math.log(cfg.R) ** cfg.k / cfg.V * float(F.i_value)


def s2_asymptotic(cfg: SieveConfig, F) -> float:
    """Main term phi(V*Pf)^k X (log R)^(k+1) J-sum(F) / (V (V*Pf)^k log X)."""
    VPf = cfg.V * cfg.Pf
    phi_ratio = (euler_phi(VPf) / VPf) ** cfg.k
    return (
        phi_ratio
        * cfg.X
        * math.log(cfg.R) ** (cfg.k + 1)
        / (cfg.V * math.log(cfg.X))
        * float(F.j_sum)
    )


# ---------------------------------------------------------------------------
# multiplicative identity self-test
# ---------------------------------------------------------------------------

@dataclass
class SelftestReport:
    pairs_checked: int
    lcm_identity_failures: list
    phi_lcm_identity_failures: list

    @property
    def ok(self) -> bool:
        return not self.lcm_identity_failures and not self.phi_lcm_identity_failures


def multiplicative_identities_selftest(limit: int = 200) -> SelftestReport:
    """Verify, over all squarefree pairs d, e <= limit, the expansions

      1/[d,e]      = (1/(d e))        * sum over u | (d,e) of phi(u)
      1/phi([d,e]) = (1/(phi(d)phi(e))) * sum over u | (d,e) of g(u)

    with g(p) = p - 2 totally multiplicative.
    """
    sqfree = [n for n in range(1, limit + 1) if is_squarefree(n)]
    lcm_fail = []
    phi_fail = []
    checked = 0
    for d in sqfree:
        for e in sqfree:
            checked += 1
            u = gcd(d, e)
            phi_sum = 0
            g_sum = 0
            for v in _divisors_small(u):
                phi_sum += euler_phi(v)
                g_sum += g_mult(v)
            L = lcm(d, e)
            if Fraction(1, L) != Fraction(phi_sum, d * e):
                lcm_fail.append((d, e))
            if Fraction(1, euler_phi(L)) != Fraction(g_sum, euler_phi(d) * euler_phi(e)):
                phi_fail.append((d, e))
    return SelftestReport(checked, lcm_fail, phi_fail)


def _divisors_small(n: int):
    from .arith import divisors

    return divisors(n)
