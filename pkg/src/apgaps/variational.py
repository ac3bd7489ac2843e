"""Lower bounds for the sieve's variational constant by Rayleigh-quotient
maximization over a symmetric polynomial basis.

The quantity being maximized is the ratio of two quadratic forms on
functions F supported on the unit simplex {t_i >= 0, sum t_i <= 1}:

  numerator    sum over m of the square of the t_m-average of F,
               integrated over the remaining variables;
  denominator  the integral of F^2 over the simplex.

The basis consists of products (1 - P1)^alpha * P2^beta with
P1 = sum t_i, P2 = sum t_i^2 and alpha + 2*beta <= degree_cap.  Both forms
are assembled exactly in rational arithmetic via the Dirichlet integral

  integral over the k-simplex of (1 - sum t)^a * prod t_i^{c_i}
      = a! * prod c_i! / (k + a + sum c_i)!

The float eigen-solve is followed by an exact rational re-certification of
the quotient at the rounded witness, so every reported lower bound is a
genuine feasible value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, isqrt

import numpy as np


# ---------------------------------------------------------------------------
# exact simplex integrals
# ---------------------------------------------------------------------------

def monomial_integral(exponents) -> Fraction:
    """Exact integral of prod t_i^{a_i} over the unit simplex in k = len(a)
    variables: prod a_i! / (k + sum a_i)!."""
    exps = [int(a) for a in exponents]
    if not exps or any(a < 0 for a in exps):
        raise ValueError("exponents must be a non-empty list of non-negatives")
    num = 1
    for a in exps:
        num *= factorial(a)
    return Fraction(num, factorial(len(exps) + sum(exps)))


def _partitions(n: int, max_part: int | None = None):
    """Integer partitions of n as non-increasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _power_sum_integral(k: int, a: int, b: int) -> Fraction:
    """Exact integral of (1 - P1)^a * P2^b over the k-simplex.

    P2^b is expanded over integer partitions of b; each monomial class is
    weighted by its multinomial coefficient and the number of ways to place
    it on k labeled variables.
    """
    total = Fraction(0)
    fa = factorial(a)
    denom = factorial(k + a + 2 * b)
    for lam in _partitions(b):
        ell = len(lam)
        if ell > k:
            continue
        multinom = factorial(b)
        for part in lam:
            multinom //= factorial(part)
        placements = factorial(k) // factorial(k - ell)
        mult = 1
        prev, run = None, 0
        for part in lam:
            if part == prev:
                run += 1
            else:
                prev, run = part, 1
            mult = mult * run  # running product of multiplicity factorials
        # mult now equals prod (multiplicity of each part value)!
        placements //= mult
        mono = fa
        for part in lam:
            mono *= factorial(2 * part)
        total += Fraction(multinom * placements * mono, denom)
    return total


# ---------------------------------------------------------------------------
# basis and quadratic forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BasisElement:
    """The symmetric polynomial (1 - P1)^alpha * P2^beta."""

    alpha: int
    beta: int

    @property
    def degree(self) -> int:
        return self.alpha + 2 * self.beta

    def inner_integral_terms(self):
        """Terms of the t_k-integral of this element over [0, 1 - s], where
        s is the sum of the other coordinates.

        Returns a list of (coeff, a, b) meaning coeff * (1-P1')^a * P2'^b
        in the remaining k-1 variables.
        """
        out = []
        for j in range(self.beta + 1):
            c = Fraction(
                comb(self.beta, j) * factorial(self.alpha) * factorial(2 * j),
                factorial(self.alpha + 2 * j + 1),
            )
            out.append((c, self.alpha + 2 * j + 1, self.beta - j))
        return out


def symmetric_basis(degree_cap: int):
    """All (1-P1)^alpha P2^beta with alpha + 2 beta <= degree_cap."""
    if degree_cap < 0:
        raise ValueError("degree_cap must be >= 0")
    return [
        BasisElement(alpha, beta)
        for beta in range(degree_cap // 2 + 1)
        for alpha in range(degree_cap - 2 * beta + 1)
    ]


@dataclass
class QuadraticForms:
    """Exact rational matrices of the two bilinear forms over the basis.

    A carries the summed per-coordinate-average form (the numerator), B the
    plain L^2 form on the simplex (the denominator).
    """

    k: int
    basis: list
    A: list  # list of lists of Fraction
    B: list


def build_forms(k: int, degree_cap: int) -> QuadraticForms:
    """Assemble both forms exactly.

    By symmetry of the basis all k coordinate-average terms are equal, so
    the numerator is k times the last-coordinate term.  For k = 1 the outer
    integral degenerates to evaluating the inner integral at 0.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    basis = symmetric_basis(degree_cap)
    n = len(basis)
    B = [[Fraction(0)] * n for _ in range(n)]
    A = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        bi = basis[i]
        for j in range(i + 1):
            bj = basis[j]
            bij = _power_sum_integral(k, bi.alpha + bj.alpha, bi.beta + bj.beta)
            B[i][j] = B[j][i] = bij
            a_entry = Fraction(0)
            for ci, ai, b1 in bi.inner_integral_terms():
                for cj, aj, b2 in bj.inner_integral_terms():
                    if k == 1:
                        # inner integrals are numbers: (1-P1')^a = 1, P2'^b = 0^b
                        if b1 + b2 == 0:
                            a_entry += ci * cj
                    else:
                        a_entry += ci * cj * _power_sum_integral(
                            k - 1, ai + aj, b1 + b2
                        )
            A[i][j] = A[j][i] = k * a_entry
    return QuadraticForms(k=k, basis=basis, A=A, B=B)


# ---------------------------------------------------------------------------
# eigen-solve with exact re-certification
# ---------------------------------------------------------------------------

@dataclass
class MkResult:
    k: int
    basis_degree: int
    lower_bound: float
    lower_bound_exact: Fraction
    witness: list          # rational coefficients over the basis
    forms: QuadraticForms = field(repr=False)

    def witness_floats(self):
        return [float(w) for w in self.witness]


def _rational_inv_sqrt(x: Fraction, bits: int = 128) -> Fraction:
    """A rational approximation to 1/sqrt(x) for x > 0."""
    if x <= 0:
        raise ValueError("need a positive value")
    # 1/sqrt(p/q) = sqrt(q/p)
    return Fraction(isqrt((x.denominator << (2 * bits)) // x.numerator), 1 << bits)


def _normalized_float_matrices(forms: QuadraticForms):
    """Diagonal-rescale both exact matrices so B has unit diagonal, then
    convert to float.  The rescaling keeps entries in float range even when
    the raw Dirichlet integrals underflow."""
    n = len(forms.basis)
    scales = [_rational_inv_sqrt(forms.B[i][i]) for i in range(n)]
    Bf = np.empty((n, n))
    Af = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            Bf[i, j] = float(forms.B[i][j] * scales[i] * scales[j])
            Af[i, j] = float(forms.A[i][j] * scales[i] * scales[j])
    return Af, Bf, scales


def maximize_mk(k: int, degree_cap: int, forms: QuadraticForms | None = None,
                pivot_tol: float = 1e-12) -> MkResult:
    """Largest Rayleigh quotient of the two forms over the basis span.

    The generalized symmetric-definite eigenproblem is reduced through an
    eigendecomposition of the (rescaled) denominator form; directions with
    relative eigenvalue below pivot_tol are pruned as linearly dependent.
    The returned lower bound is the exact rational quotient recomputed at
    the rounded eigenvector, hence certified.
    """
    if forms is None:
        forms = build_forms(k, degree_cap)
    Af, Bf, scales = _normalized_float_matrices(forms)
    w, Q = np.linalg.eigh(Bf)
    if w[-1] <= 0:
        raise ValueError("denominator form is not positive definite")
    keep = w > pivot_tol * w[-1]
    if not keep.any():
        raise ValueError(
            "denominator form numerically singular; smallest pivot %.3e" % w[0]
        )
    S = Q[:, keep] / np.sqrt(w[keep])
    M = S.T @ Af @ S
    evals, evecs = np.linalg.eigh(M)
    u = evecs[:, -1]
    v = S @ u  # coordinates in the rescaled basis
    # exact re-certification at the rounded witness
    witness = [Fraction(float(vi)) * si for vi, si in zip(v, scales)]
    num = Fraction(0)
    den = Fraction(0)
    n = len(witness)
    for i in range(n):
        wi = witness[i]
        if wi == 0:
            continue
        for j in range(n):
            wj = witness[j]
            if wj == 0:
                continue
            num += wi * wj * forms.A[i][j]
            den += wi * wj * forms.B[i][j]
    if den == 0:
        raise ValueError("degenerate witness")
    exact = num / den
    return MkResult(
        k=k,
        basis_degree=degree_cap,
        lower_bound=float(exact),
        lower_bound_exact=exact,
        witness=witness,
        forms=forms,
    )


# ---------------------------------------------------------------------------
# optimized F as an evaluable function, for the sieve-weight pipeline
# ---------------------------------------------------------------------------

@dataclass
class SimplexPolynomial:
    """A symmetric polynomial combination of basis elements, restricted to
    the simplex (zero outside).  Carries its exact form values."""

    k: int
    basis: list
    coeffs: list  # Fractions
    i_value: Fraction
    j_sum: Fraction

    def __call__(self, ts) -> float:
        ts = list(ts)
        if len(ts) != self.k:
            raise ValueError("expected %d coordinates" % self.k)
        s1 = sum(ts)
        if s1 > 1 + 1e-12 or any(t < -1e-12 for t in ts):
            return 0.0
        s2 = sum(t * t for t in ts)
        val = 0.0
        for c, b in zip(self.coeffs, self.basis):
            val += float(c) * (1.0 - s1) ** b.alpha * s2 ** b.beta
        return val


def constant_f(k: int) -> SimplexPolynomial:
    """The indicator of the simplex: I = 1/k!, J-sum = 2k/(k+1)!."""
    basis = symmetric_basis(0)
    return SimplexPolynomial(
        k=k,
        basis=basis,
        coeffs=[Fraction(1)],
        i_value=Fraction(1, factorial(k)),
        j_sum=Fraction(2 * k, factorial(k + 1)),
    )


def optimal_f(result: MkResult) -> SimplexPolynomial:
    """Wrap a maximize_mk witness as an evaluable simplex polynomial."""
    forms = result.forms
    n = len(result.witness)
    i_val = Fraction(0)
    j_val = Fraction(0)
    for i in range(n):
        for j in range(n):
            i_val += result.witness[i] * result.witness[j] * forms.B[i][j]
            j_val += result.witness[i] * result.witness[j] * forms.A[i][j]
    return SimplexPolynomial(
        k=result.k,
        basis=forms.basis,
        coeffs=list(result.witness),
        i_value=i_val,
        j_sum=j_val,
    )


# ---------------------------------------------------------------------------
# derived thresholds and reported bounds
# ---------------------------------------------------------------------------

def rk_threshold(mk_lower: float, theta: float) -> int:
    """Guaranteed prime count ceil(theta * mk / 2)."""
    if mk_lower <= 0:
        raise ValueError("mk_lower must be positive")
    if not 0 < theta < 0.5:
        raise ValueError("theta must lie in (0, 1/2)")
    return math.ceil(theta * mk_lower / 2)


def analytic_mk_bound(k: int) -> float:
    """log k - 2 log log k - 2 (meaningful only once positive)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return math.log(k) - 2 * math.log(math.log(k)) - 2


def k_for_r(r: int, eta: float, C: float | None = None):
    """Smallest k whose analytic bound exceeds 5r/(3 eta), by binary search
    over k >= 16 (past the bound's minimum), plus the closed-form estimate
    ceil(C (r/eta)^2 e^{5r/(3 eta)}) when the constant C is supplied.

    Returns (k_scan, k_closed_form_or_None).
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if not 0 < eta < 5 / 12:
        raise ValueError("eta must lie in (0, 5/12)")
    target = 5 * r / (3 * eta)
    lo = 16
    hi = 32
    while analytic_mk_bound(hi) <= target:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if analytic_mk_bound(mid) > target:
            hi = mid
        else:
            lo = mid + 1
    closed = None
    if C is not None:
        closed = math.ceil(C * (r / eta) ** 2 * math.exp(target))
    return lo, closed


@dataclass(frozen=True)
class BoundShape:
    """Reported shape of a gap bound: factor * M up to an absolute constant."""

    r: int
    regime: str
    expression: str
    factor: float
    constant_is_absolute: bool  # True when the numeric factor is exact (600)


def theorem_bound(r: int, regime: str, eta: float | None = None) -> BoundShape:
    """Shape of the gap bound for r-th consecutive primes in the progression.

    regime is one of 'log-power', 'exp-sqrt' (both share the same shapes)
    or 'power' (requires eta).  Apart from the r = 1 constant 600, factors
    are reported only up to an absolute constant.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if regime in ("log-power", "exp-sqrt"):
        if r == 1:
            return BoundShape(r, regime, "600*M", 600.0, True)
        return BoundShape(
            r, regime, "r^3*e^(4r)*M", r**3 * math.exp(4 * r), False
        )
    if regime == "power":
        if eta is None or not 0 < eta < 5 / 12:
            raise ValueError("power regime needs eta in (0, 5/12)")
        return BoundShape(
            r,
            regime,
            "(r/eta)^3*e^(5r/(3eta))*M",
            (r / eta) ** 3 * math.exp(5 * r / (3 * eta)),
            False,
        )
    raise ValueError("unknown regime %r" % regime)
