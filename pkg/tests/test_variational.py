import math
from fractions import Fraction

import numpy as np
import pytest

from apgaps.variational import (
    analytic_mk_bound,
    build_forms,
    constant_f,
    k_for_r,
    maximize_mk,
    monomial_integral,
    optimal_f,
    rk_threshold,
    symmetric_basis,
    theorem_bound,
)


def monte_carlo_monomial(exponents, n_samples=200_000, seed=11):
    """Independent simplex-integral estimate: uniform Dirichlet samples times
    the simplex volume.  Returns (estimate, standard error)."""
    k = len(exponents)
    rng = np.random.default_rng(seed)
    pts = rng.dirichlet(np.ones(k + 1), size=n_samples)[:, :k]
    vals = np.prod(pts ** np.asarray(exponents), axis=1)
    vol = 1.0 / math.factorial(k)
    return vol * vals.mean(), vol * vals.std(ddof=1) / math.sqrt(n_samples)


def test_monomial_integral_examples():
    assert monomial_integral((0, 0)) == Fraction(1, 2)
    assert monomial_integral((1, 0)) == Fraction(1, 6)   # direct double integral
    assert monomial_integral((1, 1, 1)) == Fraction(1, 720)


def test_monomial_integral_rejects_bad_input():
    with pytest.raises(ValueError):
        monomial_integral(())
    with pytest.raises(ValueError):
        monomial_integral((1, -1))


def test_monomial_integral_vs_monte_carlo():
    rng = np.random.default_rng(5)
    for _ in range(25):
        k = int(rng.integers(1, 7))
        exps = tuple(int(e) for e in rng.integers(0, 4, size=k))
        while sum(exps) > 6:
            exps = tuple(int(e) for e in rng.integers(0, 4, size=k))
        est, se = monte_carlo_monomial(exps, seed=int(rng.integers(1 << 30)))
        exact = float(monomial_integral(exps))
        assert abs(est - exact) < 3 * se + 1e-12


@pytest.mark.parametrize("k", range(1, 13))
def test_constant_basis_closed_form(k):
    f = build_forms(k, 0)
    assert f.B[0][0] == Fraction(1, math.factorial(k))
    assert f.A[0][0] == Fraction(2 * k, math.factorial(k + 1))
    assert f.A[0][0] / f.B[0][0] == Fraction(2 * k, k + 1)


def test_symmetric_basis_size():
    # alpha + 2 beta <= 11: 12 + 10 + 8 + 6 + 4 + 2 elements
    assert len(symmetric_basis(11)) == 42
    assert len(symmetric_basis(0)) == 1


def test_maximize_constant_cap_exact():
    res = maximize_mk(5, 0)
    assert res.lower_bound_exact == Fraction(5, 3)


def test_maximize_k2_cap1_feasible_bound():
    res = maximize_mk(2, 1)
    assert res.lower_bound >= 4 / 3 - 1e-12


def test_maximize_monotone_in_degree_cap():
    vals = [maximize_mk(5, cap).lower_bound_exact for cap in range(7)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_witness_quotient_recomputation():
    res = maximize_mk(8, 4)
    num = Fraction(0)
    den = Fraction(0)
    for i, wi in enumerate(res.witness):
        for j, wj in enumerate(res.witness):
            num += wi * wj * res.forms.A[i][j]
            den += wi * wj * res.forms.B[i][j]
    assert abs(float(num / den) / res.lower_bound - 1) < 1e-9


def test_optimal_f_evaluates_and_carries_forms():
    res = maximize_mk(3, 2)
    F = optimal_f(res)
    assert F.i_value > 0
    assert float(F.j_sum) / float(F.i_value) == pytest.approx(res.lower_bound, rel=1e-12)
    assert F([0.5, 0.5, 0.5]) == 0.0  # outside the simplex
    assert isinstance(F([0.1, 0.1, 0.1]), float)


def test_constant_f_values():
    F = constant_f(4)
    assert F.i_value == Fraction(1, 24)
    assert F.j_sum == Fraction(8, math.factorial(5))
    assert F([0.1, 0.1, 0.1, 0.1]) == 1.0


def test_rk_threshold_examples():
    assert rk_threshold(4.002, 0.4999) == 2
    assert rk_threshold(2.0, 0.4999) == 1
    assert rk_threshold(10.0, 0.3) == 2
    with pytest.raises(ValueError):
        rk_threshold(-1.0, 0.3)
    with pytest.raises(ValueError):
        rk_threshold(4.0, 0.6)


def test_analytic_bound_at_105_is_vacuous():
    assert analytic_mk_bound(105) == pytest.approx(-0.42148, abs=1e-4)
    assert analytic_mk_bound(105) < 0


def test_k_for_r_scan_matches_direct_scan():
    eta = 0.4
    r = 1
    target = 5 * r / (3 * eta)
    k_scan, closed = k_for_r(r, eta)
    # direct scan oracle over k
    k = 16
    while analytic_mk_bound(k) <= target:
        k += 1
    assert k_scan == k
    assert closed is None
    # bound is monotone beyond its minimum: spot check
    vals = [analytic_mk_bound(n) for n in range(16, 4000, 97)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_k_for_r_closed_form_and_validation():
    _, closed = k_for_r(1, 0.4, C=1.0)
    assert closed == math.ceil((1 / 0.4) ** 2 * math.exp(5 / (3 * 0.4)))
    with pytest.raises(ValueError):
        k_for_r(0, 0.3)
    with pytest.raises(ValueError):
        k_for_r(1, 0.5)


def test_theorem_bound_shapes():
    b = theorem_bound(1, "log-power")
    assert b.expression == "600*M" and b.factor == 600.0 and b.constant_is_absolute
    b = theorem_bound(2, "log-power")
    assert b.factor == pytest.approx(8 * math.exp(8))
    assert not b.constant_is_absolute
    b = theorem_bound(1, "power", eta=0.2)
    assert b.factor == pytest.approx(5**3 * math.exp(5 / 0.6))
    with pytest.raises(ValueError):
        theorem_bound(1, "power")
    with pytest.raises(ValueError):
        theorem_bound(1, "bogus")
