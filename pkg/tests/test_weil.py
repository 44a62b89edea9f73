import math

import numpy as np
import pytest
from scipy import integrate

from zetalim.analytic import (
    EULER_GAMMA,
    TestFunctionFNeps,
    archimedean_integrals,
    cosh_integral,
    digamma,
    i_closed,
    j_closed,
    sech_integral,
    sech_integral_closed,
    theorem2_residual,
    truncated_prime_sum,
    weil_prime_term,
    weil_rhs_terms,
)
from zetalim.errors import DomainError
from zetalim.nfquad import QQ, QuadraticField

QI = QuadraticField(-1)


def test_test_function_shape():
    F = TestFunctionFNeps(100, 0.3)
    x = np.array([-2.0, 0.0, 2.0])
    assert np.allclose(F(x), np.exp(-0.3 * 2) * np.array([1, 0, 1]) + np.array([0, 1, 0]))
    assert F(F.cut) == pytest.approx(math.exp(-0.3 * F.cut) / 2)
    assert F(F.cut + 1e-9) == 0
    assert F(-1.5) == F(1.5)


def test_cosh_integral_closed_form():
    for N, eps in ((100, 0.1), (1000, 0.5), (50, 0.3 + 1j)):
        L = math.log(N + 0.5)
        re, _ = integrate.quad(lambda x: (np.exp(-eps * x) * np.cosh(x / 2)).real, 0, L, epsabs=1e-12)
        im, _ = integrate.quad(lambda x: (np.exp(-eps * x) * np.cosh(x / 2)).imag, 0, L, epsabs=1e-12)
        assert abs(cosh_integral(N, eps) - complex(re, im)) <= 1e-9 * max(1, abs(re))


def test_cosh_term_leading_part():
    # the growing exponential alone gives 4((N+1/2)^{1/2-eps} - 1)/(1/2 - eps)
    N, eps = 10**4, 0.1
    lead = 4 * ((N + 0.5) ** (0.5 - eps) - 1) / (0.5 - eps)
    full = 4 * cosh_integral(N, eps).real
    small = 2 * (1 - (N + 0.5) ** (-0.5 - eps)) / (0.5 + eps)
    assert full == pytest.approx(0.5 * lead + small, rel=1e-12)


def test_sech_integral_orientation():
    assert abs(sech_integral(0.0) - math.pi) <= 1e-8
    assert sech_integral_closed(0.0) == pytest.approx(math.pi, abs=1e-12)
    for eps in (0.1, 0.3, 1.0):
        assert sech_integral(eps) == pytest.approx(sech_integral_closed(eps), abs=1e-12)
        assert sech_integral_closed(eps) > 0


def test_duplication_formula():
    rng = np.random.default_rng(7)
    for x in rng.uniform(0.05, 20, size=50):
        lhs = digamma(2 * x)
        rhs = 0.5 * (digamma(x) + digamma(x + 0.5)) + math.log(2)
        assert abs(lhs - rhs) <= 1e-12


@pytest.mark.parametrize("N", [10**2, 10**3, 10**4])
@pytest.mark.parametrize("eps", [0.1, 0.5, 1.0])
def test_archimedean_gaps(N, eps):
    arch = archimedean_integrals(N, eps)
    gI, gJ = arch.gaps
    assert arch.I_closed == pytest.approx(EULER_GAMMA + math.log(4) + digamma(0.5 + eps))
    assert gI <= 4 / math.sqrt(N)
    assert gJ <= 4 / math.sqrt(N)


def test_archimedean_limit():
    # with the cut far away only the numerical error remains
    arch = archimedean_integrals(10**12, 0.3)
    assert max(arch.gaps) < 1e-5
    assert j_closed(0.3) == pytest.approx(arch.J_num, abs=1e-5)
    assert i_closed(0.3) == pytest.approx(arch.I_num, abs=1e-5)


def test_archimedean_domain():
    with pytest.raises(DomainError):
        archimedean_integrals(3, 0.5)
    with pytest.raises(DomainError):
        archimedean_integrals(100, 0)


def test_prime_terms_rational_n10():
    eps = 0.2
    s = 0.5 + eps
    lam = {2: math.log(2), 3: math.log(3), 4: math.log(2), 5: math.log(5), 7: math.log(7), 8: math.log(2), 9: math.log(3)}
    expected = -2 * sum(v * n ** (-s) for n, v in lam.items())
    assert weil_prime_term(QQ, 10, eps) == pytest.approx(expected, rel=1e-13)
    trunc = sum(math.log(p) / (p**s - 1) for p in (2, 3, 5, 7))
    assert truncated_prime_sum(QQ, 10, eps) == pytest.approx(trunc, rel=1e-13)


def test_prime_term_gaussian_place_table():
    eps = 0.3
    s = 0.5 + eps
    # places: norm 2 (powers 2, 4, 8), two of norm 5, one of norm 9
    expected = -2 * (math.log(2) * (2**-s + 4**-s + 8**-s) + 2 * math.log(5) * 5**-s + math.log(9) * 9**-s)
    assert weil_prime_term(QI, 10, eps) == pytest.approx(expected, rel=1e-13)


def test_weil_terms_gaussian():
    terms = weil_rhs_terms(QI, 1000, 0.3)
    assert terms.constant == pytest.approx(2 * math.log(2) - 2 * (EULER_GAMMA + math.log(8 * math.pi)))
    assert terms.real_places == 0
    assert terms.cosh == pytest.approx(4 * cosh_integral(1000, 0.3))
    assert terms.total == pytest.approx(terms.constant + terms.cosh + terms.all_places + terms.primes)


@pytest.mark.parametrize("N", [10**2, 10**3, 10**4])
def test_rational_residual_within_sqrt_bound(N):
    rep = theorem2_residual(QQ, N, 0.3)
    assert rep.abs_residual <= 10 * math.sqrt(N)
    assert rep.passed


def test_residual_components():
    rep = theorem2_residual(QI, 500, 0.25 + 0.5j)
    c = rep.components
    assert rep.residual == pytest.approx(c["truncated_sum"] + c["Z_regularized"])
    assert c["diagnostic"] == pytest.approx(rep.residual - c["cosh_term"] + 1 / (0.75 + 0.5j))


def test_residual_at_half_shift():
    # eps = 1/2 puts Z at its pole; the regularized form stays finite
    rep = theorem2_residual(QQ, 1000, 0.5)
    assert math.isfinite(rep.abs_residual)


def test_convergent_regime():
    res = [theorem2_residual(QQ, N, 0.9).residual for N in (10**3, 10**4, 10**5)]
    assert abs(res[2] - res[1]) < abs(res[1] - res[0])
    assert abs(res[2] - res[1]) < 0.05


def test_diagnostic_growth_is_slow():
    Ns = [10**2, 10**3, 10**4]
    for K in (QQ, QI):
        for eps in (0.1, 0.3, 0.5):
            d = [abs(theorem2_residual(K, N, eps).components["diagnostic"]) for N in Ns]
            slope = np.polyfit(np.log(Ns), np.log(d), 1)[0]
            assert slope <= 0.55


def test_residual_domain():
    with pytest.raises(DomainError):
        theorem2_residual(QQ, 5, 0.3)
    with pytest.raises(DomainError):
        theorem2_residual(QQ, 100, -0.3)
