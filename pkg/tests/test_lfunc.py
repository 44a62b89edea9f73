import math

import numpy as np
import pytest
from scipy import integrate

from zetalim.errors import InputError, NonIntegralCoefficient, PoleAtS, PoleProximity
from zetalim.ffcore import PointCounts, count_table, hyperelliptic, places_from_counts
from zetalim.lfunc import (
    InverseRoots,
    LPolynomial,
    counts_from_lpoly,
    lpoly_from_counts,
    power_sums,
    rh_check,
    roots,
    z_ff_closed,
    z_ff_series,
    zeta_ff_eval,
)


def test_genus_zero():
    P = lpoly_from_counts(PointCounts(2, ()), 2, 0)
    assert P.coeffs == (1,)
    assert len(roots(P)) == 0


def test_genus_one_from_n1():
    P = lpoly_from_counts(PointCounts(5, (8,)), 5, 1)
    assert P.coeffs == (1, 2, 5)
    assert P.coeffs[-1] == 5**P.g


def test_e3_lpoly():
    E = hyperelliptic(3, [1, 1, 0, 1])
    P = lpoly_from_counts(count_table(E, 1), 3, 1)
    assert P.coeffs == (1, 0, 3)
    assert P.class_number == 4


def test_inconsistent_counts():
    # N_1 = 3, N_2 = 4 over F_2 with genus 2 gives a non-integral a_2
    with pytest.raises(NonIntegralCoefficient):
        lpoly_from_counts(PointCounts(2, (3, 4)), 2, 2)


def test_functional_equation_check():
    assert LPolynomial(5, 1, (1, 2, 5)).functional_equation_ok()
    assert not LPolynomial(5, 1, (1, 2, 6)).functional_equation_ok()
    with pytest.raises(InputError):
        LPolynomial(5, 1, (1, 2))


def test_lpoly_json_round_trip():
    P = LPolynomial(3, 1, (1, 0, 3))
    assert LPolynomial.from_json(P.to_json()) == P
    with pytest.raises(InputError):
        LPolynomial.from_json("[")


def test_roots_quadratic_formula():
    rts = roots(LPolynomial(5, 1, (1, 2, 5)))
    expected = sorted([-1 + 2j, -1 - 2j], key=lambda z: (z.real, z.imag))
    got = sorted(rts, key=lambda z: (z.real, z.imag))
    assert np.allclose(got, expected, atol=1e-10)
    check = rh_check(rts, 5)
    assert check.passed and check.max_deviation <= 1e-10


def test_rh_fails_off_the_circle():
    rts = roots(LPolynomial(5, 1, (1, 2, 6)), tol=1e-8)
    assert len(rts) == 2
    assert not rh_check(rts, 5).passed


def test_rh_empty():
    check = rh_check(InverseRoots(()), 7)
    assert check.passed and check.max_deviation == 0


def test_p1_z_at_two():
    assert z_ff_closed(InverseRoots(()), 2, 0, 1.5) == pytest.approx(-4 / 3, abs=1e-14)
    places = places_from_counts(counts_from_lpoly(LPolynomial(2, 0, (1,)), 40))
    val, tail = z_ff_series(places, 2, 40, g=0)
    assert abs(val - (-4 / 3)) <= tail + 1e-12


def test_z_series_zero_places():
    from zetalim.ffcore import PlaceCounts

    val, _ = z_ff_series(PlaceCounts(3, (0, 0, 0)), 2, 3)
    assert val == 0


def test_genus_one_f5_closed_vs_series():
    P = LPolynomial(5, 1, (1, 2, 5))
    places = places_from_counts(counts_from_lpoly(P, 25))
    val, tail = z_ff_series(places, 3, 25, g=1)
    z = z_ff_closed(roots(P), 5, 1, 2.5)
    assert abs(val - z) <= 1e-12 + tail


def test_z_at_half(corpus_data):
    # the functional equation forces Z(1/2) = 1 - g in base-r logarithms
    for d in corpus_data[:6]:
        g, r = d.curve.genus, d.curve.r
        assert abs(z_ff_closed(d.inverse_roots, r, g, 0) - (1 - g)) < 1e-8


def test_pole_proximity():
    # pi = sqrt(r) exactly sits on the evaluation point at eps = 0
    rts = InverseRoots((complex(math.sqrt(3)), complex(math.sqrt(3))))
    with pytest.raises(PoleProximity):
        z_ff_closed(rts, 3, 1, 0)


def test_zeta_special_value_and_pole():
    assert zeta_ff_eval(LPolynomial(2, 0, (1,)), 2) == pytest.approx(8 / 3)
    with pytest.raises(PoleAtS):
        zeta_ff_eval(LPolynomial(2, 0, (1,)), 0)


def test_zeta_matches_integrated_z():
    """ln zeta(b) - ln zeta(a) = ln r * int_a^b Z(s) ds on a real segment."""
    P = LPolynomial(5, 1, (1, 2, 5))
    rts = roots(P)
    a, b = 1.5, 3.0
    integral, _ = integrate.quad(lambda s: z_ff_closed(rts, 5, 1, s - 0.5).real, a, b, epsabs=1e-13)
    lhs = math.log(zeta_ff_eval(P, b).real) - math.log(zeta_ff_eval(P, a).real)
    assert lhs == pytest.approx(math.log(5) * integral, abs=1e-10)


def test_counts_reconstruction(corpus_data):
    for d in corpus_data[::5]:
        r, g = d.curve.r, d.curve.genus
        rts = np.array(d.inverse_roots.values)
        for n in range(1, 2 * g + 1):
            rebuilt = r**n + 1 - np.sum(rts**n).real
            assert abs(rebuilt - d.counts(n)[n]) <= 1e-6
        assert len(power_sums(d.lpoly, 2 * g)) == 2 * g


def test_coefficients_from_roots(corpus_data):
    for d in corpus_data[::5]:
        poly = np.poly(np.array(d.inverse_roots.values))
        # prod (1 - pi t) has coefficients of prod (x - pi) reversed
        a = np.array(d.lpoly.coeffs, dtype=float)
        assert np.allclose(poly.real, a, rtol=1e-8, atol=1e-8 * np.abs(a).max())
