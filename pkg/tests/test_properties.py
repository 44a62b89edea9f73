import math
import random

import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from zetalim.analytic import chebyshev_psi, digamma
from zetalim.asymfam import TVInvariants, basic_inequality, estimate_invariants, synth_family
from zetalim.corpus import CurveData
from zetalim.errors import BadModel
from zetalim.explicitff import TestSequence, basic_ineq_ff_terms, explicit_formula_check, s_decomposition
from zetalim.ffcore import count_points, count_table, counts_from_places, hyperelliptic, places_from_counts
from zetalim.lfunc import rh_check, z_ff_closed, z_ff_series
from zetalim.nfquad import QQ, QuadraticField, bs_family_nf
from zetalim.reports import Report, Row, RunConfig

SETTINGS = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def curves(draw, max_genus=3):
    p = draw(st.sampled_from([3, 5]))
    g = draw(st.integers(1, max_genus))
    deg = 2 * g + 1 + draw(st.integers(0, 1))
    f = draw(st.lists(st.integers(0, p - 1), min_size=deg, max_size=deg)) + [draw(st.integers(1, p - 1))]
    try:
        return hyperelliptic(p, f)
    except BadModel:
        assume(False)


_cache: dict = {}


def _data(curve):
    key = (curve.r, curve.coeffs)
    if key not in _cache:
        _cache[key] = CurveData(curve)
    return _cache[key]


@SETTINGS
@given(st.complex_numbers(min_magnitude=0.05, max_magnitude=10).filter(lambda z: 0 < z.real < 10))
def test_digamma_recurrence(z):
    assert abs(digamma(z + 1) - digamma(z) - 1 / z) <= 1e-13 * max(1.0, abs(1 / z), abs(digamma(z)))


@SETTINGS
@given(st.floats(0.01, 50))
def test_digamma_duplication(x):
    assert abs(digamma(2 * x) - 0.5 * (digamma(x) + digamma(x + 0.5)) - math.log(2)) <= 1e-12 * max(1, abs(digamma(x)))


@SETTINGS
@given(curves())
def test_mobius_round_trip_and_weil_bound(curve):
    d = _data(curve)
    counts = d.counts(12)
    places = places_from_counts(counts)
    assert counts_from_places(places) == counts
    assert places.weil_ok(curve.genus)


@SETTINGS
@given(curves(max_genus=2))
def test_counts_agree_with_enumeration(curve):
    d = _data(curve)
    depth = curve.genus + 1
    assert count_table(curve, depth).N == d.counts(depth).N
    assert count_points(curve, 1) == count_points(curve, 1)


@SETTINGS
@given(curves())
def test_functional_equation_and_rh(curve):
    d = _data(curve)
    assert d.lpoly.functional_equation_ok()
    assert d.lpoly.class_number > 0
    assert rh_check(d.inverse_roots, curve.r).passed


@SETTINGS
@given(curves(), st.integers(1, 20), st.integers(0, 2**32 - 1))
def test_explicit_formula_identity(curve, L, seed):
    rng = np.random.default_rng(seed)
    v = TestSequence(tuple(rng.normal(size=L) + 1j * rng.normal(size=L)))
    d = _data(curve)
    chk = explicit_formula_check(v, d.counts(L), d.inverse_roots)
    assert chk.gap <= 1e-9 * (1 + abs(chk.lhs))


@SETTINGS
@given(curves(), st.integers(10, 16), st.floats(0.01, 0.5), st.floats(-2, 2))
def test_s_identity(curve, N, e0, e1):
    d = _data(curve)
    dec = s_decomposition(d.counts(N), d.places(N), d.inverse_roots, N, complex(e0, e1))
    assert dec.identity_gap <= 1e-9 * max(1, abs(dec.S0))
    if e1 == 0:
        assert abs(dec.S2) <= 4


@SETTINGS
@given(curves(), st.floats(1.2, 4), st.floats(-3, 3))
def test_closed_matches_series(curve, sigma, t):
    d = _data(curve)
    s = complex(sigma, t)
    val, tail = z_ff_series(d.places(60), s, 60, g=curve.genus)
    z = z_ff_closed(d.inverse_roots, curve.r, curve.genus, s - 0.5)
    assert abs(val - z) <= tail + 1e-9


@SETTINGS
@given(curves(), st.floats(1e-4, 0.25))
def test_basic_inequality_terms_nonnegative(curve, eps):
    d = _data(curve)
    assert min(basic_ineq_ff_terms(d.inverse_roots, curve.r, eps).terms) >= -1e-12


@st.composite
def feasible_targets(draw):
    r = draw(st.sampled_from([2, 3, 4, 5]))
    degrees = draw(st.lists(st.integers(1, 6), min_size=1, max_size=4, unique=True))
    raw = {r**f: draw(st.floats(0, 1)) for f in degrees}
    inv = TVInvariants(r, raw)
    B = basic_inequality(inv)
    scale = draw(st.floats(0.05, 0.95)) / B if B > 0 else 1.0
    return TVInvariants(r, {q: v * scale for q, v in raw.items()})


@SETTINGS
@given(feasible_targets(), st.floats(20, 200))
def test_synth_round_trip(targets, g1):
    schedule = [g1, 2 * g1, 3 * g1]
    fam = synth_family(targets, schedule)
    est = estimate_invariants(list(fam.members), r=targets.r).invariants
    for q, v in targets.phi.items():
        # the Weil cap can bind only where phi exceeds the per-degree bound
        assert abs(est.phi.get(q, 0.0) - v) <= 2 / g1 or v * g1 > (q + 1 + 2 * g1 * math.sqrt(q))


@settings(max_examples=10, deadline=None)
@given(st.lists(st.sampled_from([-1, -2, -5, -23, -47, -71, -167, -431]), min_size=3, max_size=5, unique=True))
def test_bs_family_monotone(ds):
    fields = [QuadraticField(d) for d in ds]
    sums = [bs_family_nf(fields, N).family_sum for N in (10, 50, 200, 1000)]
    assert all(b >= a for a, b in zip(sums, sums[1:]))


@SETTINGS
@given(st.floats(2, 5000), st.floats(0, 5000))
def test_chebyshev_monotone(x, dx):
    assert chebyshev_psi(QQ, x + dx) >= chebyshev_psi(QQ, x)


@SETTINGS
@given(st.integers(0, 2**32 - 1))
def test_csv_independent_of_row_order(seed):
    cfg = RunConfig("verify-nf", (100, 1000), (0.1, 0.3))
    rows = [
        Row(k, "nf_truncation", "-", 0.0, N, complex(e), complex(N * e, 0), 1e3, "pass")
        for k in ("Q", "Q(sqrt(-1))")
        for N in (100, 1000)
        for e in (0.1, 0.3)
    ]
    shuffled = rows[:]
    random.Random(seed).shuffle(shuffled)
    assert Report(cfg, rows).csv_text() == Report(cfg, shuffled).csv_text()
