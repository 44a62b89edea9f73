import json
import math

import numpy as np
import pytest

from zetalim.asymfam import (
    FamilyMember,
    TVInvariants,
    basic_inequality,
    basic_inequality_ok,
    corollary13_residual,
    corollary15_residual,
    estimate_invariants,
    family_from_dict,
    fit_decay,
    geometric_tail,
    kappa_limit,
    limit_z,
    limit_z_full,
    load_family,
    optimal_family,
    power_law,
    synth_family,
    theorem_onehalf_residual,
)
from zetalim.errors import DomainError, InfeasibleTargets, InputError, TooFewMembers

EQ4 = TVInvariants(4, {4: 1.0})


def test_zero_members_estimate_zero():
    members = [FamilyMember(f"m{i}", g, {4: 0}) for i, g in enumerate((10, 20, 30))]
    est = estimate_invariants(members, r=4)
    assert est.invariants.phi == {4: 0.0}
    assert est.spread == {4: 0.0}


def test_estimate_errors():
    members = [FamilyMember("a", 10, {}), FamilyMember("b", 20, {})]
    with pytest.raises(TooFewMembers):
        estimate_invariants(members)
    members = [FamilyMember(str(g), g, {}) for g in (10, 30, 20)]
    with pytest.raises(InputError):
        estimate_invariants(members)
    with pytest.raises(InputError):
        FamilyMember("x", 0, {})


def test_synth_round_trip():
    targets = TVInvariants(3, {3: 0.2, 9: 0.35, 27: 0.1})
    assert basic_inequality(targets) < 1
    fam = synth_family(targets, [50, 80, 130, 210])
    est = estimate_invariants(list(fam.members), r=3).invariants
    g1 = fam.members[0].g
    for q, v in targets.phi.items():
        assert abs(est.phi[q] - v) <= 2 / g1


def test_synth_equality_case():
    fam = synth_family(EQ4, [25, 50, 100])
    assert fam.equality
    assert fam.basic_value == pytest.approx(1.0, abs=1e-12)
    assert [m.phi[4] for m in fam.members] == [25, 50, 100]


def test_synth_zero_and_infeasible():
    fam = synth_family(TVInvariants(4, {}), [10, 20, 30])
    assert all(not m.phi for m in fam.members)
    with pytest.raises(InfeasibleTargets):
        synth_family(TVInvariants(4, {4: 1.5}), [10, 20, 30])


def test_invariants_validation():
    with pytest.raises(InputError):
        TVInvariants(4, {8: 1.0})
    with pytest.raises(InputError):
        TVInvariants(4, {4: -1.0})


def test_basic_inequality_values():
    assert basic_inequality(EQ4) == pytest.approx(1.0, abs=1e-12)
    assert basic_inequality_ok(EQ4)
    assert basic_inequality(optimal_family(4)) == pytest.approx(1.0, abs=1e-9)
    assert not basic_inequality_ok(TVInvariants(4, {4: 1.1}))


def test_limit_z_single_term():
    inv = TVInvariants(4, {4: 1.0})
    for s in (0.75, 1.0, 2 + 1j):
        sv = limit_z(inv, s, 5)
        assert sv.value == pytest.approx(-1 / (4**s - 1), abs=1e-14)
    assert limit_z(TVInvariants(4, {}), 2, 5).value == 0


def test_limit_z_tail_bound():
    inv = optimal_family(4)
    for s in (0.6, 1.0, 1.5):
        for cutoff in (3, 8, 15):
            a = limit_z(inv, s, cutoff)
            b = limit_z(inv, s, cutoff + 10)
            assert abs(a.value - b.value) <= a.tail_bound
            assert abs(a.value - limit_z_full(inv, s)) <= a.tail_bound


def test_limit_z_domain():
    with pytest.raises(DomainError):
        limit_z(EQ4, 0.5, 5)


def test_shifted_residual_finite_support():
    for N in (1, 2, 5):
        assert corollary13_residual(EQ4, N, 0.1).residual == 0


def test_shifted_residual_optimal_rate():
    inv = optimal_family(4)
    eps = 0.25
    for N in (4, 8, 12):
        rep = corollary13_residual(inv, N, eps)
        # terms decay like r^{-(1/2+eps) f} beyond the tail
        assert rep.abs_residual <= 2 * 4 ** (-(0.5 + eps) * N)
        assert rep.passed
    with pytest.raises(DomainError):
        corollary13_residual(inv, 5, 0)


def test_onehalf_finite_support_sentinel():
    reps, fit = theorem_onehalf_residual(EQ4, [1, 2, 3, 4])
    assert all(rep.residual == 0 for rep in reps)
    assert fit.exact and math.isinf(fit.delta)
    reps, fit = theorem_onehalf_residual(TVInvariants(4, {}), [1, 2])
    assert all(rep.residual == 0 for rep in reps)


def test_onehalf_geometric_tail_delta():
    inv = geometric_tail(4, 0.4, 0.25)
    assert basic_inequality_ok(inv)
    reps, fit = theorem_onehalf_residual(inv, list(range(1, 15)))
    assert fit.delta == pytest.approx(0.25, abs=1e-6)
    assert all(rep.passed for rep in reps)


def test_onehalf_literal_power_law():
    # phi_f = c r^{-f/4} has basic terms ~ f r^{-3f/4}, so the fit sees more than 1/4
    _, fit = theorem_onehalf_residual(power_law(4, 0.5, 0.25), list(range(1, 15)))
    assert 0.6 < fit.delta < 0.8


def test_fit_decay_exact_line():
    Ns = np.arange(1, 10)
    fit = fit_decay(Ns, 3.0 * 2.0 ** (-0.4 * Ns), 2)
    assert fit.delta == pytest.approx(0.4)
    assert fit.fit_residual < 1e-12


def test_kappa():
    assert kappa_limit(TVInvariants(4, {})).value == 0
    assert kappa_limit(EQ4).value == pytest.approx(math.log(4 / 3, 4), abs=1e-15)
    k = kappa_limit(optimal_family(4))
    assert k.value > 0 and k.tail_bound < 1e-20


def test_kappa_term_rearrangement():
    inv = TVInvariants(3, {3: 0.2, 9: 0.1, 81: 0.05})
    expected = sum(v * math.log(q / (q - 1), 3) for q, v in inv.phi.items())
    assert kappa_limit(inv).value == pytest.approx(expected, rel=1e-14)


def test_kappa_residuals():
    for N in (1, 2, 6):
        assert corollary15_residual(EQ4, N).residual == 0
    inv = optimal_family(4)
    _, fit = theorem_onehalf_residual(inv, list(range(1, 15)))
    prev = math.inf
    for N in range(1, 15):
        rep = corollary15_residual(inv, N, fit)
        assert rep.abs_residual <= 4.0**-N * 4 / 3
        assert rep.abs_residual <= prev
        assert rep.passed
        prev = rep.abs_residual


def test_family_files(tmp_path):
    spec = family_from_dict({"r": 4, "members": [{"g": 25, "phi": {"4": 25}}, {"g": 50, "phi": {"4": 50}}]})
    assert spec.members[1].phi == {4: 50}
    spec = family_from_dict({"r": 4, "targets": {"4": 1.0}, "schedule": [25, 50, 100]})
    assert spec.targets.phi == {4: 1.0} and spec.schedule == (25.0, 50.0, 100.0)
    spec = family_from_dict({"r": 4, "closed_form": {"kind": "geometric_tail", "c": 1.0, "rate": 0.5}})
    assert spec.targets.closed_form is not None
    with pytest.raises(InputError):
        family_from_dict({"r": 4})
    with pytest.raises(InputError):
        family_from_dict({"r": 4, "closed_form": {"kind": "spiral", "c": 1, "rate": 1}})
    p = tmp_path / "fam.json"
    p.write_text(json.dumps({"r": 4, "targets": {"4": 1.0}}))
    assert load_family(p).targets.phi == {4: 1.0}


def test_number_field_family():
    inv = TVInvariants(None, {2: 0.05, 3: 0.05}, phi_C=0.05)
    assert 0 < basic_inequality(inv) < 1
    reps, fit = theorem_onehalf_residual(inv, [2, 3, 10])
    assert reps[-1].residual == 0
    assert kappa_limit(inv).value == pytest.approx(0.05 * (math.log(2) + math.log(1.5)))
