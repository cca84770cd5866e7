"""Cross-section machinery: partial-wave sums, Mulholland splits, closure."""

import math

import pytest

from camscat.errors import DivergentPoleError, DomainError
from camscat.model import PotentialParams
from camscat.poles import ReggePole
from camscat.xsec import (
    modified_decomposition,
    relevant_poles,
    sigma1,
    sigma2,
    sigma_hard_sphere,
    sigma_res,
    sigma_res_n,
    sigma_total_pw,
)

FIG2 = PotentialParams(V=165.0, R=1.0, d=0.29, Omega=0.5)
FIG3 = PotentialParams(V=165.0, R=1.0, d=0.29, Omega=32.5)

# Frozen partial-wave totals (converged to the stated tail tolerance).
SIGMA_PW = ((FIG2, 8.0, 10.977614346026462), (FIG2, 3.0, 11.062028851043861))
# Frozen hard-sphere cross sections.
SIGMA_HS = ((4.0, 1.0, 8.435921397447274),
            (math.sqrt(192.6), 1.0, 7.30160037610753))


def test_frozen_partial_wave_totals():
    for params, E, ref in SIGMA_PW:
        assert sigma_total_pw(params, E) == pytest.approx(ref, rel=1e-12)


def test_frozen_hard_sphere():
    for k, R, ref in SIGMA_HS:
        assert sigma_hard_sphere(k, R) == pytest.approx(ref, rel=1e-12)


def test_relevant_poles_keeps_near_real_pole():
    poles = relevant_poles(FIG2, 8.0)
    assert len(poles) == 3
    lams = [p.lam for p in poles]
    assert lams[2] == pytest.approx(14.435310567869955 + 2.87e-13j, abs=1e-8)
    # Numerically real poles are clamped to sit just above the axis.
    assert all(p.lam.imag > 0.0 for p in poles)


def test_warm_start_matches_cold_scan():
    cold8 = relevant_poles(FIG2, 8.0)
    warm = relevant_poles(FIG2, 8.5, warm_start=cold8)
    cold = relevant_poles(FIG2, 8.5)
    assert len(warm) == len(cold)
    for w, c in zip(warm, cold):
        assert w.lam == pytest.approx(c.lam, abs=1e-9)
        assert w.residue == pytest.approx(c.residue, rel=1e-6)


def test_closure_at_spot_energies():
    for params, E in ((FIG2, 8.0), (FIG2, 16.5), (FIG3, 96.3)):
        poles = relevant_poles(params, E)
        dec = modified_decomposition(params, E, poles)
        assert abs(dec.closure_defect) < 1e-9 * abs(dec.sigma_total)
        direct = dec.sigma1 + dec.sigma_res + dec.sigma2
        assert direct == pytest.approx(dec.sigma_total, rel=1e-9)


def test_x_form_identities():
    poles = relevant_poles(FIG2, 8.0)
    k = math.sqrt(16.0)
    for pole in poles:
        n0 = sigma_res_n(k, pole, 0)
        formula = 8.0 * math.pi**2 / k**2 * (pole.lam * pole.residue).imag
        assert n0 == pytest.approx(formula, rel=1e-12)
        if pole.lam.imag < 0.01:
            continue  # the rotation series needs ~1/Im terms to converge
        # sigma_res sums the n >= 1 terms; the modified version adds n = 0.
        tail = sum(sigma_res_n(k, pole, n) for n in range(1, 500))
        assert sigma_res(k, (pole,)) == pytest.approx(tail, abs=1e-13)


def test_decomposition_internal_identities():
    poles = relevant_poles(FIG3, 96.3)
    dec = modified_decomposition(FIG3, 96.3, poles)
    per = dict(dec.per_n)
    # sigma'_res - sigma_res = sum of n = 0 terms, exactly by construction
    assert dec.sigma_res_mod - dec.sigma_res == pytest.approx(per[0], rel=1e-12)
    # both splits share sigma2, so the backgrounds differ the same way
    assert dec.sigma1_mod - dec.sigma1 == pytest.approx(-per[0], rel=1e-12)
    assert dec.sigma1_mod + dec.sigma_res_mod == pytest.approx(
        dec.sigma1 + dec.sigma_res, rel=1e-12)


def test_sigma_res_guards():
    good = ReggePole(8.0, 6.0 + 0.05j, 0.02 + 0.1j)
    divergent = ReggePole(8.0, 6.0 - 0.01j, 0.02 + 0.1j)
    # Individual orbit terms stay finite, but the infinite rotation sums
    # must refuse poles on or below the real axis.
    with pytest.raises(DivergentPoleError):
        sigma_res(4.0, (divergent,))
    with pytest.raises(DomainError):
        sigma_res_n(4.0, good, -1)


def test_sigma2_tail_invariance():
    base = sigma2(FIG2, 8.0)
    assert sigma2(FIG2, 8.0, t_max=12.0) == pytest.approx(base, abs=1e-12)


def test_near_real_pole_subtraction_regression():
    # At E = 16.5 a pole sits ~1e-9 above the real axis; the background
    # integral must subtract it analytically instead of chasing the spike.
    poles = relevant_poles(FIG2, 16.5)
    assert any(p.lam.imag < 1e-7 for p in poles)
    dec = modified_decomposition(FIG2, 16.5, poles)
    assert abs(dec.closure_defect) < 1e-9 * abs(dec.sigma_total)


def test_sigma1_drops_far_poles_gracefully():
    # sigma1 with no pole list must still converge (no subtraction at all);
    # with the pole list it must agree with the pw total through closure.
    val = sigma1(FIG3, 96.3, poles=())
    poles = relevant_poles(FIG3, 96.3)
    sub = sigma1(FIG3, 96.3, poles=poles)
    assert math.isfinite(val) and math.isfinite(sub)
    # The two routes differ by the subtracted pole terms, already added
    # back in closed form, so they agree to quadrature accuracy.
    assert val == pytest.approx(sub, rel=1e-8)


def test_decomposition_rejects_nonpositive_energy():
    with pytest.raises(DomainError):
        modified_decomposition(FIG2, -4.0, ())
