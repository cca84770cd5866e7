"""Pole location, winding counts, trajectory tracing and classification."""

import pytest

from camscat.errors import (
    BoundaryZeroError,
    ContinuationLostError,
    DomainError,
    NonIntegralWindingError,
)
from camscat.model import PotentialParams
from camscat.poles import (
    KIND_BOUND,
    KIND_METASTABLE,
    _continue_root,
    bound_levels_swave,
    classify_trajectory,
    find_regge_pole,
    find_siegert_energy,
    lambda_estimate,
    metastable_levels_swave,
    region_winding,
    scan_poles,
    trace_regge_trajectory,
)

FIG2 = PotentialParams(V=165.0, R=1.0, d=0.29, Omega=0.5)
FIG3 = PotentialParams(V=165.0, R=1.0, d=0.29, Omega=32.5)

# s-wave spectra, frozen (bound levels cross-checked against the sign
# changes of the real boundary determinant on the negative-E axis).
FIG2_BOUND = (-123.48527941741384, -13.269037563387085)
FIG3_BOUND = (-111.05193076576222,)
FIG3_META = 47.616657850014526 - 2.9101823035496044j

# Regge poles of the Omega = 0.5 model at E = 8, frozen (residues
# cross-checked against a contour-integral oracle).
FIG2_E8_POLES = (
    5.621018120527543 + 2.986746827511621j,
    6.163435543300616 + 0.04978347382886113j,
    14.435310567869955 + 2.733094852403872e-13j,
)
SCAN_REGION = (-0.25, 16.0, -0.05, 3.5)


def test_bound_levels():
    assert bound_levels_swave(FIG2) == pytest.approx(FIG2_BOUND, rel=1e-12)
    assert bound_levels_swave(FIG3) == pytest.approx(FIG3_BOUND, rel=1e-12)


def test_metastable_level():
    lead = metastable_levels_swave(FIG3)[0]
    assert lead == pytest.approx(FIG3_META, rel=1e-12)


def test_find_siegert_energy():
    e2 = find_siegert_energy(FIG2, 0.5, complex(-13.0, 0.0))
    assert e2 == pytest.approx(FIG2_BOUND[1], rel=1e-10)
    assert abs(e2.imag) < 1e-9
    e3 = find_siegert_energy(FIG3, 0.5, complex(47.0, -3.0))
    assert e3 == pytest.approx(FIG3_META, rel=1e-10)


def test_classification():
    cls2 = classify_trajectory(FIG2)
    assert cls2.kind == KIND_BOUND
    assert cls2.type_label == "I"
    assert cls2.E0 == pytest.approx(FIG2_BOUND[1], rel=1e-10)
    assert abs(cls2.gamma) < 1e-9
    cls3 = classify_trajectory(FIG3)
    assert cls3.kind == KIND_METASTABLE
    assert cls3.type_label == "II"
    assert cls3.E0 == pytest.approx(FIG3_META.real, rel=1e-10)
    assert cls3.gamma == pytest.approx(-FIG3_META.imag, rel=1e-10)


def test_find_regge_pole_from_nearby_seed():
    pole = find_regge_pole(FIG2, 8.0, 6.2 + 0.1j)
    assert pole.lam == pytest.approx(FIG2_E8_POLES[1], rel=1e-11)
    assert pole.residue == pytest.approx(
        0.02065325604907052 + 0.09639326846550816j, rel=1e-9)


def test_scan_finds_all_poles_sorted():
    poles = scan_poles(FIG2, 8.0, SCAN_REGION)
    assert len(poles) == 3
    for found, ref in zip(poles, FIG2_E8_POLES):
        assert found.lam == pytest.approx(ref, abs=1e-9)
    assert region_winding(FIG2, 8.0, SCAN_REGION) == 3


def test_winding_additivity():
    left = (-0.25, 10.0, -0.05, 3.5)
    right = (10.0, 16.0, -0.05, 3.5)
    assert region_winding(FIG2, 8.0, left) == 2
    assert region_winding(FIG2, 8.0, right) == 1
    union = [p.lam for p in scan_poles(FIG2, 8.0, left)]
    union += [p.lam for p in scan_poles(FIG2, 8.0, right)]
    assert sorted(union, key=lambda z: z.real) == pytest.approx(
        list(FIG2_E8_POLES), abs=1e-9)


def test_empty_region_winds_zero():
    assert region_winding(FIG2, 8.0, (30.0, 35.0, 1.5, 2.5)) == 0
    assert scan_poles(FIG2, 8.0, (30.0, 35.0, 1.5, 2.5)) == []


def test_pole_on_boundary_is_rejected():
    pole = FIG2_E8_POLES[1]
    corner = (pole.real, 16.0, pole.imag, 3.5)
    with pytest.raises(BoundaryZeroError):
        region_winding(FIG2, 8.0, corner)
    with pytest.raises((BoundaryZeroError, NonIntegralWindingError)):
        region_winding(FIG2, 8.0, (pole.real, 16.0, -0.05, 3.5))


def test_trace_regge_trajectory():
    # Metastable branch: the estimate needs the full complex E0 - i gamma.
    seed = lambda_estimate(FIG3, 48.0, FIG3_META)
    traj = trace_regge_trajectory(FIG3, [48.0, 60.0, 72.0, 84.0, 96.0], seed)
    assert len(traj.samples) == 5
    E_end, lam_end, _ = traj.samples[-1]
    assert E_end == 96.0
    assert lam_end == pytest.approx(8.362773015830307 + 0.2894620744276941j,
                                    rel=1e-9)


def test_trace_rejects_non_monotone_grid():
    with pytest.raises(DomainError):
        trace_regge_trajectory(FIG3, [48.0, 60.0, 55.0], 1.5 + 1.3j)


def test_lambda_estimate_pins_the_endpoints():
    # At E = E0 the interior action vanishes and the estimate is s-wave.
    assert lambda_estimate(FIG2, FIG2_BOUND[1], FIG2_BOUND[1]) == 0.5
    est = lambda_estimate(FIG2, 0.0, FIG2_BOUND[1])
    assert est.imag == 0.0 and est.real > 0.5


def test_continue_root_gives_up_after_halvings():
    # A root branch with a genuine discontinuity cannot be continued
    # past it no matter how finely the step is halved.
    def solve(x, seed):
        root = complex(x, 0.0) if x < 0.5 else complex(x + 50.0, 0.0)
        if abs(root - seed) > 1.0:
            raise ContinuationLostError("jump")
        return root

    history = [(0.0, 0.0 + 0.0j), (0.1, 0.1 + 0.0j)]
    with pytest.raises(ContinuationLostError):
        _continue_root(solve, history, 1.0)
