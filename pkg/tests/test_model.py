"""S-matrix layer: unitarity, symmetries, limits, poles and residues."""

import cmath
import math

import pytest

from camscat.cylinder import hankel_pair
from camscat.errors import AtPoleError, DomainError, NotAPoleError
from camscat.model import (
    PotentialParams,
    delta_functions,
    kinematics,
    kinematics_from_k,
    pole_function,
    residue,
    s_matrix,
)
from camscat.poles import find_regge_pole

FIG2 = PotentialParams(V=165.0, R=1.0, d=0.29, Omega=0.5)
FIG3 = PotentialParams(V=165.0, R=1.0, d=0.29, Omega=32.5)

# S-matrix spot values, frozen from runs cross-checked against the
# independent radial-ODE oracle (agreement ~1e-14 relative).
FROZEN_S = (
    (FIG2, 8.0, 3.5, -0.5247740353817955 - 0.8512415707595032j),
    (FIG3, 20.0, 7.5, 0.960052232979277 - 0.2798208533178049j),
    (FIG2, 2.0, 0.5, -0.35049759708498696 + 0.9365636307468117j),
)


def test_parameter_validation():
    with pytest.raises(DomainError):
        PotentialParams(V=165.0, R=1.0, d=1.0, Omega=0.5)  # d >= R
    with pytest.raises(DomainError):
        PotentialParams(V=-1.0, R=1.0, d=0.29, Omega=0.5)
    with pytest.raises(DomainError):
        PotentialParams(V=165.0, R=0.0, d=0.29, Omega=0.5)
    with pytest.raises(DomainError):
        PotentialParams(V=165.0, R=1.0, d=-0.1, Omega=0.5)
    assert FIG2.core_radius == pytest.approx(0.71)


def test_kinematics_momenta_and_sheets():
    kin = kinematics(FIG2, 2.0)
    assert kin.k == pytest.approx(2.0)  # k = sqrt(2 E)
    assert kin.q == pytest.approx(math.sqrt(4.0 + 2.0 * 165.0))
    below = kinematics(FIG2, -2.0)
    assert below.k == pytest.approx(2j)  # bound side: Im k > 0
    cont = kinematics(FIG2, complex(2.0, -0.5), sheet="continued")
    assert cont.k.imag < 0.0
    kin2 = kinematics_from_k(FIG2, 2.0)
    assert kin2.E == pytest.approx(2.0)


def test_frozen_s_matrix_values():
    for params, E, lam, ref in FROZEN_S:
        s = s_matrix(params, E, lam)
        assert abs(s - ref) <= 1e-12 * abs(ref)


def test_unitarity_on_real_axis():
    for params in (FIG2, FIG3):
        for lam in (0.5, 1.5, 4.5, 9.5, 19.5):
            s = s_matrix(params, 8.0, lam)
            assert abs(abs(s) - 1.0) < 1e-9


def test_reflection_symmetry_in_order():
    # S(-lambda) = exp(-2 pi i lambda) S(lambda)
    for lam in (0.8 + 0.3j, 3.2, 6.0 + 1.0j):
        s_plus = s_matrix(FIG2, 8.0, lam)
        s_minus = s_matrix(FIG2, 8.0, -lam)
        assert abs(s_minus - cmath.exp(-2j * math.pi * lam) * s_plus) \
            <= 1e-10 * abs(s_minus)


def test_imaginary_axis_modulus():
    # |S(k, i t)| = exp(-pi t) exactly; t = 16 crosses the deep-order
    # regime where the interior wave switches to its cancellation-free form.
    # t = 8 sits just below the switch where cancellation costs ~6 digits.
    for t in (2.0, 8.0, 16.0):
        s = s_matrix(FIG2, 8.0, 1j * t)
        assert abs(abs(s) - math.exp(-math.pi * t)) <= 1e-4 * math.exp(-math.pi * t)


def test_hard_sphere_limits():
    # V = 0, Omega = 0: scattering off the bare core of radius R - d
    bare = PotentialParams(V=0.0, R=1.0, d=0.29, Omega=0.0)
    # Omega huge: impenetrable shell at radius R
    sealed = PotentialParams(V=165.0, R=1.0, d=0.29, Omega=1e8)
    for E in (2.0, 8.0, 20.0):
        k = math.sqrt(2.0 * E)
        for lam in (0.5, 3.5, 9.5):
            for params, radius, tol in ((bare, 0.71, 1e-6), (sealed, 1.0, 1e-4)):
                h1, h2 = hankel_pair(lam, k * radius)
                ref = -h2.value / h1.value
                s = s_matrix(params, E, lam)
                assert abs(s - ref) <= tol * abs(ref)


def test_s_matrix_matches_delta_ratio():
    kin = kinematics(FIG2, 8.0)
    d1, d2 = delta_functions(FIG2, kin, 3.5)
    assert abs(s_matrix(FIG2, 8.0, 3.5) - (-d2 / d1)) <= 1e-14
    assert pole_function(FIG2, kin, 3.5) == d1


def test_residue_matches_laurent_coefficient():
    pole = find_regge_pole(FIG2, 8.0, 6.2 + 0.1j)
    # rho ~ (lambda - lam~) S(lambda) with one Richardson step in h
    h = 1e-4
    est = []
    for hh in (h, h / 2.0):
        est.append(hh * s_matrix(FIG2, 8.0, pole.lam + hh))
    extrap = 2.0 * est[1] - est[0]
    assert abs(pole.residue - extrap) <= 1e-5 * abs(pole.residue)
    direct = residue(FIG2, 8.0, pole.lam)
    assert abs(direct - pole.residue) <= 1e-12 * abs(direct)


def test_at_pole_and_not_a_pole_guards():
    pole = find_regge_pole(FIG2, 8.0, 6.2 + 0.1j)
    with pytest.raises(AtPoleError):
        s_matrix(FIG2, 8.0, pole.lam)
    with pytest.raises(NotAPoleError):
        residue(FIG2, 8.0, 2.0 + 0.3j)
