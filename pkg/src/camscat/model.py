"""Layered spherical potential and its exact S-matrix.

The potential (reduced units, 2m = hbar = 1 absorbed into V, Omega, E) is

    W(r) = +inf            r <  c = R - d      (hard core)
         = -V              c <= r <= R        (rectangular well)
         = Omega delta(r-R)                   (delta shell)
         = 0               r >  R,

with channel momenta k = sqrt(2E) outside and q = sqrt(k^2 + 2V) inside.
The full radial solution carries sqrt(r) against the cylinder functions; its
1/(2r) log-derivative term is common to the interior and exterior pieces and
cancels in the matching, so everything below works with bare cylinder
functions of order lambda = J + 1/2.

The interior solution vanishing at the hard core is proportional to

    phi(r) = H2_lam(q r) H1_lam(q c) - H2_lam(q c) H1_lam(q r),

and matching at r = R with the delta-shell jump phi'(R+) - phi'(R-) =
2 Omega phi(R) gives the S-matrix as the ratio of two entire matching
defects,

    Delta^(i) = k H^(i)'(kR) phi(R) - H^(i)(kR) [phi'(R) + 2 Omega phi(R)],
    S(E, lam) = - Delta^(2) / Delta^(1).

Regge poles are the zeros of Delta^(1) in lam at fixed E; the residue of S at
a simple pole is rho = - Delta^(2) / (d Delta^(1)/d lam).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .cylinder import bessel_and_h1, hankel_pair
from .errors import (
    AccuracyLossError,
    AtPoleError,
    DegeneratePoleError,
    DomainError,
    NotAPoleError,
)

#: |Delta^(1)| below this multiple of the term scale counts as "on a pole"
AT_POLE_RTOL = 1e-8
#: a claimed pole must satisfy the pole condition to this multiple of scale
POLE_RTOL = 1e-10
#: |dDelta^(1)/dlam| below this multiple of scale/1 is treated as degenerate
DEGENERATE_RTOL = 1e-8
#: residue finite-difference step in lam (one Richardson halving applied);
#: sized so round-off noise ~eps/step stays below the Richardson truncation
RESIDUE_FD_STEP = 1e-3


@dataclass(frozen=True)
class PotentialParams:
    """Well depth V >= 0, outer radius R > 0, well width 0 < d < R, shell strength Omega."""

    V: float
    R: float
    d: float
    Omega: float

    def __post_init__(self) -> None:
        if not (self.V >= 0.0 and math.isfinite(self.V)):
            raise DomainError(f"V must be finite and >= 0, got {self.V}")
        if not (self.R > 0.0 and math.isfinite(self.R)):
            raise DomainError(f"R must be finite and > 0, got {self.R}")
        if not (0.0 < self.d < self.R):
            raise DomainError(f"d must satisfy 0 < d < R, got d={self.d}, R={self.R}")
        if not math.isfinite(self.Omega):
            raise DomainError(f"Omega must be finite, got {self.Omega}")

    @property
    def core_radius(self) -> float:
        return self.R - self.d

    def to_dict(self) -> dict:
        return {"V": self.V, "R": self.R, "d": self.d, "Omega": self.Omega}

    @classmethod
    def from_dict(cls, data: dict) -> "PotentialParams":
        return cls(V=float(data["V"]), R=float(data["R"]),
                   d=float(data["d"]), Omega=float(data["Omega"]))


@dataclass(frozen=True)
class ChannelKinematics:
    """Energy and the two channel momenta on a definite k-sheet.

    sheet is "physical" (Im k >= 0) or "continued" (Im k < 0, reached through
    the real axis for Siegert/resonance work).  q = sqrt(k^2 + 2V) always
    takes the principal branch (Re q >= 0), which is continuous throughout
    the energy ranges this package touches.
    """

    E: complex
    k: complex
    q: complex
    sheet: str


@dataclass(frozen=True)
class ReggePole:
    """A pole of S(E, lam) in the lam plane at fixed real energy."""

    E: float
    lam: complex
    residue: complex


def kinematics(params: PotentialParams, E: complex, sheet: str = "physical") -> ChannelKinematics:
    """Channel momenta for energy E on the requested k-sheet.

    The principal sqrt(2E) has Im k >= 0 for any E off the positive real
    axis; "continued" flips its sign to reach the lower-half k-plane (the
    resonance sheet).  Real E > 0 gives real k on either sheet.
    """
    if sheet not in ("physical", "continued"):
        raise DomainError(f"unknown sheet {sheet!r}")
    E = complex(E)
    k = cmath.sqrt(2.0 * E)
    if sheet == "physical":
        if k.imag < 0:
            k = -k
    else:
        if k.imag > 0:
            k = -k
    q = cmath.sqrt(k * k + 2.0 * params.V)
    if q.real < 0:
        q = -q
    return ChannelKinematics(E=E, k=k, q=q, sheet=sheet)


def kinematics_from_k(params: PotentialParams, k: complex) -> ChannelKinematics:
    """Kinematics directly from a complex momentum (Siegert searches walk in k)."""
    k = complex(k)
    q = cmath.sqrt(k * k + 2.0 * params.V)
    if q.real < 0:
        q = -q
    sheet = "physical" if k.imag >= 0 else "continued"
    return ChannelKinematics(E=k * k / 2.0, k=k, q=q, sheet=sheet)


def _interior_wave(params: PotentialParams, kin: ChannelKinematics,
                   lam: complex) -> tuple[complex, complex]:
    """(phi(R), phi'(R)) of the interior solution vanishing at the hard core.

    phi(r) = H2(qr)H1(qc) - H2(qc)H1(qr) is evaluated in the algebraically
    identical form 2[J(qr)H1(qc) - J(qc)H1(qr)]: under the centrifugal
    barrier (large lam, small qr) the H2*H1 products are exponentially larger
    than their difference, while the J*H1 form keeps the dominant and
    subdominant pieces separate.  The overall factor 2 is kept so the two
    forms agree exactly.

    Near the imaginary order axis the roles swap: H1 approaches 2J up to
    corrections of order exp(-pi Im lam), the J*H1 products cancel, and the
    H2*H1 form (whose factors are then exponentially separated) is exact.
    The realized cancellation picks the form.
    """
    q = kin.q
    c = params.core_radius
    jc, h1c = bessel_and_h1(lam, q * c)
    jr, h1r = bessel_and_h1(lam, q * params.R)
    phi = 2.0 * (jr.value * h1c.value - jc.value * h1r.value)
    dphi = 2.0 * q * (jr.deriv_arg * h1c.value - jc.value * h1r.deriv_arg)
    size = abs(jr.value * h1c.value) + abs(jc.value * h1r.value)
    if abs(phi) * 1e12 >= size:
        return phi, dphi
    h1c2, h2c = hankel_pair(lam, q * c)
    h1r2, h2r = hankel_pair(lam, q * params.R)
    phi = h2r.value * h1c2.value - h2c.value * h1r2.value
    dphi = q * (h2r.deriv_arg * h1c2.value - h2c.value * h1r2.deriv_arg)
    size = abs(h2r.value * h1c2.value) + abs(h2c.value * h1r2.value)
    if abs(phi) * 1e12 < size:
        raise AccuracyLossError(
            f"interior wave cancels beyond 1e12 in both forms at order {lam}")
    return phi, dphi


def interior_logderiv(params: PotentialParams, kin: ChannelKinematics, lam: complex) -> complex:
    """Radial log-derivative phi'(R)/phi(R) of the interior solution.

    At lam = 1/2 this reduces to q cot(qd) - 1/(2R).
    """
    phi, dphi = _interior_wave(params, kin, lam)
    if abs(phi) < 1e-280 * (abs(phi) + abs(dphi) / max(abs(kin.q), 1.0)):
        raise AtPoleError("interior wave vanishes at R (hard-sphere-like zero)")
    return dphi / phi


def _delta_terms(params: PotentialParams, kin: ChannelKinematics,
                 lam: complex) -> tuple[complex, complex, float]:
    """(Delta1, Delta2, scale).  scale bounds |Delta| from the magnitudes of
    its three constituent terms and calibrates the at-pole thresholds."""
    k = kin.k
    phi, dphi = _interior_wave(params, kin, lam)
    h1, h2 = hankel_pair(lam, k * params.R)
    jump = dphi + 2.0 * params.Omega * phi
    d1 = k * h1.deriv_arg * phi - h1.value * jump
    d2 = k * h2.deriv_arg * phi - h2.value * jump
    scale = (abs(k * h1.deriv_arg * phi) + abs(h1.value * dphi)
             + abs(2.0 * params.Omega * h1.value * phi))
    return d1, d2, scale


def delta_functions(params: PotentialParams, kin: ChannelKinematics,
                    lam: complex) -> tuple[complex, complex]:
    """The two matching defects (Delta1, Delta2).

    Delta1 is entire in lam at fixed E; its zeros are the Regge poles.
    S = -Delta2/Delta1.
    """
    d1, d2, _ = _delta_terms(params, kin, lam)
    return d1, d2


def pole_function(params: PotentialParams, kin: ChannelKinematics, lam: complex) -> complex:
    """Delta1 alone; the root-finding target for Regge poles and Siegert states."""
    d1, _, _ = _delta_terms(params, kin, lam)
    return d1


def pole_scale(params: PotentialParams, kin: ChannelKinematics, lam: complex) -> float:
    """Magnitude scale of Delta1's terms, for pole-condition thresholds."""
    _, _, scale = _delta_terms(params, kin, lam)
    return scale


def s_matrix(params: PotentialParams, E: complex, lam: complex,
             sheet: str = "physical") -> complex:
    """Exact S-matrix element S(E, lam) = -Delta2/Delta1.

    Raises AtPoleError when the evaluation point is within the at-pole
    threshold of a Regge pole (|Delta1| < 1e-8 x term scale).
    """
    kin = kinematics(params, E, sheet)
    d1, d2, scale = _delta_terms(params, kin, lam)
    if abs(d1) < AT_POLE_RTOL * scale:
        raise AtPoleError(
            f"S({E}, {lam}) within {AT_POLE_RTOL:g} of a pole: |Delta1|={abs(d1):.3e}, "
            f"scale={scale:.3e}")
    return -d2 / d1


def residue(params: PotentialParams, E: float, lambda_pole: complex) -> complex:
    """Residue rho of S(E, lam) at a simple Regge pole lambda_pole.

    rho = -Delta2(lam) / [dDelta1/dlam](lam), with the derivative from central
    differences (step 1e-5) plus one Richardson refinement.  Raises
    NotAPoleError if lambda_pole fails the pole condition, and
    DegeneratePoleError if the derivative underflows the simple-pole scale.
    """
    kin = kinematics(params, E, "physical")
    d1, d2, scale = _delta_terms(params, kin, lam=lambda_pole)
    if abs(d1) > 1e-7 * scale:
        raise NotAPoleError(
            f"lam={lambda_pole} at E={E}: |Delta1|={abs(d1):.3e} exceeds 1e-7 x scale={scale:.3e}")
    dd1 = _dlam_delta1(params, kin, lambda_pole)
    if abs(dd1) < DEGENERATE_RTOL * scale:
        raise DegeneratePoleError(
            f"lam={lambda_pole} at E={E}: |dDelta1/dlam|={abs(dd1):.3e} below degenerate "
            f"threshold for scale {scale:.3e}")
    return -d2 / dd1


def _dlam_delta1(params: PotentialParams, kin: ChannelKinematics, lam: complex,
                 step: float = RESIDUE_FD_STEP) -> complex:
    """dDelta1/dlam by central differences with one Richardson refinement."""

    def central(h: float) -> complex:
        fp = pole_function(params, kin, lam + h)
        fm = pole_function(params, kin, lam - h)
        return (fp - fm) / (2.0 * h)

    g1 = central(step)
    g2 = central(step / 2.0)
    return (4.0 * g2 - g1) / 3.0
