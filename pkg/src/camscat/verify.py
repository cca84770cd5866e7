"""Independent numerical oracles for the layered-sphere scattering pipeline.

The analytic code path (``cylinder`` -> ``model`` -> ``poles`` -> ``xsec``)
rests on a small number of nontrivial numerical ingredients: cylinder
functions of complex order, the S-matrix assembled from matching defects,
S-matrix residues at Regge poles, and the contour identity behind the
modified direct term.  Each ingredient is re-derived here by an unrelated
method so the two routes can be compared point by point:

* :func:`highprec_cylinder_oracle` -- arbitrary-precision ascending series
  for J_nu(z) (mpmath hypergeometric machinery), with the Hankel pair
  obtained from the order-reflection formulas.  Precision is escalated
  until two successive evaluations agree, so the result is certified
  rather than merely computed at a fixed working precision.
* :func:`s_matrix_ode_oracle` -- direct fixed-step fourth-order integration
  of the radial equation across the well, with the delta shell applied as
  an explicit derivative jump, matched to incoming/outgoing spherical
  waves at the shell radius.  No interior closed form is used.
* :func:`residue_contour_oracle` -- Cauchy integral (1/2*pi*i) oint S dlambda
  on a small circle around a Regge pole, by spectrally convergent
  trapezoid sums.
* :func:`deformed_contour_sigma1_oracle` -- the modified direct term
  evaluated on a literally deformed contour that passes above the supplied
  poles, validating the subtraction identity used by ``xsec``.

Every comparison is recorded as an :class:`OracleReport`;
:func:`verification_battery` runs a standard set over the reference
parameter sets and :func:`write_report` emits one report per line.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp
from scipy.integrate import quad

from .cylinder import hankel_pair
from .errors import (
    AccuracyLossError,
    DetourOverlapError,
    DomainError,
    EnclosureError,
    NoConvergenceError,
    QuadratureError,
)
from .model import PotentialParams, kinematics, s_matrix

__all__ = [
    "OracleReport",
    "relative_error",
    "compare",
    "highprec_cylinder_oracle",
    "highprec_bessel_j",
    "highprec_hankel",
    "s_matrix_ode_oracle",
    "s_matrix_ode_oracle_batch",
    "residue_contour_oracle",
    "deformed_contour_sigma1_oracle",
    "verification_battery",
    "write_report",
]

#: Floor used in relative-error denominators so that a zero oracle value
#: cannot produce a division by zero.
REL_ERROR_FLOOR = 1e-300

#: Step-halving agreement required of the ODE oracle.
ODE_CHECK_TOL = 1e-8

#: Default detour radius for the deformed contour (lambda-plane units).
DETOUR_RADIUS = 0.2

#: Poles whose real parts are closer than this share a merged detour.
DETOUR_GAP = 0.1


@dataclass(frozen=True)
class OracleReport:
    """Outcome of one main-path-versus-oracle comparison.

    Attributes
    ----------
    quantity : str
        Human-readable label of the compared quantity.
    main_value, oracle_value : complex
        The two independently computed values.
    rel_error : float
        ``|main - oracle| / max(|oracle|, 1e-300)``.
    tolerance : float
        Acceptance threshold for ``rel_error``.
    passed : bool
        Whether ``rel_error < tolerance``.
    """

    quantity: str
    main_value: complex
    oracle_value: complex
    rel_error: float
    tolerance: float
    passed: bool


def relative_error(main_value: complex, oracle_value: complex) -> float:
    """Relative difference with the oracle value as reference scale."""
    return abs(main_value - oracle_value) / max(abs(oracle_value), REL_ERROR_FLOOR)


def compare(quantity: str, main_value: complex, oracle_value: complex,
            tolerance: float) -> OracleReport:
    """Build an :class:`OracleReport` for one comparison."""
    rel = relative_error(main_value, oracle_value)
    return OracleReport(quantity=str(quantity), main_value=complex(main_value),
                        oracle_value=complex(oracle_value), rel_error=rel,
                        tolerance=float(tolerance), passed=rel < tolerance)


# ----------------------------------------------------------------------
# Arbitrary-precision cylinder oracle
# ----------------------------------------------------------------------

def _mp_cylinder(kind: int, nu, z):
    """J (kind 0) or a Hankel function (kind 1, 2) at the current precision.

    J comes from the arbitrary-precision ascending series; the Hankel
    functions are assembled from J at orders +-nu by the reflection
    formulas, which is why integer orders are excluded for kinds 1 and 2.
    """
    if kind == 0:
        return mp.besselj(nu, z)
    jp = mp.besselj(nu, z)
    jm = mp.besselj(-nu, z)
    s = mp.sin(nu * mp.pi)
    if kind == 1:
        return (jm - mp.exp(-1j * mp.pi * nu) * jp) / (1j * s)
    return (jm - mp.exp(1j * mp.pi * nu) * jp) / (-1j * s)


def highprec_cylinder_oracle(order: complex, arg: complex, digits: int,
                             kind: int = 0) -> complex:
    """Certified cylinder-function value from an escalating-precision series.

    The requested function (``kind`` 0 -> J, 1 -> H1, 2 -> H2) is evaluated
    with mpmath at a working precision of ``digits + 15`` decimal places and
    re-evaluated at geometrically increasing precision until two successive
    results agree to ``digits + 2`` figures.  Because the ascending series
    can lose a large, argument-dependent number of digits to cancellation
    (and the Hankel reflection can lose many more when J_nu and J_-nu are
    exponentially lopsided), a fixed working precision certifies nothing;
    the agreement of two independent precisions does.

    Parameters
    ----------
    order, arg : complex
        Order nu and argument z.  ``arg`` must stay off the negative real
        axis, where the principal branch is ambiguous.
    digits : int
        Number of certified significant digits, at least 30.
    kind : int, optional
        0 for J (default), 1 for H1, 2 for H2.

    Returns
    -------
    complex
        Value certified to roughly ``10**-(digits - 10)`` relative.

    Raises
    ------
    DomainError
        For digits < 30, an unknown kind, an integer order with a Hankel
        kind (the reflection path degenerates), or an argument on the
        negative real axis.
    """
    if digits < 30:
        raise DomainError(f"digits={digits}: certification needs at least 30")
    if kind not in (0, 1, 2):
        raise DomainError(f"kind={kind}: expected 0 (J), 1 (H1) or 2 (H2)")
    nu = complex(order)
    z = complex(arg)
    if z.real < 0.0 and abs(z.imag) <= 1e-12 * abs(z.real):
        raise DomainError(f"arg={z}: negative real axis is a branch cut")
    if kind != 0 and abs(nu.imag) < 1e-12 and abs(nu.real - round(nu.real)) < 1e-12:
        raise DomainError(
            f"order={nu}: reflection formula degenerates at integer order")

    dps = digits + 15
    prev = None
    for _ in range(12):
        with mp.workdps(int(dps)):
            val = _mp_cylinder(kind, mp.mpmathify(nu), mp.mpmathify(z))
            val = mp.mpc(val)
            if prev is not None:
                diff = abs(val - prev)
                if diff <= mp.mpf(10) ** (-(digits + 2)) * max(abs(val), mp.mpf(REL_ERROR_FLOOR)):
                    return complex(val)
        prev = val
        dps = int(dps * 1.7) + 10
    raise NoConvergenceError(
        f"cylinder oracle did not stabilize for order={nu}, arg={z}")


def highprec_bessel_j(order: complex, arg: complex, digits: int = 50) -> complex:
    """J_order(arg) certified to ``digits`` figures (see the main oracle)."""
    return highprec_cylinder_oracle(order, arg, digits, kind=0)


def highprec_hankel(kind: int, order: complex, arg: complex,
                    digits: int = 50) -> complex:
    """H1/H2 of non-integer order certified to ``digits`` figures."""
    if kind not in (1, 2):
        raise DomainError(f"kind={kind}: expected 1 or 2")
    return highprec_cylinder_oracle(order, arg, digits, kind=kind)


# ----------------------------------------------------------------------
# Radial-ODE S-matrix oracle
# ----------------------------------------------------------------------

def _rk4_logderiv(params: PotentialParams, E: np.ndarray, lam: np.ndarray,
                  n_steps: int) -> np.ndarray:
    """Log-derivative u'(R+)/u(R) of the regular interior solution.

    Integrates u'' = [(lam^2 - 1/4)/r^2 - q^2] u from the hard core at
    r = R - d (u = 0, u' = 1) to the shell at r = R with classical
    fixed-step fourth-order Runge-Kutta, then applies the delta-shell
    derivative jump u' += 2*Omega*u.  All points in the (E, lam) batch
    share the radial grid, so the stepping is vectorized.
    """
    c = params.core_radius
    h = (params.R - c) / n_steps
    q2 = 2.0 * np.asarray(E, dtype=float) + 2.0 * params.V
    a = np.asarray(lam, dtype=complex) ** 2 - 0.25
    u = np.zeros_like(q2 + a)
    v = np.ones_like(u)
    for i in range(n_steps):
        r0 = c + i * h
        w0 = a / (r0 * r0) - q2
        rh = r0 + 0.5 * h
        wh = a / (rh * rh) - q2
        r1 = r0 + h
        w1 = a / (r1 * r1) - q2
        k1u = v
        k1v = w0 * u
        k2u = v + 0.5 * h * k1v
        k2v = wh * (u + 0.5 * h * k1u)
        k3u = v + 0.5 * h * k2v
        k3v = wh * (u + 0.5 * h * k2u)
        k4u = v + h * k3v
        k4v = w1 * (u + h * k3u)
        u = u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    v = v + 2.0 * params.Omega * u
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise AccuracyLossError("interior integration overflowed")
    if np.any(np.abs(u) < 1e-12 * np.abs(v) * params.R):
        raise AccuracyLossError("wavefunction node at the matching radius")
    return v / u


def _match_exterior(params: PotentialParams, E: float, lam: float,
                    logderiv: float) -> complex:
    """Solve for S from u, u' continuity against sqrt(pi k r/2)[H2 + S H1].

    Because value and derivative are matched (not a log-derivative
    difference), the sqrt(r) prefactor contributes 1/(2R) and must be
    kept: with M = u'/u - 1/(2R),

        S = -[k H2'(kR) - M H2(kR)] / [k H1'(kR) - M H1(kR)].
    """
    k = math.sqrt(2.0 * E)
    h1, h2 = hankel_pair(complex(lam), complex(k * params.R))
    m = logderiv - 0.5 / params.R
    num = k * h2.deriv_arg - m * h2.value
    den = k * h1.deriv_arg - m * h1.value
    return -num / den


def s_matrix_ode_oracle_batch(params: PotentialParams, E_points, lam_points,
                              n_steps: int = 20000,
                              check: bool = True) -> np.ndarray:
    """Vectorized ODE oracle over paired (E, lambda) points.

    Same contract as :func:`s_matrix_ode_oracle`; one shared radial grid
    makes a 20-point batch barely slower than a single point.
    """
    E = np.asarray(E_points, dtype=float)
    lam = np.asarray(lam_points, dtype=complex)
    if E.shape != lam.shape:
        raise DomainError("E_points and lam_points must have matching shapes")
    if np.any(E <= 0.0):
        raise DomainError("ODE oracle requires real E > 0")
    ld = _rk4_logderiv(params, E, lam, n_steps)
    s = np.array([_match_exterior(params, e, l, d)
                  for e, l, d in zip(E.ravel(), lam.ravel(), ld.ravel())])
    s = s.reshape(E.shape)
    if check:
        ld2 = _rk4_logderiv(params, E, lam, 2 * n_steps)
        s2 = np.array([_match_exterior(params, e, l, d)
                       for e, l, d in zip(E.ravel(), lam.ravel(), ld2.ravel())])
        s2 = s2.reshape(E.shape)
        worst = float(np.max(np.abs(s2 - s)))
        if worst > ODE_CHECK_TOL:
            raise NoConvergenceError(
                f"step halving moved S by {worst:.3e} (> {ODE_CHECK_TOL:.1e})")
        return s2
    return s


def s_matrix_ode_oracle(params: PotentialParams, E: float, lam: float,
                        n_steps: int = 20000, check: bool = True) -> complex:
    """S(k, lambda) from direct integration of the radial equation.

    The radial equation u'' = [(lam^2 - 1/4)/r^2 - k^2 - 2V] u is
    integrated across the well from the hard core (where the regular
    solution vanishes) to the shell radius with a fixed-step fourth-order
    scheme, the delta shell enters as an explicit derivative jump
    u' += 2*Omega*u at r = R, and S follows from matching value and
    derivative to the exterior combination sqrt(pi k r / 2)[H2 + S H1].
    Nothing is shared with the closed-form route in ``model`` except the
    exterior Hankel factors, which are validated independently against
    :func:`highprec_cylinder_oracle`.

    Parameters
    ----------
    params : PotentialParams
        Potential layout.
    E : float
        Scattering energy, E > 0.
    lam : float
        Real angular-momentum variable lambda = J + 1/2.
    n_steps : int, optional
        Radial steps across the well; the default honors a step bound of
        (well width)/20000.
    check : bool, optional
        When true (default), re-integrate with the step halved and demand
        agreement to 1e-8; the halved-step value is returned.

    Returns
    -------
    complex
        The oracle S-matrix value.

    Raises
    ------
    NoConvergenceError
        If halving the step moves S by more than 1e-8.
    DomainError
        For E <= 0.
    """
    return complex(s_matrix_ode_oracle_batch(
        params, [float(E)], [float(lam)], n_steps=n_steps, check=check)[0])


# ----------------------------------------------------------------------
# Contour-integral residue oracle
# ----------------------------------------------------------------------

def _circle_integral(params: PotentialParams, E: float, center: complex,
                     radius: float) -> complex:
    """(1/2*pi*i) oint S dlambda on a circle, by trapezoid point-doubling.

    For an integrand analytic in a neighborhood of the circle the
    periodic trapezoid rule converges geometrically, so doubling the
    point count until successive sums agree certifies the result.
    """
    m = 16
    prev = None
    while m <= 8192:
        theta = 2.0 * np.pi * np.arange(m) / m
        phase = np.exp(1j * theta)
        vals = np.array([s_matrix(params, E, center + radius * ph)
                         for ph in phase])
        total = (radius / m) * np.sum(vals * phase)
        if prev is not None:
            scale = max(abs(total), 5e-4 * radius * float(np.max(np.abs(vals))), 1e-8)
            if abs(total - prev) <= 1e-10 * scale:
                return total
        prev = total
        m *= 2
    raise QuadratureError("trapezoid refinement on the residue circle "
                          "did not stabilize")


def residue_contour_oracle(params: PotentialParams, E: float,
                           lambda_pole: complex, radius: float = 1e-3) -> complex:
    """Residue of S at a Regge pole from a Cauchy contour integral.

    Evaluates (1/2*pi*i) oint S(k, lambda) dlambda on a circle of the
    given radius around ``lambda_pole`` by trapezoid sums with point
    doubling, then repeats on the half radius.  Agreement of the two
    radii certifies that exactly the intended singularity is enclosed
    (any extra or straddled singularity breaks the radius independence).

    Parameters
    ----------
    params : PotentialParams
        Potential layout.
    E : float
        Real energy at which the pole lives.
    lambda_pole : complex
        Pole position; the circle must enclose this pole and nothing else.
    radius : float, optional
        Contour radius, default 1e-3.

    Returns
    -------
    complex
        The contour value of the residue.

    Raises
    ------
    EnclosureError
        If halving the radius moves the result, i.e. the circle does not
        cleanly enclose a single pole.
    """
    if radius <= 0.0:
        raise DomainError(f"radius={radius}: must be positive")
    full = _circle_integral(params, E, complex(lambda_pole), radius)
    half = _circle_integral(params, E, complex(lambda_pole), 0.5 * radius)
    if abs(full - half) > max(1e-9 * abs(full), 1e-12):
        raise EnclosureError(
            f"contour unstable under radius halving at lambda={lambda_pole}: "
            f"{full} vs {half}")
    return full


# ----------------------------------------------------------------------
# Deformed-contour direct term
# ----------------------------------------------------------------------

def _merged_detours(poles, base_radius: float):
    """Real-axis intervals [a, b] of merged semicircular detours.

    Each pole asks for a detour wide enough that the semicircle passes
    above it (radius at least 1.4x its height); overlapping or nearly
    touching intervals are merged, and merged arcs are re-checked so
    every member pole stays strictly below the arc.
    """
    radii = {}
    for p in poles:
        radii[p] = max(base_radius, 1.4 * p.imag)
    for _ in range(10):
        items = sorted(poles, key=lambda p: p.real)
        groups = []
        for p in items:
            a, b = p.real - radii[p], p.real + radii[p]
            if groups and a <= groups[-1][1] + DETOUR_GAP:
                groups[-1][1] = max(groups[-1][1], b)
                groups[-1][2].append(p)
            else:
                groups.append([a, b, [p]])
        bad = None
        for a, b, members in groups:
            mid, rad = 0.5 * (a + b), 0.5 * (b - a)
            for p in members:
                height = rad * rad - (p.real - mid) ** 2
                if height <= 0.0 or p.imag >= 0.95 * math.sqrt(height):
                    bad = p
                    break
            if bad is not None:
                break
        if bad is None:
            return [(a, b) for a, b, _ in groups]
        radii[bad] *= 1.3
    raise DetourOverlapError("could not build detours clearing all poles")


def deformed_contour_sigma1_oracle(params: PotentialParams, E: float, poles,
                                   detour_radius: float = DETOUR_RADIUS) -> float:
    """Modified direct term from an explicitly deformed contour.

    Integrates 4*pi*k^-2 * (1 - S(k, lambda)) * lambda along a contour
    that runs up the real axis from 0 and takes semicircular detours
    above each supplied Regge pole, taking the real part of the
    analytically continued total.  By the residue theorem this equals
    the straight-axis direct term minus the n = 0 rotation term of every
    detoured pole, which is exactly how ``xsec`` builds the modified
    decomposition -- so agreement validates that identity.

    Parameters
    ----------
    params : PotentialParams
        Potential layout.
    E : float
        Scattering energy, E > 0.
    poles : iterable of complex or ReggePole
        Poles to pass above.  Duck-typed: anything with a ``lam``
        attribute or complex value works.
    detour_radius : float, optional
        Minimum semicircle radius (default 0.2); individual detours grow
        as needed to clear deep poles, and nearby detours merge.

    Returns
    -------
    float
        The deformed-contour value of the modified direct term.

    Raises
    ------
    DetourOverlapError
        If no merged system of semicircles clears all poles.
    QuadratureError
        If the arc quadrature fails its two-rule agreement check.
    DomainError
        If a detour would reach the contour start at the origin.
    """
    from .xsec import lambda_max

    kin = kinematics(params, float(E))
    k = kin.k.real
    top = lambda_max(k, params.R)

    pts = [complex(getattr(p, "lam", p)) for p in poles]
    pts = [p for p in pts if 0.0 < p.real < top]

    def g(lam: complex) -> complex:
        return (1.0 - s_matrix(params, float(E), lam)) * lam

    pref = 4.0 * math.pi / (k * k)
    if not pts:
        val, _ = quad(lambda x: (g(x)).real, 0.0, top,
                      epsabs=1e-10, epsrel=1e-10, limit=400)
        return pref * val

    intervals = _merged_detours(pts, detour_radius)
    if intervals[0][0] <= 0.0:
        raise DomainError("detour reaches the contour start at lambda = 0")
    end = max(top, intervals[-1][1] + 1.0)

    total = 0.0 + 0.0j
    cursor = 0.0
    nodes96 = np.polynomial.legendre.leggauss(96)
    nodes128 = np.polynomial.legendre.leggauss(128)
    for a, b in intervals:
        seg, _ = quad(lambda x: (g(x)).real, cursor, a,
                      epsabs=1e-10, epsrel=1e-10, limit=400)
        total += seg
        arc96 = _arc_integral(g, a, b, nodes96)
        arc128 = _arc_integral(g, a, b, nodes128)
        if abs(arc128 - arc96) > 1e-9 * max(1.0, abs(arc128)):
            raise QuadratureError(
                f"arc over [{a:.4g}, {b:.4g}] failed the 96/128-node check")
        total += arc128
        cursor = b
    seg, _ = quad(lambda x: (g(x)).real, cursor, end,
                  epsabs=1e-10, epsrel=1e-10, limit=400)
    total += seg
    return pref * total.real


def _arc_integral(g, a: float, b: float, nodes) -> complex:
    """Integral of g along the upper semicircle from a to b (Gauss-Legendre)."""
    x, wts = nodes
    mid, rad = 0.5 * (a + b), 0.5 * (b - a)
    # theta runs pi -> 0; substitute theta = pi/2*(1 - x) so x in [-1, 1].
    theta = 0.5 * math.pi * (1.0 - x)
    z = mid + rad * np.exp(1j * theta)
    dz = rad * 1j * np.exp(1j * theta) * (-0.5 * math.pi)
    vals = np.array([g(zz) for zz in z])
    return complex(np.sum(wts * vals * dz))


# ----------------------------------------------------------------------
# Report plumbing
# ----------------------------------------------------------------------

def write_report(reports, path: str) -> None:
    """Write a verification report as CSV, one OracleReport per line."""
    lines = ["quantity,main_re,main_im,oracle_re,oracle_im,rel_error,tolerance,passed"]
    for r in reports:
        lines.append(",".join([
            r.quantity.replace(",", ";"),
            f"{r.main_value.real:.15g}", f"{r.main_value.imag:.15g}",
            f"{r.oracle_value.real:.15g}", f"{r.oracle_value.imag:.15g}",
            f"{r.rel_error:.15g}", f"{r.tolerance:.15g}",
            "1" if r.passed else "0",
        ]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def verification_battery(rng_seed: int = 71) -> list:
    """Standard oracle sweep over the two reference parameter sets.

    Covers the cylinder fast path against the certified series, the
    closed-form S-matrix against the ODE oracle, pole residues against
    the contour oracle, and the identity-based modified direct term
    against the literally deformed contour.  Returns the collected
    :class:`OracleReport` list (the CLI writes it out with
    :func:`write_report`).
    """
    from . import poles as poles_mod
    from . import xsec as xsec_mod
    from .cylinder import bessel_j, hankel

    rng = np.random.default_rng(rng_seed)
    reports = []

    for i in range(8):
        nu = complex(rng.uniform(-40, 40), rng.uniform(-15, 15))
        z = complex(rng.uniform(0.3, 55), rng.uniform(-40, 40))
        reports.append(compare(f"J({nu:.3f},{z:.3f})",
                               bessel_j(nu, z),
                               highprec_bessel_j(nu, z, 40), 1e-10))
        kind = 1 + int(rng.integers(0, 2))
        reports.append(compare(f"H{kind}({nu:.3f},{z:.3f})",
                               hankel(kind, nu, z).value,
                               highprec_hankel(kind, nu, z, 40), 1e-10))

    for tag, omega in (("well", 0.5), ("shell", 32.5)):
        params = PotentialParams(V=165.0, R=1.0, d=0.29, Omega=omega)
        for E, lam in ((2.0, 0.5), (8.0, 3.5), (20.0, 10.0)):
            reports.append(compare(
                f"S[{tag}](E={E},lam={lam})",
                s_matrix(params, E, lam),
                s_matrix_ode_oracle(params, E, lam), 1e-8))

    params = PotentialParams(V=165.0, R=1.0, d=0.29, Omega=32.5)
    cls = poles_mod.classify_trajectory(params)
    E_lo = cls.E0 + 1.0
    pole = poles_mod.find_regge_pole(
        params, E_lo,
        poles_mod.lambda_estimate(params, E_lo, complex(cls.E0, -cls.gamma)))
    reports.append(compare(
        f"residue(E={E_lo:.4g})", pole.residue,
        residue_contour_oracle(params, E_lo, pole.lam), 1e-8))

    # higher up the trajectory the poles sit close enough to the real axis
    # for the detours of the literally deformed contour to clear the origin
    E_bg = cls.E0 + 2.0 * (cls.E0 + cls.gamma)
    rel = xsec_mod.relevant_poles(params, E_bg)
    s1 = xsec_mod.sigma1(params, E_bg, poles=rel)
    s1_mod = s1 - sum(xsec_mod.sigma_res_n(math.sqrt(2 * E_bg), p, 0) for p in rel)
    reports.append(compare(
        f"sigma1_mod(E={E_bg:.4g})", s1_mod,
        deformed_contour_sigma1_oracle(params, E_bg, [p.lam for p in rel]),
        1e-6))
    return reports
