"""Integral cross sections and their Mulholland decompositions.

The optical theorem expresses the integral cross section through the forward
scattering amplitude, which in partial waves reads

    sigma(E) = (2 pi / k^2) Sum_J (2J+1) Re[1 - S(k, J+1/2)].

Applying the Poisson sum formula to the partial-wave sum and deforming the
resulting contours turns the sum into a smooth background integral along the
real angular-momentum axis, residue contributions of the Regge poles of
S(k, lambda) in the first quadrant, and a remainder along the imaginary axis:

    sigma = sigma1 + sigma_res + sigma2,

    sigma1    = 4 pi k^-2 Int_0^inf Re[1 - S(k, lambda)] lambda dlambda,
    sigma_res = -8 pi^2 k^-2 Im Sum_poles lam~ rho / (1 + exp(-2 pi i lam~)),
    sigma2    = -8 pi k^-2 Re Int_0^{i inf}
                    [1 - (S(k, lambda) + S(k, -lambda))/2]
                    / (1 + exp(-2 pi i lambda)) lambda dlambda.

The residue factor 2 pi i is what promotes sigma_res's prefactor to 8 pi^2;
the axis remainder keeps the bare 8 pi of the folded m-sum, as the closure
against the partial-wave total confirms to a few parts in 1e8.

where lam~ is a Regge pole position and rho the residue of S there.
Expanding the resonance denominator in powers of exp(2 pi i lam~) resolves
sigma_res into per-rotation terms

    sigma_res^(n) = 8 pi^2 k^-2 Im{lam~ rho exp[i n pi (2 lam~ + 1)]},

the contribution of a creeping wave that has orbited the core n times, each
damped by exp(-2 pi n Im lam~).  The plain decomposition keeps only n >= 1
in sigma_res and buries the n = 0 orbit inside sigma1, which therefore
retains resonance structure.  Letting the background contour pass above the
poles moves the n = 0 term where it belongs:

    sigma  = sigma1' + sigma_res' + sigma2,
    sigma1'    = sigma1 - Sum_poles sigma_res^(0),
    sigma_res' = +8 pi^2 k^-2 Im Sum_poles lam~ rho / (1 + exp(2 pi i lam~)),

leaving a direct part that stays smooth through a resonance and tracks the
cross section of an impenetrable sphere of the outer radius.

All resonance sums are evaluated through x = exp(2 pi i lam~), which has
|x| < 1 for every admissible pole, so no exponential ever overflows and the
identity sigma_res' - sigma_res = Sum sigma_res^(0) holds to rounding.

Units: hbar = m = 1; cross sections carry length^2, energies are 2E = k^2.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

from scipy.integrate import quad

from .cylinder import hankel_pair
from .errors import (
    AccuracyLossError,
    AtPoleError,
    BoundaryZeroError,
    DivergentPoleError,
    DomainError,
    QuadratureError,
    SolverError,
    TailTruncationWarning,
)
from .model import PotentialParams, ReggePole, s_matrix
from .poles import find_regge_pole, region_winding, scan_poles

#: Partial-wave truncation: |1 - S| must stay below this tolerance ...
TAIL_TOL = 1e-12
#: ... for this many consecutive partial waves.
TAIL_RUN = 5
#: Largest usable order, just inside the cylinder-function domain box.
ORDER_CAP = 49.5
#: Imaginary-axis truncation height for sigma2; the integrand decays like
#: t exp(-pi t) (|S(k, it)| = exp(-pi t) exactly), so the tail beyond 9 is
#: below 1e-11 of the integral.
SIGMA2_TMAX = 9.0
#: Absolute/relative tolerance passed to the adaptive quadratures.
QUAD_EPS = 1e-10
#: Subdivision limit for the adaptive quadratures.
QUAD_LIMIT = 400
#: Poles closer to the real axis than this get forced sigma1 breakpoints.
BREAK_IM_MAX = 0.5
#: Breakpoints are placed this many half-widths either side of Re lam~.
BREAK_HALF_WIDTHS = 3.0
#: Poles above this height contribute below ~exp(-2 pi * 3) and are ignored.
IM_CUTOFF = 3.0
#: Poles within this band of the real axis are numerically real: the width
#: is at the level of the position noise of the Newton solve, so the sign of
#: Im lam~ carries no information there.
POLE_IM_FLOOR = 1e-9
#: Numerically real poles are clamped to this height just above the axis,
#: keeping every x = exp(2 pi i lam~) strictly inside the unit disk and the
#: sigma1 subtraction logarithms on the correct branch.
AXIS_IM = 1e-30
#: Poles below this height get their pole term subtracted analytically in
#: sigma1: the resonance peak (width ~ Im lam~, height ~ |rho|/Im lam~) is
#: then narrower than adaptive subdivision can resolve without stepping
#: into the at-pole refusal band of the S-matrix.
SUBTRACT_IM = 1e-4
#: Dodge applied when a quadrature node lands inside that refusal band
#: (|Delta1| under 1e-8 of scale, i.e. within ~1e-8 of the pole); the
#: subtracted integrand varies by O(shift) across it.
ATPOLE_SHIFT = 2e-7
#: Pole-scan window edges relative to the physical region.
SCAN_RE_LO = -0.25
SCAN_IM_LO = -0.05
SCAN_RE_MARGIN = 2.0
#: Outward nudge applied to the scan window when a zero sits on its edge.
SCAN_NUDGE = 0.03


def lambda_max(k: float, R: float) -> float:
    """Angular momentum beyond which |1 - S| is negligible.

    Partial waves with lambda well above k*R cannot reach the potential;
    the cube-root term covers the diffraction-dominated transition region.
    """
    kr = k * R
    return kr + 10.0 + 5.0 * kr ** (1.0 / 3.0)


def _tail_sum(term_at, tail_tol: float, what: str) -> float:
    """Sum lam * Re[1 - S] over half-integer orders with a run-based tail cut."""
    total = 0.0
    run = 0
    lam = 0.5
    while lam <= ORDER_CAP:
        one_minus_s = term_at(lam)
        total += lam * one_minus_s.real
        run = run + 1 if abs(one_minus_s) < tail_tol else 0
        if run >= TAIL_RUN:
            return total
        lam += 1.0
    raise AccuracyLossError(
        f"{what}: partial-wave tail not below {tail_tol} within the order box")


def sigma_total_pw(params: PotentialParams, E: float, tail_tol: float = TAIL_TOL) -> float:
    """Integral cross section by the optical-theorem partial-wave sum.

    Parameters
    ----------
    params : PotentialParams
    E : float
        Collision energy, E > 0.
    tail_tol : float
        The sum stops once |1 - S| has stayed below this for five
        consecutive partial waves.
    """
    if E <= 0:
        raise DomainError(f"sigma_total_pw needs E > 0, got {E}")
    k = math.sqrt(2.0 * E)

    def term(lam: float) -> complex:
        return 1.0 - s_matrix(params, E, lam)

    return 4.0 * math.pi / k**2 * _tail_sum(term, tail_tol, "sigma_total_pw")


def sigma_hard_sphere(k: float, R: float, tail_tol: float = TAIL_TOL) -> float:
    """Cross section of an impenetrable sphere of radius R at wavenumber k.

    The hard sphere replaces the matching condition by a node at R, so
    S = -H2(kR)/H1(kR) directly; this is the direct-scattering reference the
    modified decomposition's smooth part is compared against.
    """
    if k <= 0:
        raise DomainError(f"sigma_hard_sphere needs k > 0, got {k}")

    def term(lam: float) -> complex:
        h1, h2 = hankel_pair(lam, k * R)
        return 1.0 + h2.value / h1.value

    return 4.0 * math.pi / k**2 * _tail_sum(term, tail_tol, "sigma_hard_sphere")


def _background_cap(params: PotentialParams, E: float) -> float:
    """Upper integration limit for sigma1, doubled until the tail is dead."""
    k = math.sqrt(2.0 * E)
    cap = min(lambda_max(k, params.R), ORDER_CAP)
    while abs(1.0 - s_matrix(params, E, cap)) >= TAIL_TOL:
        cap *= 2.0
        if cap > ORDER_CAP:
            warnings.warn(
                f"sigma1 tail at lambda = {ORDER_CAP} still above {TAIL_TOL}",
                TailTruncationWarning, stacklevel=3)
            return ORDER_CAP
    return cap


def sigma1(params: PotentialParams, E: float, poles: tuple = ()) -> float:
    """Background (impact-parameter) part of the Mulholland decomposition.

    Evaluates 4 pi k^-2 Int_0^cap Re[1 - S(k, lambda)] lambda dlambda by
    adaptive quadrature.  Poles supplied in `poles` shape the treatment of
    their resonance peaks: heights Im lam~ in [1e-4, 0.5) pin breakpoints
    at Re lam~ +- 3 Im lam~, where the integrand develops structure the
    subdivision would otherwise have to discover, while poles under 1e-4
    (numerically real, peak width below what subdivision can resolve) have
    rho / (lambda - lam~) subtracted from S and added back in closed form,

        Int_0^cap lambda rho / (lambda - lam~) dlambda
            = rho [cap + lam~ (Ln(cap - lam~) - Ln(-lam~))],

    the principal logarithms being continuous along the path because
    Im(lambda - lam~) keeps one sign on the whole real segment.

    Parameters
    ----------
    params : PotentialParams
    E : float
        Collision energy, E > 0.
    poles : tuple of ReggePole
        Known poles at this energy with Im lam~ > 0; used to seed
        breakpoints and the near-axis subtraction.
    """
    if E <= 0:
        raise DomainError(f"sigma1 needs E > 0, got {E}")
    k = math.sqrt(2.0 * E)
    cap = _background_cap(params, E)
    breaks = set()
    near = []
    for pole in poles:
        lam = complex(pole.lam)
        if not 1e-9 < lam.real < cap - 1e-9:
            continue
        if lam.imag < SUBTRACT_IM:
            near.append((lam, complex(pole.residue)))
            breaks.add(lam.real)
        elif lam.imag < BREAK_IM_MAX:
            for side in (-1.0, 1.0):
                x = lam.real + side * BREAK_HALF_WIDTHS * lam.imag
                if 1e-9 < x < cap - 1e-9:
                    breaks.add(x)

    def smoothed(x: float) -> float:
        value = x * (1.0 - s_matrix(params, E, x)).real
        for lam, rho in near:
            value += x * (rho / (x - lam)).real
        return value

    def integrand(x: float) -> float:
        try:
            return smoothed(x)
        except AtPoleError:
            return smoothed(x + ATPOLE_SHIFT)

    val, abserr = quad(integrand, 0.0, cap, points=sorted(breaks) or None,
                       epsabs=QUAD_EPS, epsrel=QUAD_EPS, limit=QUAD_LIMIT)
    if abserr > 1e-6 * max(1.0, abs(val)):
        raise QuadratureError(
            f"sigma1 quadrature achieved {val} +- {abserr} at E={E}")
    for lam, rho in near:
        val -= (rho * (cap + lam * (cmath.log(cap - lam) - cmath.log(-lam)))).real
    return 4.0 * math.pi / k**2 * val


def sigma_res_n(k: float, pole: ReggePole, n: int) -> float:
    """Contribution of a creeping wave after n orbits around the core.

    Returns 8 pi^2 k^-2 Im{lam~ rho exp[i n pi (2 lam~ + 1)]}; successive
    terms shrink in modulus by exactly exp(-2 pi Im lam~).
    """
    if n < 0 or n != int(n):
        raise DomainError(f"rotation count must be a non-negative integer, got {n}")
    lam = complex(pole.lam)
    rho = complex(pole.residue)
    phase = cmath.exp(1j * n * math.pi * (2.0 * lam + 1.0))
    return 8.0 * math.pi**2 / k**2 * (lam * rho * phase).imag


def _pole_x(pole: ReggePole) -> complex:
    lam = complex(pole.lam)
    if lam.imag <= 0.0:
        raise DivergentPoleError(
            f"resonance sum diverges for Im lam~ <= 0 (pole at {lam})")
    return cmath.exp(2j * math.pi * lam)


def sigma_res(k: float, poles: tuple) -> float:
    """Resonance part of the plain Mulholland decomposition (orbits n >= 1).

    Closed form of the geometric series Sum_{n>=1} sigma_res^(n); requires
    Im lam~ > 0 for every supplied pole.
    """
    total = 0.0
    for pole in poles:
        x = _pole_x(pole)
        lam = complex(pole.lam)
        rho = complex(pole.residue)
        total -= (lam * rho * x / (1.0 + x)).imag
    return 8.0 * math.pi**2 / k**2 * total


def _sigma_res_mod(k: float, poles: tuple) -> float:
    """Resonance part of the modified decomposition (orbits n >= 0)."""
    total = 0.0
    for pole in poles:
        x = _pole_x(pole)
        lam = complex(pole.lam)
        rho = complex(pole.residue)
        total += (lam * rho / (1.0 + x)).imag
    return 8.0 * math.pi**2 / k**2 * total


def sigma2(params: PotentialParams, E: float, t_max: float = SIGMA2_TMAX) -> float:
    """Imaginary-axis remainder of the Mulholland decomposition.

    With lambda = it the contour integral becomes real:

        sigma2 = 8 pi k^-2 Int_0^t_max [ t/(1 + exp(2 pi t))
                                         - t Re S(k, it)/2 ] dt,

    using S(k, -it) = exp(2 pi t) S(k, it) to fold the symmetrized S onto
    the positive imaginary axis.  |S(k, it)| = exp(-pi t) exactly, so the
    integrand dies like t exp(-pi t) and the default truncation height
    leaves a tail below 1e-11 of the total.
    """
    if E <= 0:
        raise DomainError(f"sigma2 needs E > 0, got {E}")
    if t_max <= 0:
        raise DomainError(f"sigma2 needs t_max > 0, got {t_max}")
    k = math.sqrt(2.0 * E)

    def integrand(t: float) -> float:
        s_it = s_matrix(params, E, complex(0.0, t))
        return t / (1.0 + math.exp(2.0 * math.pi * t)) - 0.5 * t * s_it.real

    val, abserr = quad(integrand, 0.0, t_max,
                       epsabs=1e-13, epsrel=QUAD_EPS, limit=QUAD_LIMIT)
    if abserr > 1e-6 * max(abs(val), 1e-4):
        raise QuadratureError(
            f"sigma2 quadrature achieved {val} +- {abserr} at E={E}")
    return 8.0 * math.pi / k**2 * val


def _scan_region(params: PotentialParams, E: float, im_cutoff: float) -> tuple:
    k = math.sqrt(2.0 * E)
    hi = min(lambda_max(k, params.R) + SCAN_RE_MARGIN, ORDER_CAP)
    return (SCAN_RE_LO, hi, SCAN_IM_LO, im_cutoff)


def _axis_clamped(pole: ReggePole) -> ReggePole:
    """Lift a numerically real pole just above the axis (noise-sign fix)."""
    if pole.lam.imag > POLE_IM_FLOOR:
        return pole
    lam = complex(pole.lam.real, max(pole.lam.imag, AXIS_IM))
    return ReggePole(E=pole.E, lam=lam, residue=pole.residue)


def _admissible(poles, region) -> tuple:
    lo, hi, bottom, top = region
    return tuple(_axis_clamped(p) for p in poles
                 if p.lam.real > 0.0 and -POLE_IM_FLOOR < p.lam.imag < top
                 and p.lam.real < hi)


def _inside(lam: complex, region) -> bool:
    lo, hi, bottom, top = region
    return lo < lam.real < hi and bottom < lam.imag < top


def relevant_poles(params: PotentialParams, E: float, im_cutoff: float = IM_CUTOFF,
                   warm_start: tuple = ()) -> tuple:
    """All Regge poles that matter for the decomposition at energy E.

    Scans the first-quadrant window Re lam~ in (0, lambda_max + 2),
    Im lam~ in (0, im_cutoff); higher poles contribute below
    exp(-2 pi im_cutoff) relatively.  Numerically real poles (width under
    the position noise of the solve) are kept, clamped just above the
    axis: their resonance-sum terms are finite and tiny, but sigma1 must
    know where they sit to subtract the sharp peaks they put on its path.

    Parameters
    ----------
    warm_start : tuple of ReggePole
        Poles found at a nearby energy.  Each is re-converged at E and the
        count is checked against one boundary winding integral; any
        mismatch or solver failure falls back to a full subdivision scan.
    """
    if E <= 0:
        raise DomainError(f"relevant_poles needs E > 0, got {E}")
    region = _scan_region(params, E, im_cutoff)
    if warm_start:
        try:
            moved = []
            for old in warm_start:
                cand = find_regge_pole(params, E, old.lam)
                if all(abs(cand.lam - q.lam) > 1e-6 for q in moved):
                    moved.append(cand)
            in_region = [p for p in moved if _inside(p.lam, region)]
            if region_winding(params, E, region) == len(in_region):
                return _admissible(in_region, region)
        except (SolverError, BoundaryZeroError):
            pass
    last = None
    for attempt in range(4):
        lo, hi, bottom, top = region
        grown = (lo - attempt * SCAN_NUDGE, hi + attempt * SCAN_NUDGE,
                 bottom - attempt * SCAN_NUDGE, top + attempt * SCAN_NUDGE)
        try:
            return _admissible(scan_poles(params, E, grown), grown)
        except BoundaryZeroError as exc:
            last = exc
    raise last


@dataclass(frozen=True)
class MulhollandDecomposition:
    """Cross section split into direct, resonance, and imaginary-axis parts.

    Carries both the plain split (sigma1, sigma_res) and the modified one
    (sigma1_mod, sigma_res_mod) that reassigns the zero-orbit creeping-wave
    term to the resonance part.  `per_n` holds the first per-rotation terms
    summed over poles, as (n, value) pairs.  `closure_defect` is recomputed
    on construction and measures sigma_total - (sigma1 + sigma_res +
    sigma2); it is the end-to-end consistency check of the decomposition.
    """

    E: float
    sigma_total: float
    sigma1: float
    sigma_res: float
    sigma2: float
    sigma1_mod: float
    sigma_res_mod: float
    per_n: tuple
    closure_defect: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "per_n",
                           tuple((int(n), float(v)) for n, v in self.per_n))
        parts = (self.sigma_total, self.sigma1, self.sigma_res, self.sigma2,
                 self.sigma1_mod, self.sigma_res_mod)
        if not all(math.isfinite(v) for v in parts + tuple(v for _, v in self.per_n)):
            raise DomainError("non-finite cross-section component")
        if self.sigma_total < 0.0:
            raise DomainError(f"negative total cross section {self.sigma_total}")
        plain = self.sigma1 + self.sigma_res
        if abs((self.sigma1_mod + self.sigma_res_mod) - plain) > 1e-12 * max(1.0, abs(plain)):
            raise DomainError("modified split is not a rearrangement of the plain one")
        object.__setattr__(self, "closure_defect",
                           self.sigma_total - (self.sigma1 + self.sigma_res + self.sigma2))


def modified_decomposition(params: PotentialParams, E: float,
                           poles: tuple) -> MulhollandDecomposition:
    """Full Mulholland record at one energy for a supplied pole set.

    The caller provides the poles (see `relevant_poles`); every component is
    evaluated independently, so the record's closure defect is a genuine
    consistency measure rather than a bookkeeping identity.
    """
    poles = tuple(poles)
    if not (E > 0.0):
        raise DomainError(f"decomposition needs E > 0 on the physical axis, got {E}")
    k = math.sqrt(2.0 * E)
    total = sigma_total_pw(params, E)
    s1 = sigma1(params, E, poles)
    sres = sigma_res(k, poles)
    s2 = sigma2(params, E)
    per_n = tuple((n, sum(sigma_res_n(k, p, n) for p in poles)) for n in (0, 1, 2))
    sr0 = per_n[0][1]
    return MulhollandDecomposition(
        E=E, sigma_total=total, sigma1=s1, sigma_res=sres, sigma2=s2,
        sigma1_mod=s1 - sr0, sigma_res_mod=_sigma_res_mod(k, poles),
        per_n=per_n)
