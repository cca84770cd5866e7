"""Regge poles, Siegert energies, trajectory continuation, and classification.

A Regge pole is a zero lambda~(E) of the matching defect Delta1 at fixed
real energy; a Siegert state is a zero E~(lambda) in complex energy at
fixed real angular momentum.  Both live on the zero set of the same
analytic function, approached along different slices:

* :func:`find_regge_pole` / :func:`trace_regge_trajectory` follow
  lambda~(E) through the complex angular-momentum plane as the real
  energy varies.
* :func:`find_siegert_energy` / :func:`trace_siegert_trajectory` follow
  E~(lambda); the solve runs in the wavenumber k rather than E so the
  sqrt(E) branch point never gets in the way, and the Riemann sheet is
  selected purely by the sign of Im k of the seed (Im k > 0 reaches
  bound states, Im k < 0 the decaying resonances).
* :func:`classify_trajectory` evaluates E~(1/2) = E0 - i*gamma and sorts
  a trajectory into the two families: bound-correlated (E0 < 0,
  gamma ~ 0) and metastable-correlated (E0 > 0, gamma > 0).
* :func:`scan_poles` finds every zero of Delta1 in a rectangle by
  argument-principle winding counts on the boundary (Delta1 is entire in
  lambda, so the winding equals the number of enclosed zeros), followed
  by recursive quadrisection and Newton polish.

All Newton derivatives are central differences with one Richardson pass;
Delta1 is analytic but has no cheap closed derivative.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import (
    BoundaryZeroError,
    ClassificationError,
    ContinuationLostError,
    DomainError,
    JumpGuardError,
    NoConvergenceError,
    NonIntegralWindingError,
    SolverError,
    WrongSheetError,
)
from .model import (
    ChannelKinematics,
    PotentialParams,
    ReggePole,
    _delta_terms,
    _dlam_delta1,
    kinematics,
    kinematics_from_k,
    pole_function,
    residue,
)

__all__ = [
    "ReggeTrajectory",
    "SiegertTrajectory",
    "TrajectoryClass",
    "KIND_BOUND",
    "KIND_METASTABLE",
    "find_regge_pole",
    "trace_regge_trajectory",
    "find_siegert_energy",
    "trace_siegert_trajectory",
    "classify_trajectory",
    "lambda_estimate",
    "scan_poles",
    "region_winding",
    "bound_levels_swave",
    "metastable_levels_swave",
]

#: Newton in lambda rejects results farther than this from the seed.
JUMP_GUARD_LAMBDA = 0.5
#: Newton in k (Siegert solves) rejects results farther than this from the seed.
JUMP_GUARD_K = 0.3
#: Iteration cap for all Newton solves.
NEWTON_MAX_ITER = 50
#: Newton converges when the last step is below this.
NEWTON_XTOL = 1e-12
#: Relative finite-difference step for Newton derivatives.
NEWTON_FD_STEP = 1e-6
#: Steps below this (relative) mark a Newton iterate rattling at the
#: evaluation noise floor of Delta1 rather than still converging.
RATTLE_BAND = 3e-7
#: A rattling iterate is accepted if its best |Delta1|/scale sits below
#: this, half an order under the pole-validity threshold of the residue.
RATTLE_ACCEPT = 5e-8
#: A bound state must have |Im E~| below this (classification threshold).
TOL_BOUND = 1e-9
#: Maximum interval halvings before continuation gives up.
MAX_HALVINGS = 6
#: Winding estimates must land within this of an integer.
WINDING_SNAP = 0.1
#: |Delta1|/scale below this on a scan boundary flags a pole on the edge.
BOUNDARY_ZERO_RTOL = 1e-6

KIND_BOUND = "bound-correlated"
KIND_METASTABLE = "metastable-correlated"


@dataclass(frozen=True)
class ReggeTrajectory:
    """A Regge trajectory lambda~(E) sampled on a monotone energy grid.

    Attributes
    ----------
    params : PotentialParams
        Potential the trajectory belongs to.
    samples : tuple of (E, lambda, residue)
        One converged pole per grid energy, in grid order.  Consecutive
        lambda values stay within the continuation jump guard, so the
        samples follow a single analytic branch.
    sheet_tag : str
        Continuation label (kinematic sheet of the underlying solves).
    """

    params: PotentialParams
    samples: tuple
    sheet_tag: str = "physical"

    def energies(self) -> np.ndarray:
        return np.array([s[0] for s in self.samples], dtype=float)

    def lambdas(self) -> np.ndarray:
        return np.array([s[1] for s in self.samples], dtype=complex)

    def residues(self) -> np.ndarray:
        return np.array([s[2] for s in self.samples], dtype=complex)


@dataclass(frozen=True)
class SiegertTrajectory:
    """A Siegert trajectory E~(lambda) sampled on a monotone real-lambda grid.

    samples: tuple of (lambda, E~) with each E~ zeroing Delta1 at its
    lambda; Im E~ <= 0 for the decaying states reached by continuation
    onto the Im k < 0 sheet.
    """

    params: PotentialParams
    samples: tuple


@dataclass(frozen=True)
class TrajectoryClass:
    """Family of a trajectory, decided by E~(1/2) = E0 - i*gamma.

    kind is :data:`KIND_BOUND` when the lambda = 1/2 state is a true
    bound state (E0 < 0, gamma below the bound tolerance) and
    :data:`KIND_METASTABLE` when it is a decaying resonance (E0 > 0,
    gamma > 0).
    """

    kind: str
    E0: float
    gamma: float

    def __post_init__(self):
        ok_bound = self.kind == KIND_BOUND and self.E0 < 0.0 and self.gamma < TOL_BOUND
        ok_meta = self.kind == KIND_METASTABLE and self.E0 > 0.0 and self.gamma > 0.0
        if not (ok_bound or ok_meta):
            raise ClassificationError(
                f"inconsistent class: kind={self.kind}, E0={self.E0}, gamma={self.gamma}")
        if self.gamma < 0.0:
            raise ClassificationError(f"negative width gamma={self.gamma}")

    @property
    def type_label(self) -> str:
        """Roman numeral used in reports: I for bound, II for metastable."""
        return "I" if self.kind == KIND_BOUND else "II"


# ----------------------------------------------------------------------
# Newton solves
# ----------------------------------------------------------------------

def _newton_lambda(params: PotentialParams, kin: ChannelKinematics,
                   seed: complex, cap: float) -> complex:
    """Damped Newton for a zero of Delta1 in lambda.

    Steps larger than half the jump guard are clamped (pure Newton can
    overshoot into a cylinder-function trough far from any zero); the
    caller checks the final distance from the seed against the guard.
    """
    lam = complex(seed)
    clamp = 0.5 * cap
    best = (math.inf, lam)
    rattle = 0
    for _ in range(NEWTON_MAX_ITER):
        f, _, scale = _delta_terms(params, kin, lam)
        if abs(f) / scale < best[0]:
            best = (abs(f) / scale, lam)
        if abs(f) <= 5e-14 * scale:
            return lam
        df = _dlam_delta1(params, kin, lam, step=NEWTON_FD_STEP * max(1.0, abs(lam)))
        if df == 0:
            raise SolverError(f"vanishing dDelta1/dlam at lambda={lam}")
        step = f / df
        if abs(step) > clamp:
            step *= clamp / abs(step)
        lam -= step
        if abs(step) < NEWTON_XTOL * max(1.0, abs(lam)):
            return lam
        # Rattling in a microscopic ball means the residual has hit the
        # noise floor of the Delta1 evaluation; accept the best iterate
        # provided it is comfortably below the pole-validity threshold.
        if abs(step) < RATTLE_BAND * max(1.0, abs(lam)):
            rattle += 1
            if rattle >= 4 and best[0] <= RATTLE_ACCEPT:
                return best[1]
        else:
            rattle = 0
    raise NoConvergenceError(
        f"Newton in lambda did not converge from seed {seed} at E={kin.E}")


def find_regge_pole(params: PotentialParams, E: float, seed: complex) -> ReggePole:
    """Locate the Regge pole nearest a seed at fixed real energy.

    Newton iteration on Delta1(E, lambda) with central-difference
    derivatives (relative step 1e-6, one Richardson pass), converged when
    the step falls below 1e-12.  The result must stay within the jump
    guard of the seed -- a larger move almost certainly means the
    iteration slid to a different pole, which callers doing continuation
    must treat as a failure, not an answer.

    Parameters
    ----------
    params : PotentialParams
        Potential layout.
    E : float
        Real energy of the lambda-plane slice.
    seed : complex
        Starting guess for lambda~.

    Returns
    -------
    ReggePole
        Converged pole with its residue attached.

    Raises
    ------
    NoConvergenceError
        After 50 iterations without meeting the step tolerance.
    JumpGuardError
        If the converged pole is farther than 0.5 from the seed.
    DomainError
        If the iteration leaves the cylinder-function domain box.
    """
    kin = kinematics(params, float(E))
    lam = _newton_lambda(params, kin, complex(seed), JUMP_GUARD_LAMBDA)
    if abs(lam - seed) > JUMP_GUARD_LAMBDA:
        raise JumpGuardError(
            f"pole at {lam} is {abs(lam - seed):.3g} from seed {seed} "
            f"(guard {JUMP_GUARD_LAMBDA})")
    return ReggePole(E=float(E), lam=lam, residue=residue(params, float(E), lam))


def _dk_delta1(params: PotentialParams, k: complex, lam: complex) -> complex:
    """dDelta1/dk by central differences with one Richardson pass."""
    h = NEWTON_FD_STEP * max(1.0, abs(k))

    def central(hh: float) -> complex:
        fp = pole_function(params, kinematics_from_k(params, k + hh), lam)
        fm = pole_function(params, kinematics_from_k(params, k - hh), lam)
        return (fp - fm) / (2.0 * hh)

    g1 = central(h)
    g2 = central(h / 2.0)
    return (4.0 * g2 - g1) / 3.0


def _newton_k(params: PotentialParams, lam: complex, k_seed: complex,
              cap: float) -> complex:
    """Damped Newton for a zero of Delta1 in the wavenumber k."""
    k = complex(k_seed)
    clamp = 0.5 * cap
    best = (math.inf, k)
    rattle = 0
    for _ in range(NEWTON_MAX_ITER):
        f, _, scale = _delta_terms(params, kinematics_from_k(params, k), lam)
        if abs(f) / scale < best[0]:
            best = (abs(f) / scale, k)
        if abs(f) <= 5e-14 * scale:
            return k
        df = _dk_delta1(params, k, lam)
        if df == 0:
            raise SolverError(f"vanishing dDelta1/dk at k={k}")
        step = f / df
        if abs(step) > clamp:
            step *= clamp / abs(step)
        k -= step
        if abs(step) < NEWTON_XTOL * max(1.0, abs(k)):
            return k
        if abs(step) < RATTLE_BAND * max(1.0, abs(k)):
            rattle += 1
            if rattle >= 4 and best[0] <= RATTLE_ACCEPT:
                return best[1]
        else:
            rattle = 0
    raise NoConvergenceError(
        f"Newton in k did not converge from seed {k_seed} at lambda={lam}")


def find_siegert_energy(params: PotentialParams, lam: float,
                        seed_E: complex) -> complex:
    """Complex Siegert energy E~(lambda) continued from an energy seed.

    The solve runs in k = sqrt(2E) (principal branch of the seed) so the
    iteration never crosses the sqrt branch cut: bound-state seeds
    (real E < 0) start on the positive imaginary k-axis, resonance seeds
    (Im E < 0, or real E > 0) start at Im k <= 0 and converge into the
    fourth quadrant of the k-plane where decaying states live.

    Parameters
    ----------
    params : PotentialParams
        Potential layout.
    lam : float
        Real angular-momentum variable, e.g. 1/2 for s-wave states.
    seed_E : complex
        Energy guess; its sheet (sign of Im k) selects the state type.

    Returns
    -------
    complex
        E~ = k^2/2 at the converged zero of Delta1.

    Raises
    ------
    NoConvergenceError
        After 50 iterations.
    JumpGuardError
        If k moved farther than 0.3 from the seed wavenumber.
    WrongSheetError
        If a bound-state request converged to a complex energy, or a
        resonance request converged to a growing (Im E~ > 0) state.
    """
    seed_E = complex(seed_E)
    k_seed = cmath.sqrt(2.0 * seed_E)
    bound_request = seed_E.real < 0.0 and abs(seed_E.imag) <= 1e-12 * max(1.0, abs(seed_E))
    k = _newton_k(params, complex(lam), k_seed, JUMP_GUARD_K)
    if abs(k - k_seed) > JUMP_GUARD_K:
        raise JumpGuardError(
            f"Siegert solve moved k by {abs(k - k_seed):.3g} from {k_seed} "
            f"(guard {JUMP_GUARD_K})")
    energy = 0.5 * k * k
    if bound_request:
        if abs(energy.imag) > TOL_BOUND * max(1.0, abs(energy)):
            raise WrongSheetError(
                f"bound-state seed {seed_E} converged to complex E~={energy}")
        return complex(energy.real, 0.0)
    if energy.imag > TOL_BOUND * max(1.0, abs(energy)):
        raise WrongSheetError(
            f"resonance seed {seed_E} converged to a growing state E~={energy}")
    return energy


# ----------------------------------------------------------------------
# Continuation
# ----------------------------------------------------------------------

def _check_monotone(grid: np.ndarray, name: str) -> np.ndarray:
    diffs = np.diff(grid)
    if len(grid) < 1 or (len(grid) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0))):
        raise DomainError(f"{name} must be strictly monotone")
    return grid


def _continue_root(solve, history: list, target: float) -> complex:
    """One continuation step with linear-extrapolation seeds and halving.

    ``solve(x, seed)`` produces the root at abscissa ``x``; ``history``
    holds the accepted (x, root) pairs.  On a jump-guard trip or
    non-convergence the interval from the last accepted abscissa is
    halved (up to 6 times), stepping through intermediate solves whose
    results seed further extrapolation but are recorded only in the
    history, not returned.
    """

    def seed_at(x: float) -> complex:
        if len(history) >= 2:
            (xa, ra), (xb, rb) = history[-2], history[-1]
            return rb + (ra - rb) * (x - xb) / (xa - xb)
        return history[-1][1]

    halvings = 0
    while True:
        x_from = history[-1][0]
        n_sub = 2 ** halvings
        try:
            for j in range(1, n_sub + 1):
                x = x_from + (target - x_from) * j / n_sub
                root = solve(x, seed_at(x))
                history.append((x, root))
            return history[-1][1]
        except (JumpGuardError, NoConvergenceError) as exc:
            while history and history[-1][0] != x_from:
                history.pop()
            halvings += 1
            if halvings > MAX_HALVINGS:
                raise ContinuationLostError(
                    f"continuation lost between {x_from} and {target}: {exc}") from exc


def trace_regge_trajectory(params: PotentialParams, E_grid, seed: complex) -> ReggeTrajectory:
    """Follow one Regge pole across a monotone grid of real energies.

    The first grid energy is solved directly from ``seed``; each later
    energy is seeded by linear extrapolation of the two previous
    solutions.  When a step trips the jump guard (the pole moved farther
    than pole spacing allows) the energy interval is halved, up to six
    times, before the trace is declared lost.

    Parameters
    ----------
    params : PotentialParams
        Potential layout.
    E_grid : array_like
        Strictly monotone real energies (either direction).
    seed : complex
        Lambda guess for the first grid energy.

    Returns
    -------
    ReggeTrajectory
        One (E, lambda~, residue) sample per grid energy, in grid order.

    Raises
    ------
    ContinuationLostError
        When halving is exhausted -- the trajectory left the domain or
        collided with another branch.
    """
    grid = _check_monotone(np.atleast_1d(np.asarray(E_grid, dtype=float)), "E_grid")

    def solve(E: float, lam_seed: complex) -> complex:
        kin = kinematics(params, E)
        lam = _newton_lambda(params, kin, lam_seed, JUMP_GUARD_LAMBDA)
        if abs(lam - lam_seed) > JUMP_GUARD_LAMBDA:
            raise JumpGuardError(
                f"pole moved {abs(lam - lam_seed):.3g} at E={E}")
        return lam

    first = solve(grid[0], complex(seed))
    history = [(float(grid[0]), first)]
    roots = [first]
    for E in grid[1:]:
        roots.append(_continue_root(solve, history, float(E)))
    samples = tuple((float(E), lam, residue(params, float(E), lam))
                    for E, lam in zip(grid, roots))
    return ReggeTrajectory(params=params, samples=samples, sheet_tag="physical")


def trace_siegert_trajectory(params: PotentialParams, lam_grid,
                             seed_E: complex) -> SiegertTrajectory:
    """Follow one Siegert state across a monotone grid of real lambda.

    Continuation runs in the wavenumber plane: the k of each accepted
    solution seeds the next lambda by linear extrapolation, with the
    same halving strategy as the Regge trace and a 0.3 jump guard in k.
    """
    grid = _check_monotone(np.atleast_1d(np.asarray(lam_grid, dtype=float)), "lam_grid")

    def solve(lam: float, k_seed: complex) -> complex:
        k = _newton_k(params, complex(lam), k_seed, JUMP_GUARD_K)
        if abs(k - k_seed) > JUMP_GUARD_K:
            raise JumpGuardError(f"Siegert k moved {abs(k - k_seed):.3g} at lambda={lam}")
        return k

    k0 = cmath.sqrt(2.0 * complex(seed_E))
    first = solve(float(grid[0]), k0)
    history = [(float(grid[0]), first)]
    ks = [first]
    for lam in grid[1:]:
        ks.append(_continue_root(solve, history, float(lam)))
    samples = tuple((float(lam), 0.5 * k * k) for lam, k in zip(grid, ks))
    for lam, energy in samples:
        if energy.imag > TOL_BOUND * max(1.0, abs(energy)):
            raise WrongSheetError(
                f"growing state E~={energy} at lambda={lam} on a decay trace")
    return SiegertTrajectory(params=params, samples=samples)


# ----------------------------------------------------------------------
# s-wave levels and classification
# ----------------------------------------------------------------------

def _swave_condition(params: PotentialParams, k: complex) -> complex:
    """Closed-form lambda = 1/2 quantization function, entire in k.

    At lambda = 1/2 the interior wave is sin(q(r-c)) and the outgoing
    exterior is e^{ikr}, so matching with the delta-shell jump reduces
    Delta1 to q cos(qd) + (2*Omega - ik) sin(qd) up to a nonvanishing
    factor.  Written with cos/sin (not cot) the function has no poles,
    which keeps bracketing and Newton uncomplicated.
    """
    q = cmath.sqrt(k * k + 2.0 * params.V)
    qd = q * params.d
    return q * cmath.cos(qd) + (2.0 * params.Omega - 1j * k) * cmath.sin(qd)


def bound_levels_swave(params: PotentialParams) -> list:
    """All s-wave (lambda = 1/2) bound-state energies, ascending.

    For E = -kappa^2/2 < 0 the quantization condition is real:
    q cos(qd) + (2*Omega + kappa) sin(qd) = 0 with q = sqrt(2V - kappa^2).
    Roots are bracketed on a kappa grid and polished by bisection, which
    doubles as an independent real-axis oracle for the general Siegert
    solver.
    """
    if params.V <= 0.0:
        return []
    kap_max = math.sqrt(2.0 * params.V)

    def f(kap: float) -> float:
        return _swave_condition(params, 1j * kap).real

    grid = np.linspace(1e-9, kap_max * (1.0 - 1e-12), 2001)
    vals = np.array([f(x) for x in grid])
    energies = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            energies.append(-0.5 * a * a)
        elif fa * fb < 0.0:
            kap = brentq(f, a, b, xtol=1e-13, rtol=1e-15)
            energies.append(-0.5 * kap * kap)
    return sorted(energies)


def metastable_levels_swave(params: PotentialParams, count: int = 2) -> list:
    """Lowest s-wave metastable energies E0 - i*gamma (gamma > 0).

    Seeds come from the impenetrable-shell levels sin(qd) = 0, i.e.
    E_n = (n*pi/d)^2/2 - V for those n with E_n > 0; a damped complex
    Newton on the closed-form condition pulls each onto the true
    resonance.  Non-convergent or spurious (gamma <= 0) seeds are
    dropped, so very broad states at weak shells may be absent.
    """
    out = []
    n = max(1, int(math.ceil(params.d * math.sqrt(2.0 * params.V) / math.pi)))
    found = 0
    while found < count and n < 60:
        e_hard = 0.5 * (n * math.pi / params.d) ** 2 - params.V
        n += 1
        if e_hard <= 0.0:
            continue
        k = math.sqrt(2.0 * e_hard) * (1.0 - 0.01j)
        try:
            for _ in range(NEWTON_MAX_ITER):
                h = NEWTON_FD_STEP * max(1.0, abs(k))
                df = (_swave_condition(params, k + h)
                      - _swave_condition(params, k - h)) / (2.0 * h)
                step = _swave_condition(params, k) / df
                if abs(step) > JUMP_GUARD_K:
                    step *= JUMP_GUARD_K / abs(step)
                k -= step
                if abs(step) < NEWTON_XTOL:
                    break
            else:
                continue
        except ZeroDivisionError:
            continue
        energy = 0.5 * k * k
        if energy.real > 0.0 and energy.imag < 0.0:
            out.append(energy)
            found += 1
    return out


def classify_trajectory(params: PotentialParams, seed_E: complex = None) -> TrajectoryClass:
    """Classify the trajectory through the s-wave state nearest threshold.

    Evaluates E~(1/2) = E0 - i*gamma with :func:`find_siegert_energy`
    and applies the two-family criterion: a bound state (E0 < 0,
    gamma ~ 0) marks a bound-correlated trajectory, a decaying resonance
    (E0 > 0, gamma > 0) a metastable-correlated one.

    Parameters
    ----------
    params : PotentialParams
        Potential layout.
    seed_E : complex, optional
        Which lambda = 1/2 state to classify.  When omitted, the bound
        and metastable closed-form levels are enumerated and the state
        nearest E = 0 is taken -- the one whose trajectory shapes the
        low-energy cross section.

    Raises
    ------
    ClassificationError
        If no seedable state exists or the converged state fits neither
        family.
    Solver errors
        Propagated from :func:`find_siegert_energy`.
    """
    if seed_E is None:
        candidates = [complex(e) for e in bound_levels_swave(params)]
        candidates += metastable_levels_swave(params)
        if not candidates:
            raise ClassificationError(
                "no s-wave bound or metastable state to classify")
        seed_E = min(candidates, key=abs)
    energy = find_siegert_energy(params, 0.5, seed_E)
    e0, gamma = energy.real, -energy.imag
    if e0 < 0.0 and abs(gamma) < TOL_BOUND:
        return TrajectoryClass(kind=KIND_BOUND, E0=e0, gamma=max(gamma, 0.0) + 0.0)
    if e0 > 0.0 and gamma > 0.0:
        return TrajectoryClass(kind=KIND_METASTABLE, E0=e0, gamma=gamma)
    raise ClassificationError(
        f"state E~(1/2)={energy} fits neither trajectory family")


def lambda_estimate(params: PotentialParams, E: float, E0: float) -> complex:
    """Centrifugal-alignment estimate of the Regge pole position.

    A state at energy E0 for lambda = 1/2 needs an extra centrifugal
    shift to sit at energy E, which at the well midpoint radius
    R - d/2 gives

        lambda~^2 ~ 2 (E - E0) (R - d/2)^2 + 1/4.

    The principal square root is returned, which places lambda~ on the
    positive imaginary axis when the radicand turns negative (E below
    the real-lambda threshold).
    """
    radicand = 2.0 * (complex(E) - complex(E0)) * (params.R - 0.5 * params.d) ** 2 + 0.25
    return cmath.sqrt(radicand)


# ----------------------------------------------------------------------
# Region scan by the argument principle
# ----------------------------------------------------------------------

def _edge_points(a: complex, b: complex, n: int) -> np.ndarray:
    return a + (b - a) * (np.arange(n) / n)


def _eval_boundary(params, kin, pts) -> np.ndarray:
    vals = np.empty(len(pts), dtype=complex)
    for i, lam in enumerate(pts):
        d1, _, scale = _delta_terms(params, kin, complex(lam))
        if abs(d1) < BOUNDARY_ZERO_RTOL * scale:
            raise BoundaryZeroError(
                f"Delta1 vanishes on the scan boundary near lambda={lam}")
        vals[i] = d1
    return vals


def _winding(params: PotentialParams, kin: ChannelKinematics, region) -> int:
    """Winding number of Delta1 around a rectangle boundary.

    The phase of Delta1 is accumulated by continuation along sampled
    boundary points, with points reused as the sampling doubles.  A
    winding is accepted only when adjacent phase steps are unambiguous
    (< 1.5 rad), the total lands within 0.1 of an integer, and two
    consecutive refinement levels agree -- phase aliasing that survives
    one sampling level does not survive its refinement.  Delta1 is
    entire in lambda, so the count equals the number of enclosed zeros
    and can never be negative.
    """
    re0, re1, im0, im1 = region
    corners = [complex(re0, im0), complex(re1, im0),
               complex(re1, im1), complex(re0, im1)]
    edges = list(zip(corners, corners[1:] + corners[:1]))
    n = 64
    pts = [_edge_points(a, b, n) for a, b in edges]
    vals = [_eval_boundary(params, kin, p) for p in pts]
    prev_w = None
    while n <= 8192:
        loop = np.concatenate(vals + [vals[0][:1]])
        phases = np.unwrap(np.angle(loop))
        total = (phases[-1] - phases[0]) / (2.0 * math.pi)
        w = None
        if np.max(np.abs(np.diff(phases))) < 1.5 and abs(total - round(total)) < WINDING_SNAP:
            w = int(round(total))
        if w is not None and w == prev_w:
            if w < 0:
                raise NonIntegralWindingError(
                    f"negative winding {w} over {region}: Delta1 is entire, "
                    "so this is a sampling failure")
            return w
        prev_w = w
        n *= 2
        new_pts, new_vals = [], []
        for (a, b), p, v in zip(edges, pts, vals):
            fine = _edge_points(a, b, n)
            fv = np.empty(n, dtype=complex)
            fv[0::2] = v
            fv[1::2] = _eval_boundary(params, kin, fine[1::2])
            new_pts.append(fine)
            new_vals.append(fv)
        pts, vals = new_pts, new_vals
    raise NonIntegralWindingError(
        f"winding over {region} did not stabilize to an integer")


def _split_region(region, tx: float, ty: float):
    re0, re1, im0, im1 = region
    rm = re0 + (re1 - re0) * tx
    im = im0 + (im1 - im0) * ty
    return [(re0, rm, im0, im), (rm, re1, im0, im),
            (re0, rm, im, im1), (rm, re1, im, im1)]


def _scan_cell(params: PotentialParams, kin: ChannelKinematics, region,
               expected: int) -> list:
    if expected == 0:
        return []
    re0, re1, im0, im1 = region
    diag = math.hypot(re1 - re0, im1 - im0)
    if expected == 1:
        seed = complex(0.5 * (re0 + re1), 0.5 * (im0 + im1))
        try:
            lam = _newton_lambda(params, kin, seed, cap=diag)
            inside = (re0 - 1e-9 <= lam.real <= re1 + 1e-9
                      and im0 - 1e-9 <= lam.imag <= im1 + 1e-9)
            if inside:
                return [lam]
        except (NoConvergenceError, SolverError, DomainError):
            pass
    if diag < 1e-6:
        raise SolverError(
            f"unresolvable zero cluster of multiplicity {expected} near {region}")
    # Quadrisect; nudge the split point off any pole that lands on the cut.
    for tx, ty in ((0.5, 0.5), (0.47, 0.53), (0.55, 0.45), (0.52, 0.48)):
        try:
            parts = _split_region(region, tx, ty)
            winds = [_winding(params, kin, p) for p in parts]
        except BoundaryZeroError:
            continue
        if sum(winds) != expected:
            continue
        roots = []
        for part, w in zip(parts, winds):
            roots.extend(_scan_cell(params, kin, part, w))
        return roots
    raise BoundaryZeroError(
        f"could not split {region} without a pole on the cut")


def scan_poles(params: PotentialParams, E: float, region) -> list:
    """All Regge poles inside a rectangle of the lambda plane.

    The boundary winding of Delta1 counts the zeros inside (argument
    principle, Delta1 entire); cells with more than one zero are
    quadrisected recursively, singly occupied cells are polished by
    Newton from the centroid.  Because Delta1(-lambda) equals Delta1
    times a phase, zeros pair as +-lambda~; when the region straddles
    Re lambda = 0, only the Re > 0 representative of each pair is kept.

    Parameters
    ----------
    params : PotentialParams
        Potential layout.
    E : float
        Real energy of the slice.
    region : tuple
        (re_min, re_max, im_min, im_max) within the cylinder domain box.

    Returns
    -------
    list of ReggePole
        Poles sorted by real part, each with its residue.

    Raises
    ------
    BoundaryZeroError
        A pole sits within ~1e-6 of the requested boundary; nudge the
        region and retry.
    NonIntegralWindingError
        Boundary sampling failed to resolve the winding integer.
    """
    re0, re1, im0, im1 = (float(x) for x in region)
    if not (re0 < re1 and im0 < im1):
        raise DomainError(f"degenerate region {region}")
    kin = kinematics(params, float(E))
    total = _winding(params, kin, (re0, re1, im0, im1))
    roots = _scan_cell(params, kin, (re0, re1, im0, im1), total)

    # Zeros pair as +-lambda~; collapse mirror pairs onto the Re > 0 member
    # (a lone zero with Re < 0, whose mirror lies outside the region, stays).
    deduped = []
    for lam in sorted(roots, key=lambda z: (z.real, z.imag)):
        matched = False
        for idx, u in enumerate(deduped):
            if abs(lam - u) < 1e-8:
                matched = True
                break
            if abs(lam + u) < 1e-8:
                if lam.real > u.real:
                    deduped[idx] = lam
                matched = True
                break
        if not matched:
            deduped.append(lam)
    out = [ReggePole(E=float(E), lam=lam, residue=residue(params, float(E), lam))
           for lam in deduped]
    return sorted(out, key=lambda p: p.lam.real)


def region_winding(params: PotentialParams, E: float, region) -> int:
    """Boundary winding of Delta1 over a rectangle (zero count inside)."""
    re0, re1, im0, im1 = (float(x) for x in region)
    if not (re0 < re1 and im0 < im1):
        raise DomainError(f"degenerate region {region}")
    return _winding(params, kinematics(params, float(E)), (re0, re1, im0, im1))
